#include "riemflow/dense.hpp"

#include <bit>

#include "detail/pauli_kernels.hpp"

namespace riemflow {

Eigen::MatrixXcd word_to_dense(const PauliWord& word) {
  const int n = word.n_qubits();
  if (n > kDenseQubitGuard) {
    throw std::invalid_argument("dense conversion guarded at " +
                                std::to_string(kDenseQubitGuard) + " qubits");
  }
  const std::int64_t dim = std::int64_t{1} << n;
  const detail::IndexMasks masks = detail::to_index_masks(word);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::int64_t col = 0; col < dim; ++col) {
    out(col ^ masks.x, col) = detail::word_phase(masks, col);
  }
  return out;
}

Eigen::MatrixXcd pauli_sum_to_dense(const PauliSum& sum) {
  const int n = sum.n_qubits();
  if (n > kDenseQubitGuard) {
    throw std::invalid_argument("dense conversion guarded at " +
                                std::to_string(kDenseQubitGuard) + " qubits");
  }
  const std::int64_t dim = std::int64_t{1} << n;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& term : sum.terms()) {
    const detail::IndexMasks masks = detail::to_index_masks(term.word);
    for (std::int64_t col = 0; col < dim; ++col) {
      out(col ^ masks.x, col) += term.coefficient * detail::word_phase(masks, col);
    }
  }
  return out;
}

}  // namespace riemflow
