#include "riemflow/oracle.hpp"

#include <cmath>

#include "riemflow/dense.hpp"
#include "riemflow/flows.hpp"

namespace riemflow {

namespace {
constexpr double kDegeneracyTolerance = 1e-9;
}

GroundTruth ground_truth(const PauliSum& hamiltonian) {
  const Eigen::MatrixXcd dense = pauli_sum_to_dense(hamiltonian);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(dense);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("ground_truth: eigendecomposition failed");
  }
  GroundTruth gt;
  gt.eigenvalues = solver.eigenvalues();
  gt.ground_energy = gt.eigenvalues(0);
  gt.degeneracy = 0;
  for (Eigen::Index k = 0; k < gt.eigenvalues.size(); ++k) {
    if (gt.eigenvalues(k) - gt.ground_energy <= kDegeneracyTolerance) {
      ++gt.degeneracy;
    }
  }
  gt.ground_basis = solver.eigenvectors().leftCols(gt.degeneracy);
  gt.spectral_norm = std::max(std::abs(gt.eigenvalues(0)),
                              std::abs(gt.eigenvalues(gt.eigenvalues.size() - 1)));
  return gt;
}

double residual(double energy, const GroundTruth& gt) {
  return energy - gt.ground_energy;
}

double ground_space_fidelity(const StateVector& state, const GroundTruth& gt) {
  if (gt.ground_basis.rows() != state.dim()) {
    throw std::invalid_argument("ground_space_fidelity: dimension mismatch");
  }
  double fidelity = 0.0;
  for (Eigen::Index k = 0; k < gt.ground_basis.cols(); ++k) {
    fidelity += std::norm(gt.ground_basis.col(k).dot(state.amplitudes()));
  }
  return fidelity;
}

std::map<int, std::vector<SpectrumEntry>> gradient_spectrum(
    const StateVector& state, const PauliSum& hamiltonian) {
  const int n = state.n_qubits();
  if (n > 8) {
    throw std::invalid_argument(
        "gradient_spectrum: full-basis enumeration guarded at 8 qubits");
  }
  std::map<int, std::vector<SpectrumEntry>> spectrum;
  for (const auto& word : basis_full(n).words) {
    const double c = riemannian_coefficient(
        state, hamiltonian, word, CoefficientMethod::exact_commutator);
    spectrum[word.weight()].push_back({word, std::abs(c)});
  }
  return spectrum;
}

}  // namespace riemflow
