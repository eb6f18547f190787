#pragma once

#include <Eigen/Dense>

#include "riemflow/pauli.hpp"

namespace riemflow {

/// Qubit counts above this would need > 4096^2 dense complex entries.
inline constexpr int kDenseQubitGuard = 12;

/// Dense 2^N x 2^N matrix of a Pauli word. Qubit 0 is the leftmost Kronecker
/// factor, i.e. the most significant bit of the basis-state index.
Eigen::MatrixXcd word_to_dense(const PauliWord& word);

/// Dense Hermitian matrix of a weighted Pauli sum.
Eigen::MatrixXcd pauli_sum_to_dense(const PauliSum& sum);

}  // namespace riemflow
