// Test-side reference implementations, kept independent of the library's
// computational paths: dense matrices come from literal 2x2 Paulis folded
// with an explicit Kronecker product, exponentials from a plain Taylor
// series, and minima from grid search.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <numbers>
#include <random>

#include "riemflow/pauli.hpp"
#include "riemflow/state.hpp"

namespace ref {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline Matrix letter_matrix(riemflow::PauliLetter letter) {
  Matrix m(2, 2);
  const Complex i(0.0, 1.0);
  switch (letter) {
    case riemflow::PauliLetter::I: m << 1, 0, 0, 1; break;
    case riemflow::PauliLetter::X: m << 0, 1, 1, 0; break;
    case riemflow::PauliLetter::Y: m << 0, -i, i, 0; break;
    case riemflow::PauliLetter::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

// Qubit 0 is the leftmost (most significant) tensor factor.
inline Matrix word_matrix(const riemflow::PauliWord& word) {
  Matrix out = Matrix::Identity(1, 1);
  for (int w = 0; w < word.n_qubits(); ++w) {
    out = kron(out, letter_matrix(word.letter(w)));
  }
  return out;
}

inline Matrix sum_matrix(const riemflow::PauliSum& h) {
  const Eigen::Index dim = Eigen::Index{1} << h.n_qubits();
  Matrix out = Matrix::Zero(dim, dim);
  for (const auto& term : h.terms()) {
    out += term.coefficient * word_matrix(term.word);
  }
  return out;
}

inline Matrix expm_taylor(const Matrix& m, int terms = 50) {
  Matrix out = Matrix::Identity(m.rows(), m.cols());
  Matrix power = Matrix::Identity(m.rows(), m.cols());
  double factorial = 1.0;
  for (int k = 1; k <= terms; ++k) {
    power = power * m;
    factorial *= k;
    out += power / factorial;
  }
  return out;
}

inline double grid_search_min(const std::function<double(double)>& f,
                              int points = 10000) {
  double best = f(0.0);
  for (int k = 0; k < points; ++k) {
    const double theta =
        -std::numbers::pi + 2.0 * std::numbers::pi * (k + 1) / points;
    best = std::min(best, f(theta));
  }
  return best;
}

inline riemflow::StateVector random_state(int n_qubits, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector amps(Eigen::Index{1} << n_qubits);
  for (Eigen::Index i = 0; i < amps.size(); ++i) {
    amps(i) = Complex(normal(rng), normal(rng));
  }
  amps.normalize();
  return {n_qubits, std::move(amps)};
}

inline riemflow::PauliWord random_word(int n_qubits, std::mt19937_64& rng,
                                       bool allow_identity = false) {
  std::uniform_int_distribution<std::uint64_t> mask(
      0, (std::uint64_t{1} << n_qubits) - 1);
  while (true) {
    const std::uint64_t x = mask(rng);
    const std::uint64_t z = mask(rng);
    if (!allow_identity && x == 0 && z == 0) continue;
    return {n_qubits, x, z};
  }
}

inline riemflow::PauliSum random_pauli_sum(int n_qubits, int n_terms,
                                           std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  riemflow::PauliSum h(n_qubits);
  for (int t = 0; t < n_terms; ++t) {
    h.add(coeff(rng), random_word(n_qubits, rng));
  }
  return h;
}

inline Matrix density(const riemflow::StateVector& state) {
  return state.amplitudes() * state.amplitudes().adjoint();
}

}  // namespace ref
