#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>

#include "riemflow/pauli.hpp"

namespace riemflow {

/// Dense statevector simulation is guarded at 2^12 amplitudes.
inline constexpr int kStateQubitGuard = 12;

/// A normalized pure state over 2^N complex amplitudes. Qubit 0 owns the most
/// significant bit of the amplitude index.
class StateVector {
 public:
  StateVector(int n_qubits, Eigen::VectorXcd amplitudes);

  int n_qubits() const { return n_qubits_; }
  Eigen::Index dim() const { return amplitudes_.size(); }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  Eigen::VectorXcd& amplitudes() { return amplitudes_; }

  double norm() const { return amplitudes_.norm(); }

 private:
  int n_qubits_;
  Eigen::VectorXcd amplitudes_;
};

/// |0...0>.
StateVector init_zero_state(int n_qubits);

struct Gate {
  enum class Kind { hadamard, cnot, rx, ry, rz, pauli_rotation };

  Kind kind;
  int wire = -1;     // target wire for single-qubit kinds, cnot target
  int control = -1;  // cnot only
  double angle = 0.0;
  std::optional<PauliWord> word;  // pauli_rotation only

  static Gate hadamard(int wire);
  static Gate cnot(int control, int target);
  static Gate rx(int wire, double angle);
  static Gate ry(int wire, double angle);
  static Gate rz(int wire, double angle);
  static Gate pauli_rotation(PauliWord word, double angle);

  std::string to_string() const;
};

/// Applies the gate in place. Rotations implement exp(-i*angle*K/2) for the
/// generating Pauli word K, acting through the bitmask kernels (no dense
/// matrices are formed).
void apply_gate(StateVector& state, const Gate& gate);

/// <psi| H |psi>; the imaginary residue (< 1e-10 for Hermitian input) is
/// discarded.
double expectation(const StateVector& state, const PauliSum& hamiltonian);

double expectation(const StateVector& state, const PauliWord& word);

/// Unbiased shot-sampled estimator: each Pauli term is measured in its own
/// eigenbasis with `shots` repetitions. Deterministic for a fixed seed.
double expectation_sampled(const StateVector& state,
                           const PauliSum& hamiltonian, std::int64_t shots,
                           std::uint64_t rng_seed);

struct DenseUnitary {
  Eigen::MatrixXcd matrix;
};

/// exp(Omega) for skew-Hermitian Omega, via the Hermitian eigendecomposition
/// of A = -i*Omega: V diag(exp(i*lambda)) V^dagger. Unitary to rounding.
DenseUnitary expm_skew_hermitian(const Eigen::MatrixXcd& omega);

/// Matrix-vector product followed by renormalization; rejects inputs whose
/// norm drift exceeds 1e-10.
StateVector apply_dense_unitary(const StateVector& state,
                                const DenseUnitary& unitary);

}  // namespace riemflow
