#pragma once

#include <span>
#include <vector>

#include "riemflow/pauli.hpp"
#include "riemflow/state.hpp"

namespace riemflow {
struct GroundTruth;

/// One circuit slot: a fixed gate, or a rotation whose angle is read from the
/// parameter vector (param_index >= 0; several gates may share one index).
struct ParamGate {
  Gate gate;
  int param_index = -1;
};

/// A parameterized circuit over rotation gates with involutory Pauli
/// generators, the shape required by the parameter-shift rule.
class ParamCircuit {
 public:
  ParamCircuit(int n_qubits, std::vector<ParamGate> gates, int n_params,
               std::vector<double> initial_params);

  int n_qubits() const { return n_qubits_; }
  int n_params() const { return n_params_; }
  const std::vector<ParamGate>& gates() const { return gates_; }
  const std::vector<double>& initial_params() const { return initial_params_; }

  /// Applies the circuit to a copy of `initial` with the given parameters.
  StateVector prepare(const StateVector& initial,
                      std::span<const double> params) const;

  /// Same, with an extra angle offset on the single gate at `gate_index`;
  /// this is the per-gate evaluation behind shifted-parameter gradients.
  StateVector prepare_with_offset(const StateVector& initial,
                                  std::span<const double> params,
                                  std::size_t gate_index, double offset) const;

 private:
  int n_qubits_;
  std::vector<ParamGate> gates_;
  int n_params_;
  std::vector<double> initial_params_;
};

/// Two qubits, two shared parameters: H on both wires, RZ(alpha) on both,
/// CNOT(0 -> 1), RZ(beta) on both. alpha/beta become the initial parameters.
ParamCircuit fig3_ansatz(double alpha, double beta);

/// Hamiltonian-variational ansatz for the transverse-field Ising ring:
/// each layer applies ring ZZ rotations sharing one parameter, then RX on all
/// wires sharing a second. The Hadamard layer preparing |+...+> is applied by
/// the driver, not the template. Requires even n_qubits.
ParamCircuit hva_tfim_ansatz(int n_qubits, int n_layers);

/// dE/dtheta_i via the parameter-shift rule, summing the +-pi/2 per-gate
/// contributions over every gate sharing index i.
std::vector<double> parameter_shift_gradient(const ParamCircuit& circuit,
                                             std::span<const double> params,
                                             const PauliSum& h,
                                             const StateVector& initial);

struct VqeTrace {
  std::vector<double> energies;
  std::vector<std::vector<double>> parameters;
  std::vector<double> gradient_norms;
  std::vector<double> residuals;  // NaN entries when no ground truth
  bool converged = false;
};

/// Plain gradient descent theta <- theta - eps * grad E. Stops at max_iters
/// or when the gradient norm falls below 1e-8.
VqeTrace vqe_run(const ParamCircuit& circuit, std::span<const double> params0,
                 const StateVector& initial, const PauliSum& h, double eps,
                 int max_iters, const GroundTruth* gt = nullptr);

}  // namespace riemflow
