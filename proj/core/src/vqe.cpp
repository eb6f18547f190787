#include "riemflow/vqe.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "riemflow/oracle.hpp"

namespace riemflow {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kVqeGradTolerance = 1e-8;

bool is_rotation(Gate::Kind kind) {
  return kind == Gate::Kind::rx || kind == Gate::Kind::ry ||
         kind == Gate::Kind::rz || kind == Gate::Kind::pauli_rotation;
}

}  // namespace

ParamCircuit::ParamCircuit(int n_qubits, std::vector<ParamGate> gates,
                           int n_params, std::vector<double> initial_params)
    : n_qubits_(n_qubits),
      gates_(std::move(gates)),
      n_params_(n_params),
      initial_params_(std::move(initial_params)) {
  if (n_params < 0) {
    throw std::invalid_argument("ParamCircuit: negative parameter count");
  }
  if (initial_params_.size() != static_cast<std::size_t>(n_params)) {
    throw std::invalid_argument(
        "ParamCircuit: initial parameter count mismatch");
  }
  std::vector<bool> used(n_params, false);
  for (const auto& entry : gates_) {
    if (entry.param_index < 0) continue;
    if (entry.param_index >= n_params) {
      throw std::invalid_argument("ParamCircuit: parameter index out of range");
    }
    if (!is_rotation(entry.gate.kind)) {
      throw std::invalid_argument(
          "ParamCircuit: only rotation gates with involutory Pauli "
          "generators can be parameterized");
    }
    used[entry.param_index] = true;
  }
  for (int i = 0; i < n_params; ++i) {
    if (!used[i]) {
      throw std::invalid_argument("ParamCircuit: parameter " +
                                  std::to_string(i) + " is unused");
    }
  }
}

StateVector ParamCircuit::prepare(const StateVector& initial,
                                  std::span<const double> params) const {
  return prepare_with_offset(initial, params, gates_.size(), 0.0);
}

StateVector ParamCircuit::prepare_with_offset(const StateVector& initial,
                                              std::span<const double> params,
                                              std::size_t gate_index,
                                              double offset) const {
  if (params.size() != static_cast<std::size_t>(n_params_)) {
    throw std::invalid_argument("ParamCircuit: parameter vector size differs");
  }
  if (initial.n_qubits() != n_qubits_) {
    throw std::invalid_argument("ParamCircuit: initial state qubit count");
  }
  StateVector state = initial;
  for (std::size_t g = 0; g < gates_.size(); ++g) {
    Gate gate = gates_[g].gate;
    if (gates_[g].param_index >= 0) {
      gate.angle = params[gates_[g].param_index];
    }
    if (g == gate_index) gate.angle += offset;
    apply_gate(state, gate);
  }
  return state;
}

ParamCircuit fig3_ansatz(double alpha, double beta) {
  std::vector<ParamGate> gates;
  gates.push_back({Gate::hadamard(0), -1});
  gates.push_back({Gate::hadamard(1), -1});
  gates.push_back({Gate::rz(0, 0.0), 0});
  gates.push_back({Gate::rz(1, 0.0), 0});
  gates.push_back({Gate::cnot(0, 1), -1});
  gates.push_back({Gate::rz(0, 0.0), 1});
  gates.push_back({Gate::rz(1, 0.0), 1});
  return {2, std::move(gates), 2, {alpha, beta}};
}

ParamCircuit hva_tfim_ansatz(int n_qubits, int n_layers) {
  if (n_qubits < 2 || n_qubits % 2 != 0) {
    throw std::invalid_argument("hva_tfim_ansatz: n_qubits must be even, >= 2");
  }
  if (n_layers < 1) {
    throw std::invalid_argument("hva_tfim_ansatz: n_layers must be >= 1");
  }
  std::vector<ParamGate> gates;
  for (int layer = 0; layer < n_layers; ++layer) {
    const int zz_param = 2 * layer;
    const int x_param = 2 * layer + 1;
    for (int i = 0; i < n_qubits; ++i) {
      const int a = i;
      const int b = (i + 1) % n_qubits;
      if (n_qubits == 2 && i == 1) break;  // a 2-ring has a single bond
      const PauliWord za = PauliWord::single(n_qubits, a, PauliLetter::Z);
      const PauliWord zb = PauliWord::single(n_qubits, b, PauliLetter::Z);
      const PauliWord zz(n_qubits, 0, za.z_mask() | zb.z_mask());
      gates.push_back({Gate::pauli_rotation(zz, 0.0), zz_param});
    }
    for (int i = 0; i < n_qubits; ++i) {
      gates.push_back({Gate::rx(i, 0.0), x_param});
    }
  }
  return {n_qubits, std::move(gates), 2 * n_layers,
          std::vector<double>(2 * static_cast<std::size_t>(n_layers), 0.0)};
}

std::vector<double> parameter_shift_gradient(const ParamCircuit& circuit,
                                             std::span<const double> params,
                                             const PauliSum& h,
                                             const StateVector& initial) {
  std::vector<double> gradient(circuit.n_params(), 0.0);
  for (std::size_t g = 0; g < circuit.gates().size(); ++g) {
    const int index = circuit.gates()[g].param_index;
    if (index < 0) continue;
    const double e_plus =
        expectation(circuit.prepare_with_offset(initial, params, g, kHalfPi), h);
    const double e_minus =
        expectation(circuit.prepare_with_offset(initial, params, g, -kHalfPi), h);
    gradient[index] += (e_plus - e_minus) / 2.0;
  }
  return gradient;
}

VqeTrace vqe_run(const ParamCircuit& circuit, std::span<const double> params0,
                 const StateVector& initial, const PauliSum& h, double eps,
                 int max_iters, const GroundTruth* gt) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw std::invalid_argument("vqe_run: eps must be positive");
  }
  if (max_iters < 1) {
    throw std::invalid_argument("vqe_run: max_iters must be >= 1");
  }
  std::vector<double> params(params0.begin(), params0.end());
  VqeTrace trace;
  auto record = [&](double grad_norm) {
    const double energy = expectation(circuit.prepare(initial, params), h);
    trace.energies.push_back(energy);
    trace.parameters.push_back(params);
    trace.gradient_norms.push_back(grad_norm);
    trace.residuals.push_back(gt ? residual(energy, *gt)
                                 : std::numeric_limits<double>::quiet_NaN());
  };

  for (int iter = 0; iter <= max_iters; ++iter) {
    const std::vector<double> grad =
        parameter_shift_gradient(circuit, params, h, initial);
    double norm_sq = 0.0;
    for (double g : grad) norm_sq += g * g;
    const double grad_norm = std::sqrt(norm_sq);
    record(grad_norm);
    if (grad_norm < kVqeGradTolerance) {
      trace.converged = true;
      break;
    }
    if (iter == max_iters) break;
    for (std::size_t i = 0; i < params.size(); ++i) {
      params[i] -= eps * grad[i];
    }
  }
  return trace;
}

}  // namespace riemflow
