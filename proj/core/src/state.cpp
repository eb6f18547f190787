#include "riemflow/state.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "detail/number_format.hpp"
#include "detail/pauli_kernels.hpp"

namespace riemflow {

namespace {

constexpr double kNormDriftTolerance = 1e-10;
constexpr double kSkewTolerance = 1e-10;
using Complex = std::complex<double>;

void check_wire(const StateVector& state, int wire) {
  if (wire < 0 || wire >= state.n_qubits()) {
    throw std::invalid_argument("gate wire " + std::to_string(wire) +
                                " out of range");
  }
}

std::int64_t index_bit(const StateVector& state, int wire) {
  return std::int64_t{1} << (state.n_qubits() - 1 - wire);
}

}  // namespace

StateVector::StateVector(int n_qubits, Eigen::VectorXcd amplitudes)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
  if (n_qubits < 1 || n_qubits > kStateQubitGuard) {
    throw std::invalid_argument("statevector qubit count must be in [1, " +
                                std::to_string(kStateQubitGuard) + "]");
  }
  if (amplitudes_.size() != (Eigen::Index{1} << n_qubits)) {
    throw std::invalid_argument("amplitude count must equal 2^n_qubits");
  }
}

StateVector init_zero_state(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kStateQubitGuard) {
    throw std::invalid_argument("statevector qubit count must be in [1, " +
                                std::to_string(kStateQubitGuard) + "]");
  }
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(Eigen::Index{1} << n_qubits);
  amps(0) = 1.0;
  return {n_qubits, std::move(amps)};
}

Gate Gate::hadamard(int wire) {
  return {Kind::hadamard, wire, -1, 0.0, std::nullopt};
}

Gate Gate::cnot(int control, int target) {
  return {Kind::cnot, target, control, 0.0, std::nullopt};
}

Gate Gate::rx(int wire, double angle) {
  return {Kind::rx, wire, -1, angle, std::nullopt};
}

Gate Gate::ry(int wire, double angle) {
  return {Kind::ry, wire, -1, angle, std::nullopt};
}

Gate Gate::rz(int wire, double angle) {
  return {Kind::rz, wire, -1, angle, std::nullopt};
}

Gate Gate::pauli_rotation(PauliWord word, double angle) {
  return {Kind::pauli_rotation, -1, -1, angle, std::move(word)};
}

std::string Gate::to_string() const {
  switch (kind) {
    case Kind::hadamard: return "H(" + std::to_string(wire) + ")";
    case Kind::cnot:
      return "CNOT(" + std::to_string(control) + "," + std::to_string(wire) +
             ")";
    case Kind::rx:
      return "RX(" + std::to_string(wire) + "," +
             detail::format_double(angle) + ")";
    case Kind::ry:
      return "RY(" + std::to_string(wire) + "," +
             detail::format_double(angle) + ")";
    case Kind::rz:
      return "RZ(" + std::to_string(wire) + "," +
             detail::format_double(angle) + ")";
    case Kind::pauli_rotation:
      return "R[" + word->to_string() + "](" + detail::format_double(angle) +
             ")";
  }
  throw std::invalid_argument("invalid gate kind");
}

namespace {

void apply_hadamard(StateVector& state, int wire) {
  check_wire(state, wire);
  const std::int64_t bit = index_bit(state, wire);
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  auto& amps = state.amplitudes();
  for (std::int64_t i = 0; i < amps.size(); ++i) {
    if (i & bit) continue;
    const Complex a = amps(i);
    const Complex b = amps(i | bit);
    amps(i) = (a + b) * inv_sqrt2;
    amps(i | bit) = (a - b) * inv_sqrt2;
  }
}

void apply_cnot(StateVector& state, int control, int target) {
  check_wire(state, control);
  check_wire(state, target);
  if (control == target) {
    throw std::invalid_argument("cnot control equals target");
  }
  const std::int64_t cbit = index_bit(state, control);
  const std::int64_t tbit = index_bit(state, target);
  auto& amps = state.amplitudes();
  for (std::int64_t i = 0; i < amps.size(); ++i) {
    if ((i & cbit) && !(i & tbit)) {
      std::swap(amps(i), amps(i | tbit));
    }
  }
}

void apply_pauli_rotation(StateVector& state, const PauliWord& word,
                          double angle) {
  if (word.n_qubits() != state.n_qubits()) {
    throw std::invalid_argument("rotation word qubit count differs");
  }
  if (!std::isfinite(angle)) {
    throw std::invalid_argument("rotation angle must be finite");
  }
  const detail::IndexMasks masks = detail::to_index_masks(word);
  const double c = std::cos(angle / 2.0);
  const Complex minus_i_s(0.0, -std::sin(angle / 2.0));
  auto& amps = state.amplitudes();
  if (masks.x == 0) {
    for (std::int64_t i = 0; i < amps.size(); ++i) {
      amps(i) *= c + minus_i_s * detail::word_phase(masks, i);
    }
    return;
  }
  for (std::int64_t i = 0; i < amps.size(); ++i) {
    const std::int64_t j = i ^ masks.x;
    if (j < i) continue;
    const Complex a = amps(i);
    const Complex b = amps(j);
    // K|j> = word_phase(j) |i> and K|i> = word_phase(i) |j>.
    amps(i) = c * a + minus_i_s * detail::word_phase(masks, j) * b;
    amps(j) = c * b + minus_i_s * detail::word_phase(masks, i) * a;
  }
}

}  // namespace

void apply_gate(StateVector& state, const Gate& gate) {
  switch (gate.kind) {
    case Gate::Kind::hadamard:
      apply_hadamard(state, gate.wire);
      return;
    case Gate::Kind::cnot:
      apply_cnot(state, gate.control, gate.wire);
      return;
    case Gate::Kind::rx:
      check_wire(state, gate.wire);
      apply_pauli_rotation(
          state,
          PauliWord::single(state.n_qubits(), gate.wire, PauliLetter::X),
          gate.angle);
      return;
    case Gate::Kind::ry:
      check_wire(state, gate.wire);
      apply_pauli_rotation(
          state,
          PauliWord::single(state.n_qubits(), gate.wire, PauliLetter::Y),
          gate.angle);
      return;
    case Gate::Kind::rz:
      check_wire(state, gate.wire);
      apply_pauli_rotation(
          state,
          PauliWord::single(state.n_qubits(), gate.wire, PauliLetter::Z),
          gate.angle);
      return;
    case Gate::Kind::pauli_rotation:
      apply_pauli_rotation(state, *gate.word, gate.angle);
      return;
  }
  throw std::invalid_argument("invalid gate kind");
}

double expectation(const StateVector& state, const PauliWord& word) {
  if (word.n_qubits() != state.n_qubits()) {
    throw std::invalid_argument("expectation: qubit counts differ");
  }
  const detail::IndexMasks masks = detail::to_index_masks(word);
  const auto& amps = state.amplitudes();
  Complex acc = 0.0;
  for (std::int64_t i = 0; i < amps.size(); ++i) {
    acc += std::conj(amps(i ^ masks.x)) * detail::word_phase(masks, i) *
           amps(i);
  }
  return acc.real();
}

double expectation(const StateVector& state, const PauliSum& hamiltonian) {
  if (hamiltonian.n_qubits() != state.n_qubits()) {
    throw std::invalid_argument("expectation: qubit counts differ");
  }
  double value = 0.0;
  for (const auto& term : hamiltonian.terms()) {
    value += term.coefficient * expectation(state, term.word);
  }
  return value;
}

double expectation_sampled(const StateVector& state,
                           const PauliSum& hamiltonian, std::int64_t shots,
                           std::uint64_t rng_seed) {
  if (hamiltonian.n_qubits() != state.n_qubits()) {
    throw std::invalid_argument("expectation_sampled: qubit counts differ");
  }
  if (shots < 1) {
    throw std::invalid_argument("expectation_sampled: shots must be >= 1");
  }
  std::mt19937_64 rng(rng_seed);
  double value = 0.0;
  for (const auto& term : hamiltonian.terms()) {
    if (term.word.is_identity()) {
      value += term.coefficient;
      continue;
    }
    const double mean = expectation(state, term.word);
    const double p_plus = std::clamp((1.0 + mean) / 2.0, 0.0, 1.0);
    std::binomial_distribution<std::int64_t> outcomes(shots, p_plus);
    const std::int64_t plus = outcomes(rng);
    const double estimate =
        static_cast<double>(2 * plus - shots) / static_cast<double>(shots);
    value += term.coefficient * estimate;
  }
  return value;
}

DenseUnitary expm_skew_hermitian(const Eigen::MatrixXcd& omega) {
  if (omega.rows() != omega.cols()) {
    throw std::invalid_argument("expm_skew_hermitian: matrix must be square");
  }
  const double skew_defect =
      (omega + omega.adjoint()).cwiseAbs().maxCoeff();
  if (skew_defect > kSkewTolerance) {
    throw std::invalid_argument(
        "expm_skew_hermitian: input is not skew-Hermitian (defect " +
        detail::format_double(skew_defect) + ")");
  }
  const Eigen::MatrixXcd hermitian = Complex(0.0, -1.0) * omega;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hermitian);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("expm_skew_hermitian: eigendecomposition failed");
  }
  Eigen::VectorXcd phases(solver.eigenvalues().size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) {
    phases(k) = std::exp(Complex(0.0, solver.eigenvalues()(k)));
  }
  DenseUnitary result;
  result.matrix = solver.eigenvectors() * phases.asDiagonal() *
                  solver.eigenvectors().adjoint();
  return result;
}

StateVector apply_dense_unitary(const StateVector& state,
                                const DenseUnitary& unitary) {
  if (unitary.matrix.rows() != state.dim() ||
      unitary.matrix.cols() != state.dim()) {
    throw std::invalid_argument("apply_dense_unitary: dimension mismatch");
  }
  Eigen::VectorXcd next = unitary.matrix * state.amplitudes();
  const double norm = next.norm();
  if (std::abs(norm - 1.0) > kNormDriftTolerance) {
    throw std::runtime_error("apply_dense_unitary: unitarity drift " +
                             detail::format_double(std::abs(norm - 1.0)));
  }
  next /= norm;
  return {state.n_qubits(), std::move(next)};
}

}  // namespace riemflow
