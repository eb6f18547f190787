#include "riemflow/flows.hpp"

#include <doctest.h>

#include <numbers>
#include <random>

#include "reference.hpp"
#include "riemflow/dense.hpp"
#include "riemflow/models.hpp"
#include "riemflow/oracle.hpp"

using namespace riemflow;
using Complex = std::complex<double>;

namespace {

PauliWord word(const std::string& text, int n_qubits = 0) {
  return parse_pauli_sum(text, n_qubits).terms()[0].word;
}

StateVector plus_state(int n_qubits) {
  StateVector state = init_zero_state(n_qubits);
  for (int w = 0; w < n_qubits; ++w) apply_gate(state, Gate::hadamard(w));
  return state;
}

}  // namespace

TEST_CASE("riemannian_coefficient closed forms") {
  const StateVector zero = init_zero_state(1);
  CHECK(riemannian_coefficient(zero, parse_pauli_sum("X0"), word("Y0"),
                               CoefficientMethod::exact_commutator) ==
        doctest::Approx(2.0));
  CHECK(riemannian_coefficient(zero, parse_pauli_sum("Z0"), word("X0"),
                               CoefficientMethod::exact_commutator) ==
        doctest::Approx(0.0));
  // eigenstates of H have vanishing gradient in every direction
  const PauliSum h = parse_pauli_sum("Z0Z1");
  for (const auto& k : basis_full(2).words) {
    CHECK(std::abs(riemannian_coefficient(
              init_zero_state(2), h, k,
              CoefficientMethod::exact_commutator)) < 1e-12);
  }
}

TEST_CASE("riemannian_coefficient matches the dense commutator") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 20; ++trial) {
    const PauliSum h = ref::random_pauli_sum(2, 4, rng);
    const StateVector state = ref::random_state(2, rng);
    const ref::Matrix rho = ref::density(state);
    const ref::Matrix hd = ref::sum_matrix(h);
    const ref::Matrix omega = rho * hd - hd * rho;
    for (const auto& k : basis_full(2).words) {
      // c = -i Tr(Omega P), and Tr(Omega P) is purely imaginary
      const Complex trace = (omega * ref::word_matrix(k)).trace();
      const double expected = (trace / Complex(0, 1)).real();
      CHECK(riemannian_coefficient(state, h, k,
                                   CoefficientMethod::exact_commutator) ==
            doctest::Approx(expected).epsilon(1e-9));
    }
  }
}

TEST_CASE("exact and parameter-shift coefficients agree") {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 10; ++trial) {
    const PauliSum h = ref::random_pauli_sum(2, 4, rng);
    const StateVector state = ref::random_state(2, rng);
    for (const auto& k : basis_full(2).words) {
      const double exact = riemannian_coefficient(
          state, h, k, CoefficientMethod::exact_commutator);
      const double shifted = riemannian_coefficient(
          state, h, k, CoefficientMethod::parameter_shift);
      CHECK(std::abs(exact - shifted) < 1e-10);
    }
  }
}

TEST_CASE("exact_flow_step closed forms") {
  const PauliSum h = parse_pauli_sum("X0");

  // eigenstate: nothing moves
  StateVector plus = plus_state(1);
  const auto fixed = exact_flow_step(plus, h, 0.3);
  CHECK(fixed.gradient_frobenius_norm < 1e-12);
  CHECK((fixed.state.amplitudes() - plus.amplitudes()).norm() < 1e-10);

  // one step of size pi/4 lands exactly on the ground state
  const auto ground = exact_flow_step(init_zero_state(1), h, std::numbers::pi / 4);
  CHECK(expectation(ground.state, h) == doctest::Approx(-1.0));
  CHECK(std::abs(ground.state.amplitudes()(0) - 1 / std::numbers::sqrt2) < 1e-12);
  CHECK(std::abs(ground.state.amplitudes()(1) + 1 / std::numbers::sqrt2) < 1e-12);

  // small step: <X> = -sin(2 eps)
  const auto small = exact_flow_step(init_zero_state(1), h, 0.1);
  CHECK(expectation(small.state, h) == doctest::Approx(-std::sin(0.2)));
  CHECK(small.gradient_frobenius_norm == doctest::Approx(std::numbers::sqrt2));
}

TEST_CASE("descent: energy is non-increasing at small step sizes") {
  std::mt19937_64 rng(53);
  auto run_descent = [](const PauliSum& h, const StateVector& initial) {
    const GroundTruth gt = ground_truth(h);
    const double eps = 0.01 / gt.spectral_norm;
    StateVector state = initial;
    double energy = expectation(state, h);
    for (int step = 0; step < 40; ++step) {
      state = exact_flow_step(state, h, eps).state;
      const double next = expectation(state, h);
      CHECK(next <= energy + 1e-12);
      energy = next;
    }
  };
  run_descent(parse_pauli_sum("X0 + X1 + Y1"), plus_state(2));
  run_descent(parse_pauli_sum("X0 + Y0 + X1"), plus_state(2));
  run_descent(parse_pauli_sum("X0 + Y0Z1"), plus_state(2));
  run_descent(tfim_hamiltonian(4, 1.0, true), plus_state(4));
  for (int trial = 0; trial < 50; ++trial) {
    const PauliSum h = ref::random_pauli_sum(3, 6, rng);
    if (h.size() == 0) continue;
    run_descent(h, ref::random_state(3, rng));
  }
}

TEST_CASE("dL/dt equals minus the squared gradient norm, to first order") {
  std::mt19937_64 rng(54);
  const PauliSum h = ref::random_pauli_sum(3, 6, rng);
  const StateVector state = ref::random_state(3, rng);
  const double e0 = expectation(state, h);
  auto defect = [&](double eps) {
    const auto step = exact_flow_step(state, h, eps);
    const double slope = (expectation(step.state, h) - e0) / eps;
    return slope + step.gradient_frobenius_norm * step.gradient_frobenius_norm;
  };
  const double d1 = defect(1e-3);
  const double d2 = defect(5e-4);
  CHECK(std::abs(d1 / d2) == doctest::Approx(2.0).epsilon(0.25));
  CHECK(std::abs(d1) < 1e-1);
}

TEST_CASE("full-basis projection reconstructs the dense commutator") {
  std::mt19937_64 rng(55);
  for (int n = 1; n <= 3; ++n) {
    const PauliSum h = ref::random_pauli_sum(n, 4, rng);
    const StateVector state = ref::random_state(n, rng);
    const ref::Matrix rho = ref::density(state);
    const ref::Matrix hd = ref::sum_matrix(h);
    const ref::Matrix omega = rho * hd - hd * rho;
    const Eigen::Index dim = Eigen::Index{1} << n;
    ref::Matrix rebuilt = ref::Matrix::Zero(dim, dim);
    for (const auto& k : basis_full(n).words) {
      const double c = riemannian_coefficient(
          state, h, k, CoefficientMethod::exact_commutator);
      rebuilt += (c / static_cast<double>(dim)) * Complex(0, 1) *
                 ref::word_matrix(k);
    }
    CHECK((rebuilt - omega).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("trotter_flow_step single-direction closed form") {
  const PauliSum h = parse_pauli_sum("X0");
  const SubspaceBasis basis = basis_custom(1, {word("Y0")});
  const auto step = trotter_flow_step(init_zero_state(1), h, basis, 0.1);
  REQUIRE(step.gates.size() == 1);
  CHECK(step.gates[0].first == word("Y0"));
  CHECK(step.gates[0].second == doctest::Approx(-0.4));
  CHECK(expectation(step.state, h) == doctest::Approx(-std::sin(0.4)));
}

TEST_CASE("trotter_flow_step at an eigenstate appends zero-angle gates") {
  const PauliSum h = parse_pauli_sum("Z0Z1");
  const auto step =
      trotter_flow_step(init_zero_state(2), h, basis_full(2), 0.2);
  for (const auto& [w, theta] : step.gates) CHECK(std::abs(theta) < 1e-12);
  CHECK((step.state.amplitudes() - init_zero_state(2).amplitudes()).norm() <
        1e-10);
}

TEST_CASE("trotter error shrinks 4x when the step halves") {
  auto trotter_error = [](const PauliSum& h, const StateVector& state,
                          double eps) {
    const int n = h.n_qubits();
    const auto exact = exact_flow_step(state, h, eps);
    const auto trotter = trotter_flow_step(
        state, h, basis_full(n), eps / static_cast<double>(1 << n));
    return (trotter.state.amplitudes() - exact.state.amplitudes()).norm();
  };

  // one-qubit case: the gradient lies along a single basis direction, so the
  // product has one factor and the split is exact
  const PauliSum h1 = parse_pauli_sum("X0");
  CHECK(trotter_error(h1, init_zero_state(1), 1e-2) < 1e-12);

  std::mt19937_64 rng(56);
  const PauliSum h2 = ref::random_pauli_sum(2, 5, rng);
  const StateVector state = ref::random_state(2, rng);
  const double r2 = trotter_error(h2, state, 1e-2) /
                    trotter_error(h2, state, 5e-3);
  CHECK(r2 == doctest::Approx(4.0).epsilon(0.125));
}

TEST_CASE("adaptive_flow_step selects the largest coefficient") {
  const PauliSum h = parse_pauli_sum("X0");
  const SubspaceBasis pool = basis_single_qubit(1);
  const auto step = adaptive_flow_step(init_zero_state(1), h, pool,
                                       StepStrategy::rotosolve, 0.1, 1e-6);
  REQUIRE(step.selected.has_value());
  CHECK(*step.selected == word("Y0"));
  CHECK(step.theta == doctest::Approx(-std::numbers::pi / 2));
  CHECK(expectation(step.state, h) == doctest::Approx(-1.0));
  for (const auto& [w, c] : step.coefficients) {
    if (w == word("Y0")) CHECK(c == doctest::Approx(2.0));
    else CHECK(std::abs(c) < 1e-12);
  }
}

TEST_CASE("adaptive_flow_step stalls at an eigenstate") {
  const auto step =
      adaptive_flow_step(init_zero_state(2), parse_pauli_sum("Z0Z1"),
                         basis_two_local(2, false, false, true),
                         StepStrategy::rotosolve, 0.1, 1e-6);
  CHECK(step.stalled);
  CHECK_FALSE(step.selected.has_value());
}

TEST_CASE("identity shift changes nothing but the energy") {
  std::mt19937_64 rng(57);
  const StateVector state = ref::random_state(2, rng);
  const PauliSum h = parse_pauli_sum("X0 + X1 + Y1");
  PauliSum shifted = h;
  shifted.add(3.0, PauliWord::identity(2));

  const SubspaceBasis pool = basis_two_local(2, false, false, true);
  const auto a = adaptive_flow_step(state, h, pool, StepStrategy::rotosolve,
                                    0.1, 1e-6);
  const auto b = adaptive_flow_step(state, shifted, pool,
                                    StepStrategy::rotosolve, 0.1, 1e-6);
  REQUIRE(a.selected.has_value());
  REQUIRE(b.selected.has_value());
  CHECK(*a.selected == *b.selected);
  CHECK(a.theta == doctest::Approx(b.theta).epsilon(1e-12));
  for (std::size_t j = 0; j < a.coefficients.size(); ++j) {
    CHECK(a.coefficients[j].second ==
          doctest::Approx(b.coefficients[j].second).epsilon(1e-12));
  }
  CHECK(expectation(state, shifted) ==
        doctest::Approx(expectation(state, h) + 3.0).epsilon(1e-12));
}

TEST_CASE("rotosolve_angle closed forms") {
  CHECK(rotosolve_angle(1, 0, 0) == doctest::Approx(std::numbers::pi));
  CHECK(rotosolve_angle(0, 1, -1) == doctest::Approx(-std::numbers::pi / 2));
  CHECK(rotosolve_angle(0, 0, 0) == 0.0);
}

TEST_CASE("rotosolve_angle matches grid search") {
  std::mt19937_64 rng(58);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double a = coeff(rng);
    const double b = coeff(rng);
    const double c = coeff(rng);
    auto energy = [&](double theta) {
      return a + b * std::cos(theta) + c * std::sin(theta);
    };
    const double theta =
        rotosolve_angle(energy(0), energy(std::numbers::pi / 2),
                        energy(-std::numbers::pi / 2));
    CHECK(theta > -std::numbers::pi);
    CHECK(theta <= std::numbers::pi);
    CHECK(energy(theta) <= ref::grid_search_min(energy) + 1e-3);
    const double three_point_min =
        std::min({energy(0), energy(std::numbers::pi / 2),
                  energy(-std::numbers::pi / 2)});
    CHECK(energy(theta) <= three_point_min + 1e-12);
  }
}

TEST_CASE("perturb") {
  std::mt19937_64 rng(59);
  const StateVector state = ref::random_state(2, rng);

  std::mt19937_64 zero_rng(7);
  const StateVector same = perturb(state, 0.0, zero_rng);
  CHECK((same.amplitudes() - state.amplitudes()).norm() < 1e-12);

  std::mt19937_64 rng_a(123);
  std::mt19937_64 rng_b(123);
  const StateVector a = perturb(state, 0.1, rng_a);
  const StateVector b = perturb(state, 0.1, rng_b);
  CHECK(a.amplitudes() == b.amplitudes());  // bit-for-bit reproducible
  CHECK(std::abs(a.norm() - 1.0) < 1e-10);
  CHECK((a.amplitudes() - state.amplitudes()).norm() > 1e-3);
}

TEST_CASE("critical points: coefficients vanish at oracle eigenstates") {
  for (const PauliSum& h :
       {parse_pauli_sum("X0 + X1 + Y1"), parse_pauli_sum("X0 + Y0Z1")}) {
    const Eigen::MatrixXcd dense = pauli_sum_to_dense(h);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(dense);
    for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
      const StateVector eigenstate(h.n_qubits(), solver.eigenvectors().col(k));
      for (const auto& w : basis_full(h.n_qubits()).words) {
        CHECK(std::abs(riemannian_coefficient(
                  eigenstate, h, w, CoefficientMethod::exact_commutator)) <
              1e-10);
      }
    }
  }
}

TEST_CASE("run_flow from an eigenstate terminates immediately") {
  FlowConfig config;
  config.mode = FlowMode::exact_dense;
  config.step_size = 0.5;
  const PauliSum h = parse_pauli_sum("Z0");
  const GroundTruth gt = ground_truth(h);
  StateVector ground = init_zero_state(1);
  apply_gate(ground, Gate::pauli_rotation(word("X0"), std::numbers::pi));
  const FlowTrace trace = run_flow(ground, h, config, &gt);
  CHECK(trace.termination == Termination::converged);
  CHECK(trace.records.size() == 1);
  CHECK(trace.records[0].appended_gates.empty());

  // a non-ground eigenstate without a perturbation policy stalls
  const FlowTrace stuck = run_flow(init_zero_state(1), h, config, &gt);
  CHECK(stuck.termination == Termination::stalled);
}

TEST_CASE("dense flow paths are guarded at 8 qubits") {
  PauliSum h(9);
  h.add(1.0, PauliWord::single(9, 0, PauliLetter::Z));
  CHECK_THROWS_AS(exact_flow_step(init_zero_state(9), h, 0.1),
                  std::invalid_argument);
  std::mt19937_64 rng(60);
  CHECK_THROWS_AS(perturb(init_zero_state(9), 0.1, rng),
                  std::invalid_argument);
}

TEST_CASE("run_flow validates its configuration") {
  const PauliSum h = parse_pauli_sum("Z0");
  FlowConfig config;
  config.mode = FlowMode::trotter_restricted;
  CHECK_THROWS_AS(run_flow(init_zero_state(1), h, config),
                  std::invalid_argument);

  config.mode = FlowMode::exact_dense;
  config.step_strategy = StepStrategy::rotosolve;
  CHECK_THROWS_AS(run_flow(init_zero_state(1), h, config),
                  std::invalid_argument);

  config.step_strategy = StepStrategy::fixed;
  config.step_size = -1.0;
  CHECK_THROWS_AS(run_flow(init_zero_state(1), h, config),
                  std::invalid_argument);
}

TEST_CASE("run_flow reproduces the two-qubit exact-flow experiment") {
  FlowConfig config;
  config.mode = FlowMode::exact_dense;
  config.step_size = 0.5;
  config.max_steps = 100;
  const PauliSum h = parse_pauli_sum("X0 + X1 + Y1");
  const GroundTruth gt = ground_truth(h);

  StateVector state = init_zero_state(2);
  apply_gate(state, Gate::hadamard(0));
  apply_gate(state, Gate::hadamard(1));
  apply_gate(state, Gate::rz(0, 0.1));
  apply_gate(state, Gate::rz(1, 0.1));
  apply_gate(state, Gate::cnot(0, 1));
  apply_gate(state, Gate::rz(0, 1.2));
  apply_gate(state, Gate::rz(1, 1.2));

  const FlowTrace trace = run_flow(state, h, config, &gt);
  bool reached = false;
  for (const auto& record : trace.records) {
    if (record.step <= 50 && record.energy <= -2.40) reached = true;
  }
  CHECK(reached);
  CHECK(residual(trace.records.back().energy, gt) < 1e-2);
}

TEST_CASE("run_flow stalls and escapes through perturbations") {
  FlowConfig config;
  config.mode = FlowMode::exact_dense;
  config.step_size = 0.2;
  config.max_steps = 300;
  config.perturbation = PerturbationPolicy{0.1, 50, 43};
  const PauliSum h = parse_pauli_sum("X0 + Y0 + X1");
  const GroundTruth gt = ground_truth(h);

  const FlowTrace trace = run_flow(plus_state(2), h, config, &gt);
  CHECK(trace.termination == Termination::converged);
  int perturbations = 0;
  bool saw_stall = false;
  for (const auto& record : trace.records) {
    perturbations += record.perturbations_used;
    if (record.gradient_norm < 1e-6 && record.residual > 1e-3) {
      saw_stall = true;
    }
  }
  CHECK(saw_stall);
  CHECK(perturbations >= 1);
  CHECK(perturbations <= 50);
  CHECK(trace.records.back().residual < 1e-6);
}
