#include "riemflow/flows.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "riemflow/dense.hpp"
#include "riemflow/oracle.hpp"

namespace riemflow {

std::string to_string(Termination termination) {
  switch (termination) {
    case Termination::converged: return "converged";
    case Termination::max_steps: return "max_steps";
    case Termination::stalled: return "stalled";
  }
  throw std::invalid_argument("invalid termination");
}

std::string to_string(FlowMode mode) {
  switch (mode) {
    case FlowMode::exact_dense: return "exact_dense";
    case FlowMode::trotter_full: return "trotter_full";
    case FlowMode::trotter_restricted: return "trotter_restricted";
    case FlowMode::adaptive: return "adaptive";
  }
  throw std::invalid_argument("invalid flow mode");
}

std::string to_string(CoefficientMethod method) {
  switch (method) {
    case CoefficientMethod::exact_commutator: return "exact_commutator";
    case CoefficientMethod::parameter_shift: return "parameter_shift";
  }
  throw std::invalid_argument("invalid coefficient method");
}

std::string to_string(StepStrategy strategy) {
  switch (strategy) {
    case StepStrategy::fixed: return "fixed";
    case StepStrategy::rotosolve: return "rotosolve";
  }
  throw std::invalid_argument("invalid step strategy");
}

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

void check_flow_guard(int n_qubits) {
  if (n_qubits > kFlowDenseGuard) {
    throw std::invalid_argument("dense flow guarded at " +
                                std::to_string(kFlowDenseGuard) + " qubits");
  }
}

// Expectation values with an optional shot budget. Each sampled evaluation
// draws a fresh sub-seed so a fixed master seed fixes the whole run.
class Evaluator {
 public:
  Evaluator(const PauliSum& h, std::int64_t shots, std::uint64_t seed)
      : h_(h), shots_(shots), rng_(seed) {}

  double energy(const StateVector& state) {
    return shots_ > 0 ? expectation_sampled(state, h_, shots_, rng_())
                      : expectation(state, h_);
  }

  double word_mean(const StateVector& state, const PauliWord& word) {
    if (shots_ <= 0) return expectation(state, word);
    PauliSum single(word.n_qubits());
    single.add(1.0, word);
    return expectation_sampled(state, single, shots_, rng_());
  }

  double coefficient(const StateVector& state, const PauliWord& k,
                     CoefficientMethod method) {
    if (method == CoefficientMethod::parameter_shift) {
      StateVector plus = state;
      apply_gate(plus, Gate::pauli_rotation(k, kHalfPi));
      StateVector minus = state;
      apply_gate(minus, Gate::pauli_rotation(k, -kHalfPi));
      return energy(plus) - energy(minus);
    }
    // c = -i <[H, K]>. With P K = phi W the commutator term is
    // 2 i Im(phi) W, so each non-commuting Hamiltonian term contributes
    // 2 h Im(phi) <W>.
    double c = 0.0;
    for (const auto& term : h_.terms()) {
      if (words_commute(term.word, k)) continue;
      const WordProduct product = word_multiply(term.word, k);
      c += 2.0 * term.coefficient * product.phase.imag() *
           word_mean(state, product.word);
    }
    return c;
  }

  const PauliSum& hamiltonian() const { return h_; }

 private:
  const PauliSum& h_;
  std::int64_t shots_;
  std::mt19937_64 rng_;
};

Eigen::MatrixXcd gradient_commutator(const StateVector& state,
                                     const Eigen::MatrixXcd& h_dense) {
  // Omega = rho H - H rho for rho = |psi><psi|.
  const Eigen::VectorXcd& a = state.amplitudes();
  const Eigen::VectorXcd b = h_dense * a;
  return a * b.adjoint() - b * a.adjoint();
}

double coefficient_norm(const std::vector<std::pair<PauliWord, double>>& cs,
                        int n_qubits) {
  // Frobenius norm of the projected gradient (1/2^N) sum_j c_j i P^j.
  double sum_sq = 0.0;
  for (const auto& [word, c] : cs) sum_sq += c * c;
  return std::sqrt(sum_sq / static_cast<double>(std::int64_t{1} << n_qubits));
}

TrotterFlowStep trotter_step_impl(Evaluator& eval, const StateVector& state,
                                  const SubspaceBasis& basis, double eta,
                                  CoefficientMethod method) {
  TrotterFlowStep result{state, {}, {}};
  result.coefficients.reserve(basis.words.size());
  for (const auto& word : basis.words) {
    result.coefficients.emplace_back(word,
                                     eval.coefficient(state, word, method));
  }
  result.gates.reserve(basis.words.size());
  for (const auto& [word, c] : result.coefficients) {
    const double theta = -2.0 * eta * c;
    result.gates.emplace_back(word, theta);
    apply_gate(result.state, Gate::pauli_rotation(word, theta));
  }
  return result;
}

AdaptiveFlowStep adaptive_step_impl(Evaluator& eval, const StateVector& state,
                                    const SubspaceBasis& pool,
                                    StepStrategy strategy, double eps,
                                    double grad_tolerance,
                                    CoefficientMethod method) {
  if (pool.words.empty()) {
    throw std::invalid_argument("adaptive flow needs a nonempty pool");
  }
  AdaptiveFlowStep result{state, std::nullopt, 0.0, {}, false};
  result.coefficients.reserve(pool.words.size());
  std::size_t best = 0;
  double best_mag = -1.0;
  for (std::size_t j = 0; j < pool.words.size(); ++j) {
    const double c = eval.coefficient(state, pool.words[j], method);
    result.coefficients.emplace_back(pool.words[j], c);
    if (std::abs(c) > best_mag) {
      best_mag = std::abs(c);
      best = j;
    }
  }
  if (best_mag < grad_tolerance) {
    result.stalled = true;
    return result;
  }
  const PauliWord& word = pool.words[best];
  double theta = 0.0;
  if (strategy == StepStrategy::rotosolve) {
    const double e_zero = eval.energy(state);
    StateVector plus = state;
    apply_gate(plus, Gate::pauli_rotation(word, kHalfPi));
    StateVector minus = state;
    apply_gate(minus, Gate::pauli_rotation(word, -kHalfPi));
    theta = rotosolve_angle(e_zero, eval.energy(plus), eval.energy(minus));
  } else {
    theta = -2.0 * eps * result.coefficients[best].second;
  }
  result.selected = word;
  result.theta = theta;
  apply_gate(result.state, Gate::pauli_rotation(word, theta));
  return result;
}

}  // namespace

double riemannian_coefficient(const StateVector& state, const PauliSum& h,
                              const PauliWord& k, CoefficientMethod method) {
  if (h.n_qubits() != state.n_qubits() || k.n_qubits() != state.n_qubits()) {
    throw std::invalid_argument("riemannian_coefficient: qubit counts differ");
  }
  Evaluator eval(h, 0, 0);
  return eval.coefficient(state, k, method);
}

ExactFlowStep exact_flow_step(const StateVector& state, const PauliSum& h,
                              double eps) {
  check_flow_guard(state.n_qubits());
  const Eigen::MatrixXcd h_dense = pauli_sum_to_dense(h);
  const Eigen::MatrixXcd omega = gradient_commutator(state, h_dense);
  const DenseUnitary retraction = expm_skew_hermitian(eps * omega);
  return {apply_dense_unitary(state, retraction), omega.norm()};
}

TrotterFlowStep trotter_flow_step(const StateVector& state, const PauliSum& h,
                                  const SubspaceBasis& basis, double eta,
                                  CoefficientMethod method) {
  Evaluator eval(h, 0, 0);
  return trotter_step_impl(eval, state, basis, eta, method);
}

AdaptiveFlowStep adaptive_flow_step(const StateVector& state,
                                    const PauliSum& h,
                                    const SubspaceBasis& pool,
                                    StepStrategy strategy, double eps,
                                    double grad_tolerance,
                                    CoefficientMethod method) {
  Evaluator eval(h, 0, 0);
  return adaptive_step_impl(eval, state, pool, strategy, eps, grad_tolerance,
                            method);
}

double rotosolve_angle(double e_zero, double e_plus, double e_minus) {
  const double a = (e_plus + e_minus) / 2.0;
  const double b = e_zero - a;
  const double c = (e_plus - e_minus) / 2.0;
  if (b == 0.0 && c == 0.0) return 0.0;
  double theta = std::atan2(-c, -b);
  if (theta <= -std::numbers::pi) theta = std::numbers::pi;
  return theta;
}

StateVector perturb(const StateVector& state, double sigma,
                    std::mt19937_64& rng) {
  check_flow_guard(state.n_qubits());
  if (sigma < 0.0 || !std::isfinite(sigma)) {
    throw std::invalid_argument("perturb: sigma must be finite and >= 0");
  }
  const Eigen::Index dim = state.dim();
  Eigen::MatrixXd x(dim, dim);
  std::normal_distribution<double> normal(0.0, sigma);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      x(r, c) = sigma > 0.0 ? normal(rng) : 0.0;
    }
  }
  const Eigen::MatrixXd antisym = 0.5 * (x - x.transpose());
  const DenseUnitary kick = expm_skew_hermitian(antisym.cast<std::complex<double>>());
  return apply_dense_unitary(state, kick);
}

namespace {

struct GradientSnapshot {
  double energy = 0.0;
  double grad_norm = 0.0;
  double stall_metric = 0.0;
  std::vector<std::pair<PauliWord, double>> coefficients;
  Eigen::MatrixXcd omega;  // exact mode only
};

class FlowDriver {
 public:
  FlowDriver(const StateVector& initial, const PauliSum& h,
             const FlowConfig& config, const GroundTruth* gt,
             const StepObserver& observer)
      : h_(h),
        config_(config),
        gt_(gt),
        observer_(observer),
        eval_(h, config.shots, config.rng_seed),
        perturb_rng_(config.perturbation ? config.perturbation->rng_seed : 0),
        state_(initial) {
    validate();
    if (config_.mode == FlowMode::exact_dense) {
      check_flow_guard(state_.n_qubits());
      h_dense_ = pauli_sum_to_dense(h_);
    } else if (config_.mode == FlowMode::trotter_full) {
      basis_ = basis_full(state_.n_qubits());
    } else {
      basis_ = *config_.subspace;
    }
  }

  FlowTrace run() {
    GradientSnapshot snap = snapshot();
    push_record(0, snap, {}, 0);

    Termination termination = Termination::max_steps;
    int step = 0;
    int attempts_left =
        config_.perturbation ? config_.perturbation->max_attempts : 0;

    while (step < config_.max_steps) {
      if (snap.stall_metric < config_.grad_tolerance) {
        const double res = gt_ ? residual(snap.energy, *gt_)
                               : std::numeric_limits<double>::quiet_NaN();
        if (!gt_ || res < kResidualTolerance) {
          termination = Termination::converged;
          break;
        }
        if (attempts_left <= 0) {
          termination = Termination::stalled;
          break;
        }
        int used = 0;
        while (attempts_left > 0) {
          state_ = perturb(state_, config_.perturbation->sigma, perturb_rng_);
          --attempts_left;
          ++used;
          snap = snapshot();
          if (snap.stall_metric >= config_.grad_tolerance) break;
        }
        ++step;
        push_record(step, snap, {}, used);
        if (snap.stall_metric < config_.grad_tolerance) {
          termination = Termination::stalled;
          break;
        }
        continue;
      }

      std::vector<std::pair<PauliWord, double>> gates;
      advance(snap, gates);
      snap = snapshot();
      ++step;
      push_record(step, snap, std::move(gates), 0);
    }

    return {config_, std::move(records_), state_, termination};
  }

 private:
  void validate() {
    if (h_.n_qubits() != state_.n_qubits()) {
      throw std::invalid_argument("run_flow: qubit counts differ");
    }
    if (!(config_.step_size > 0.0) || !std::isfinite(config_.step_size)) {
      throw std::invalid_argument("run_flow: step_size must be positive");
    }
    if (config_.max_steps < 1) {
      throw std::invalid_argument("run_flow: max_steps must be >= 1");
    }
    if (!(config_.grad_tolerance > 0.0)) {
      throw std::invalid_argument("run_flow: grad_tolerance must be positive");
    }
    const bool needs_subspace = config_.mode == FlowMode::trotter_restricted ||
                                config_.mode == FlowMode::adaptive;
    if (needs_subspace && !config_.subspace) {
      throw std::invalid_argument(
          "run_flow: restricted and adaptive modes require a subspace");
    }
    if (config_.subspace &&
        config_.subspace->n_qubits != state_.n_qubits()) {
      throw std::invalid_argument("run_flow: subspace qubit count differs");
    }
    if (config_.step_strategy == StepStrategy::rotosolve &&
        config_.mode != FlowMode::adaptive) {
      throw std::invalid_argument(
          "run_flow: rotosolve step strategy requires adaptive mode");
    }
    if (config_.perturbation && config_.perturbation->max_attempts < 1) {
      throw std::invalid_argument(
          "run_flow: perturbation max_attempts must be >= 1");
    }
    if (config_.shots < 0) {
      throw std::invalid_argument("run_flow: shots must be >= 0");
    }
  }

  GradientSnapshot snapshot() {
    GradientSnapshot snap;
    snap.energy = eval_.energy(state_);
    if (config_.mode == FlowMode::exact_dense) {
      snap.omega = gradient_commutator(state_, h_dense_);
      snap.grad_norm = snap.omega.norm();
      snap.stall_metric = snap.grad_norm;
      return snap;
    }
    snap.coefficients.reserve(basis_.words.size());
    double max_mag = 0.0;
    for (const auto& word : basis_.words) {
      const double c =
          eval_.coefficient(state_, word, config_.coefficient_method);
      snap.coefficients.emplace_back(word, c);
      max_mag = std::max(max_mag, std::abs(c));
    }
    snap.grad_norm = coefficient_norm(snap.coefficients, state_.n_qubits());
    snap.stall_metric =
        config_.mode == FlowMode::adaptive ? max_mag : snap.grad_norm;
    return snap;
  }

  void advance(const GradientSnapshot& snap,
               std::vector<std::pair<PauliWord, double>>& gates) {
    switch (config_.mode) {
      case FlowMode::exact_dense: {
        // The driver's step size is stated in the Trotterized
        // parameterization, where the 1/2^N basis-projection factor is part
        // of the flow; exact and trotter_full runs with equal step sizes
        // then track each other to O(eps^2).
        const double eps =
            config_.step_size /
            static_cast<double>(std::int64_t{1} << state_.n_qubits());
        const DenseUnitary retraction =
            expm_skew_hermitian(eps * snap.omega);
        state_ = apply_dense_unitary(state_, retraction);
        return;
      }
      case FlowMode::trotter_full:
      case FlowMode::trotter_restricted: {
        const double eta =
            config_.mode == FlowMode::trotter_full
                ? config_.step_size /
                      static_cast<double>(std::int64_t{1} << state_.n_qubits())
                : config_.step_size;
        for (const auto& [word, c] : snap.coefficients) {
          const double theta = -2.0 * eta * c;
          gates.emplace_back(word, theta);
          apply_gate(state_, Gate::pauli_rotation(word, theta));
        }
        return;
      }
      case FlowMode::adaptive: {
        const PauliWord* best_word = nullptr;
        double best_mag = -1.0;
        for (const auto& [word, c] : snap.coefficients) {
          if (std::abs(c) > best_mag) {
            best_mag = std::abs(c);
            best_word = &word;
          }
        }
        double theta = 0.0;
        if (config_.step_strategy == StepStrategy::rotosolve) {
          StateVector plus = state_;
          apply_gate(plus, Gate::pauli_rotation(*best_word, kHalfPi));
          StateVector minus = state_;
          apply_gate(minus, Gate::pauli_rotation(*best_word, -kHalfPi));
          theta = rotosolve_angle(snap.energy, eval_.energy(plus),
                                  eval_.energy(minus));
        } else {
          double c_best = 0.0;
          for (const auto& [word, c] : snap.coefficients) {
            if (word == *best_word) {
              c_best = c;
              break;
            }
          }
          theta = -2.0 * config_.step_size * c_best;
        }
        gates.emplace_back(*best_word, theta);
        apply_gate(state_, Gate::pauli_rotation(*best_word, theta));
        return;
      }
    }
    throw std::invalid_argument("invalid flow mode");
  }

  void push_record(int step, const GradientSnapshot& snap,
                   std::vector<std::pair<PauliWord, double>> gates,
                   int perturbations) {
    FlowStepRecord record;
    record.step = step;
    record.energy = snap.energy;
    record.residual = gt_ ? residual(snap.energy, *gt_)
                          : std::numeric_limits<double>::quiet_NaN();
    record.gradient_norm = snap.grad_norm;
    record.coefficients = snap.coefficients;
    record.appended_gates = std::move(gates);
    record.perturbations_used = perturbations;
    records_.push_back(std::move(record));
    if (observer_) observer_(step, state_);
  }

  const PauliSum& h_;
  FlowConfig config_;
  const GroundTruth* gt_;
  const StepObserver& observer_;
  Evaluator eval_;
  std::mt19937_64 perturb_rng_;
  StateVector state_;
  Eigen::MatrixXcd h_dense_;
  SubspaceBasis basis_{1, {}, SubspaceBasis::Label::custom};
  std::vector<FlowStepRecord> records_;
};

}  // namespace

FlowTrace run_flow(const StateVector& initial, const PauliSum& h,
                   const FlowConfig& config, const GroundTruth* gt,
                   const StepObserver& observer) {
  return FlowDriver(initial, h, config, gt, observer).run();
}

}  // namespace riemflow
