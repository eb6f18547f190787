#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "riemflow/pauli.hpp"
#include "riemflow/state.hpp"

namespace riemflow {
struct GroundTruth;

/// Dense matrices for the exact flow and perturbations are guarded here.
inline constexpr int kFlowDenseGuard = 8;

/// A stalled gradient with residual above this is a saddle, not convergence.
inline constexpr double kResidualTolerance = 1e-3;

enum class FlowMode { exact_dense, trotter_full, trotter_restricted, adaptive };
enum class CoefficientMethod { exact_commutator, parameter_shift };
enum class StepStrategy { fixed, rotosolve };

struct PerturbationPolicy {
  double sigma = 0.1;
  int max_attempts = 5;
  std::uint64_t rng_seed = 0;
};

struct FlowConfig {
  FlowMode mode = FlowMode::exact_dense;
  double step_size = 0.1;
  int max_steps = 100;
  std::optional<SubspaceBasis> subspace;  // required for restricted/adaptive
  CoefficientMethod coefficient_method = CoefficientMethod::exact_commutator;
  std::int64_t shots = 0;  // 0 = exact expectation values
  std::uint64_t rng_seed = 0;
  double grad_tolerance = 1e-6;
  std::optional<PerturbationPolicy> perturbation;
  StepStrategy step_strategy = StepStrategy::fixed;
};

struct FlowStepRecord {
  int step = 0;
  double energy = 0.0;
  double residual = 0.0;  // NaN when no ground truth is supplied
  double gradient_norm = 0.0;
  std::vector<std::pair<PauliWord, double>> coefficients;
  std::vector<std::pair<PauliWord, double>> appended_gates;  // (word, angle)
  int perturbations_used = 0;
};

enum class Termination { converged, max_steps, stalled };

std::string to_string(Termination termination);
std::string to_string(FlowMode mode);
std::string to_string(CoefficientMethod method);
std::string to_string(StepStrategy strategy);

struct FlowTrace {
  FlowConfig config;
  std::vector<FlowStepRecord> records;
  StateVector final_state;
  Termination termination;
};

/// The real expansion coefficient c = -i <[H, K]> of the Riemannian gradient
/// along the word K. The exact method evaluates the commutator expectation
/// termwise through the word algebra; the parameter-shift method takes the
/// difference of two energies with a +-pi/2 rotation generated by K appended.
double riemannian_coefficient(const StateVector& state, const PauliSum& h,
                              const PauliWord& k, CoefficientMethod method);

struct ExactFlowStep {
  StateVector state;
  double gradient_frobenius_norm;
};

/// One retracted step of the dense flow: psi' = exp(eps * (rho H - H rho)) psi
/// with rho = |psi><psi|. Energy is non-increasing for small eps.
ExactFlowStep exact_flow_step(const StateVector& state, const PauliSum& h,
                              double eps);

struct TrotterFlowStep {
  StateVector state;
  std::vector<std::pair<PauliWord, double>> gates;  // (word, angle)
  std::vector<std::pair<PauliWord, double>> coefficients;
};

/// Trotterized flow step: evaluates c_j for every basis word on the incoming
/// state, then appends exp(i * eta * c_j * K_j) (angle theta_j = -2 eta c_j)
/// sequentially in basis order. Use eta = eps / 2^N to track the exact flow;
/// for restricted subspaces eta is the learning rate itself.
TrotterFlowStep trotter_flow_step(
    const StateVector& state, const PauliSum& h, const SubspaceBasis& basis,
    double eta, CoefficientMethod method = CoefficientMethod::exact_commutator);

struct AdaptiveFlowStep {
  StateVector state;
  std::optional<PauliWord> selected;  // empty when stalled
  double theta = 0.0;
  std::vector<std::pair<PauliWord, double>> coefficients;
  bool stalled = false;
};

/// Appends a single rotation along the pool word with the largest |c_j|
/// (first-in-basis-order tie break). The rotosolve strategy picks the angle
/// minimizing the energy; the fixed strategy uses theta = -2 eps c. Signals a
/// stall when every |c_j| falls below grad_tolerance.
AdaptiveFlowStep adaptive_flow_step(
    const StateVector& state, const PauliSum& h, const SubspaceBasis& pool,
    StepStrategy strategy, double eps, double grad_tolerance,
    CoefficientMethod method = CoefficientMethod::exact_commutator);

/// Minimizer of E(theta) = a + b cos(theta) + c sin(theta) reconstructed from
/// E(0), E(pi/2), E(-pi/2); returns theta in (-pi, pi], 0 for the flat case.
double rotosolve_angle(double e_zero, double e_plus, double e_minus);

/// Applies exp(K) for K = (X - X^T)/2 with X i.i.d. normal(0, sigma): a random
/// direction in the Lie algebra, used to escape saddle points.
StateVector perturb(const StateVector& state, double sigma,
                    std::mt19937_64& rng);

using StepObserver = std::function<void(int step, const StateVector& state)>;

/// Drives the configured flow from `initial` until convergence (gradient and
/// residual below tolerance), stall, or max_steps. When a perturbation policy
/// is present, stalls with a large residual trigger random Lie-algebra kicks
/// until the gradient revives or the attempt budget is spent.
FlowTrace run_flow(const StateVector& initial, const PauliSum& h,
                   const FlowConfig& config, const GroundTruth* gt = nullptr,
                   const StepObserver& observer = {});

}  // namespace riemflow
