#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "riemflow/flows.hpp"
#include "riemflow/pauli.hpp"
#include "riemflow/state.hpp"
#include "riemflow/vqe.hpp"

namespace riemflow {

struct TfimModel {
  int n_qubits = 4;
  double g = 1.0;
  bool periodic = true;
};

/// Hamiltonian source: a Pauli-sum expression or a named model.
using HamiltonianSpec = std::variant<std::string, TfimModel>;

/// Initial circuit: a named preset or an explicit gate list.
struct InitialCircuit {
  enum class Kind { zero, hadamard_layer, fig3, gates };
  Kind kind = Kind::zero;
  double alpha = 0.0;  // fig3 only
  double beta = 0.0;   // fig3 only
  std::vector<Gate> gates;
};

struct VqeSettings {
  enum class Ansatz { fig3, hva_tfim };
  Ansatz ansatz = Ansatz::hva_tfim;
  int layers = 1;          // hva_tfim only
  double alpha = 0.0;      // fig3 only
  double beta = 0.0;       // fig3 only
  double step_size = 0.01;
  int max_iters = 100;
  /// Explicit initial parameters, or seeded uniform draws in [low, high).
  std::optional<std::vector<double>> initial_parameters;
  double random_init_low = 0.0;
  double random_init_high = 0.1;
};

struct OutputSpec {
  enum class Format { csv, json };
  std::string path = "trace.csv";
  Format format = Format::csv;
  bool emit_spectrum = false;
};

struct RunConfig {
  HamiltonianSpec hamiltonian;
  InitialCircuit initial_circuit;
  std::optional<int> n_qubits;  // override for expression Hamiltonians
  std::variant<FlowConfig, VqeSettings> optimizer;
  std::uint64_t seed = 0;
  OutputSpec output;
};

/// Strict JSON -> RunConfig: unknown keys are rejected, errors carry the
/// offending key path.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::filesystem::path& path);

/// Canonical JSON echo of a config, embedded in trace headers.
std::string run_config_to_json(const RunConfig& config);

PauliSum resolve_hamiltonian(const RunConfig& config);
StateVector resolve_initial_state(const RunConfig& config, int n_qubits);

struct RunResult {
  std::vector<std::filesystem::path> files_written;
};

/// Executes one configured run and writes its trace (plus the gradient
/// spectrum when requested) under out_dir.
RunResult execute_run(const RunConfig& config,
                      const std::filesystem::path& out_dir);

/// The experiment presets shipped with the tool, as plain config expansions.
/// fig3 and fig7 produce a flow run and a VQE baseline; fig4 and fig5 one
/// flow run each.
std::vector<RunConfig> preset_configs(const std::string& name,
                                      std::uint64_t seed, std::int64_t shots);

RunResult run_preset(const std::string& name,
                     const std::filesystem::path& out_dir, std::uint64_t seed,
                     std::int64_t shots);

inline constexpr std::uint64_t kDefaultPresetSeed = 42;

}  // namespace riemflow
