// riemflow: Riemannian gradient flows for quantum-circuit energy
// minimization. Subcommands:
//   preset <name>    run a bundled experiment and write its trace files
//   run <config>     run a custom experiment from a JSON config
//   ground <ham>     print the exact ground energy and degeneracy

#include <charconv>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "riemflow/models.hpp"
#include "riemflow/oracle.hpp"
#include "riemflow/run.hpp"
#include "riemflow/version.hpp"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

std::string shortest_double(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

// Accepts a Pauli-sum expression or a model spec such as
// "tfim", "tfim:n=4,g=1,periodic=true".
riemflow::PauliSum hamiltonian_from_text(const std::string& text) {
  if (text.rfind("tfim", 0) == 0) {
    riemflow::TfimModel model;
    if (text.size() > 4) {
      if (text[4] != ':') {
        throw std::invalid_argument("model spec must look like tfim:n=4,g=1");
      }
      std::string rest = text.substr(5);
      std::size_t start = 0;
      while (start < rest.size()) {
        std::size_t end = rest.find(',', start);
        if (end == std::string::npos) end = rest.size();
        const std::string pair = rest.substr(start, end - start);
        const std::size_t eq = pair.find('=');
        if (eq == std::string::npos) {
          throw std::invalid_argument("model option \"" + pair +
                                      "\" is not key=value");
        }
        const std::string key = pair.substr(0, eq);
        const std::string value = pair.substr(eq + 1);
        if (key == "n") {
          model.n_qubits = std::stoi(value);
        } else if (key == "g") {
          model.g = std::stod(value);
        } else if (key == "periodic") {
          model.periodic = value == "true" || value == "1";
        } else {
          throw std::invalid_argument("unknown model option \"" + key + "\"");
        }
        start = end + 1;
      }
    }
    return riemflow::tfim_hamiltonian(model.n_qubits, model.g, model.periodic);
  }
  return riemflow::parse_pauli_sum(text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Riemannian gradient flows over SU(2^N) for ground-state "
               "search"};
  app.set_version_flag("--version", std::string(riemflow::kVersion));
  app.require_subcommand(1);

  std::string preset_name;
  std::string out_dir = ".";
  std::uint64_t seed = riemflow::kDefaultPresetSeed;
  std::int64_t shots = 0;
  CLI::App* preset = app.add_subcommand("preset", "Run a bundled experiment");
  preset->add_option("name", preset_name, "One of fig3, fig4, fig5, fig7")
      ->required();
  preset->add_option("--out", out_dir, "Output directory for trace files");
  preset->add_option("--seed", seed, "Seed for perturbations and sampling");
  preset->add_option("--shots", shots,
                     "Shots per expectation value (0 = exact)");

  std::string config_path;
  std::string run_out_dir = ".";
  CLI::App* run = app.add_subcommand("run", "Run a custom JSON config");
  run->add_option("config", config_path, "Path to the run config")->required();
  run->add_option("--out", run_out_dir, "Output directory for trace files");

  std::string hamiltonian_text;
  CLI::App* ground =
      app.add_subcommand("ground", "Exact ground energy of a Hamiltonian");
  ground
      ->add_option("hamiltonian", hamiltonian_text,
                   "Pauli-sum expression (\"X0 + X1 + Y1\") or model spec "
                   "(\"tfim:n=4,g=1,periodic=true\")")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (preset->parsed()) {
      const riemflow::RunResult result =
          riemflow::run_preset(preset_name, out_dir, seed, shots);
      for (const auto& file : result.files_written) {
        std::cout << "wrote " << file.string() << "\n";
      }
      return 0;
    }
    if (run->parsed()) {
      const riemflow::RunConfig config =
          riemflow::load_run_config(config_path);
      const riemflow::RunResult result =
          riemflow::execute_run(config, run_out_dir);
      for (const auto& file : result.files_written) {
        std::cout << "wrote " << file.string() << "\n";
      }
      return 0;
    }
    const riemflow::PauliSum h = hamiltonian_from_text(hamiltonian_text);
    const riemflow::GroundTruth gt = riemflow::ground_truth(h);
    std::cout << "E0 = " << shortest_double(gt.ground_energy) << "\n";
    std::cout << "degeneracy = " << gt.degeneracy << "\n";
    return 0;
  } catch (const riemflow::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
