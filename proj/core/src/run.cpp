#include "riemflow/run.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "detail/number_format.hpp"
#include "riemflow/models.hpp"
#include "riemflow/oracle.hpp"
#include "riemflow/version.hpp"

namespace riemflow {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& message) {
  throw std::invalid_argument("config error: " + message);
}

void check_keys(const json& object, const std::string& context,
                std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : object.items()) {
    bool known = false;
    for (const char* name : allowed) {
      if (key == name) {
        known = true;
        break;
      }
    }
    if (!known) config_error("unknown key \"" + key + "\" in " + context);
  }
}

const json& require(const json& object, const char* key,
                    const std::string& context) {
  const auto it = object.find(key);
  if (it == object.end()) {
    config_error("missing key \"" + std::string(key) + "\" in " + context);
  }
  return *it;
}

PauliWord parse_word_text(const std::string& text, int n_qubits) {
  const PauliSum sum = parse_pauli_sum(text, n_qubits);
  if (sum.size() != 1 || sum.terms()[0].coefficient != 1.0) {
    config_error("\"" + text + "\" is not a single unit-coefficient word");
  }
  return sum.terms()[0].word;
}

Gate parse_gate(const json& spec, int n_qubits) {
  if (!spec.is_object()) config_error("gate entries must be objects");
  const std::string type = require(spec, "type", "gate").get<std::string>();
  if (type == "h") {
    check_keys(spec, "gate", {"type", "wire"});
    return Gate::hadamard(require(spec, "wire", "gate").get<int>());
  }
  if (type == "cnot") {
    check_keys(spec, "gate", {"type", "control", "target"});
    return Gate::cnot(require(spec, "control", "gate").get<int>(),
                      require(spec, "target", "gate").get<int>());
  }
  if (type == "rx" || type == "ry" || type == "rz") {
    check_keys(spec, "gate", {"type", "wire", "angle"});
    const int wire = require(spec, "wire", "gate").get<int>();
    const double angle = require(spec, "angle", "gate").get<double>();
    if (type == "rx") return Gate::rx(wire, angle);
    if (type == "ry") return Gate::ry(wire, angle);
    return Gate::rz(wire, angle);
  }
  if (type == "pauli_rotation") {
    check_keys(spec, "gate", {"type", "word", "angle"});
    const std::string word =
        require(spec, "word", "gate").get<std::string>();
    return Gate::pauli_rotation(parse_word_text(word, n_qubits),
                                require(spec, "angle", "gate").get<double>());
  }
  config_error("unknown gate type \"" + type + "\"");
}

json gate_to_json(const Gate& gate) {
  switch (gate.kind) {
    case Gate::Kind::hadamard:
      return {{"type", "h"}, {"wire", gate.wire}};
    case Gate::Kind::cnot:
      return {{"type", "cnot"}, {"control", gate.control}, {"target", gate.wire}};
    case Gate::Kind::rx:
      return {{"type", "rx"}, {"wire", gate.wire}, {"angle", gate.angle}};
    case Gate::Kind::ry:
      return {{"type", "ry"}, {"wire", gate.wire}, {"angle", gate.angle}};
    case Gate::Kind::rz:
      return {{"type", "rz"}, {"wire", gate.wire}, {"angle", gate.angle}};
    case Gate::Kind::pauli_rotation:
      return {{"type", "pauli_rotation"},
              {"word", gate.word->to_string()},
              {"angle", gate.angle}};
  }
  throw std::invalid_argument("invalid gate kind");
}

SubspaceBasis parse_subspace(const json& spec, int n_qubits) {
  if (spec.is_string()) {
    const std::string name = spec.get<std::string>();
    if (name == "single_qubit") return basis_single_qubit(n_qubits);
    if (name == "full") return basis_full(n_qubits);
    if (name == "two_local_nn") return basis_two_local(n_qubits, true, true, false);
    if (name == "two_local_all") return basis_two_local(n_qubits, false, false, false);
    config_error("unknown subspace \"" + name + "\"");
  }
  if (!spec.is_object()) config_error("subspace must be a string or object");
  if (spec.contains("words")) {
    check_keys(spec, "subspace", {"words"});
    std::vector<PauliWord> words;
    for (const auto& entry : require(spec, "words", "subspace")) {
      words.push_back(parse_word_text(entry.get<std::string>(), n_qubits));
    }
    return basis_custom(n_qubits, std::move(words));
  }
  check_keys(spec, "subspace", {"preset", "periodic", "include_singles"});
  const std::string preset =
      require(spec, "preset", "subspace").get<std::string>();
  const bool periodic = spec.value("periodic", true);
  const bool singles = spec.value("include_singles", false);
  if (preset == "single_qubit") return basis_single_qubit(n_qubits);
  if (preset == "full") return basis_full(n_qubits);
  if (preset == "two_local_nn") {
    return basis_two_local(n_qubits, true, periodic, singles);
  }
  if (preset == "two_local_all") {
    return basis_two_local(n_qubits, false, periodic, singles);
  }
  config_error("unknown subspace preset \"" + preset + "\"");
}

json subspace_to_json(const SubspaceBasis& basis) {
  // Echoed in the resolved {"words": [...]} form, which parse_subspace
  // accepts back, so a trace's config echo is itself a valid config.
  json words = json::array();
  for (const auto& word : basis.words) words.push_back(word.to_string());
  return {{"words", std::move(words)}};
}

FlowConfig parse_flow(const json& spec, int n_qubits, std::uint64_t seed) {
  check_keys(spec, "optimizer.flow",
             {"mode", "step_size", "max_steps", "subspace",
              "coefficient_method", "shots", "grad_tolerance", "perturbation",
              "step_strategy"});
  FlowConfig flow;
  const std::string mode =
      require(spec, "mode", "optimizer.flow").get<std::string>();
  if (mode == "exact_dense") flow.mode = FlowMode::exact_dense;
  else if (mode == "trotter_full") flow.mode = FlowMode::trotter_full;
  else if (mode == "trotter_restricted") flow.mode = FlowMode::trotter_restricted;
  else if (mode == "adaptive") flow.mode = FlowMode::adaptive;
  else config_error("unknown flow mode \"" + mode + "\"");
  flow.step_size = spec.value("step_size", 0.1);
  flow.max_steps = spec.value("max_steps", 100);
  if (spec.contains("subspace")) {
    flow.subspace = parse_subspace(spec.at("subspace"), n_qubits);
  }
  const std::string method = spec.value("coefficient_method", "exact_commutator");
  if (method == "exact_commutator") {
    flow.coefficient_method = CoefficientMethod::exact_commutator;
  } else if (method == "parameter_shift") {
    flow.coefficient_method = CoefficientMethod::parameter_shift;
  } else {
    config_error("unknown coefficient_method \"" + method + "\"");
  }
  flow.shots = spec.value("shots", std::int64_t{0});
  flow.grad_tolerance = spec.value("grad_tolerance", 1e-6);
  if (spec.contains("perturbation")) {
    const json& p = spec.at("perturbation");
    check_keys(p, "perturbation", {"sigma", "max_attempts", "rng_seed"});
    PerturbationPolicy policy;
    policy.sigma = p.value("sigma", 0.1);
    policy.max_attempts = p.value("max_attempts", 5);
    policy.rng_seed = p.value("rng_seed", seed + 1);
    flow.perturbation = policy;
  }
  const std::string strategy = spec.value("step_strategy", "fixed");
  if (strategy == "fixed") flow.step_strategy = StepStrategy::fixed;
  else if (strategy == "rotosolve") flow.step_strategy = StepStrategy::rotosolve;
  else config_error("unknown step_strategy \"" + strategy + "\"");
  flow.rng_seed = seed;
  return flow;
}

json flow_to_json(const FlowConfig& flow) {
  json out{{"mode", to_string(flow.mode)},
           {"step_size", flow.step_size},
           {"max_steps", flow.max_steps},
           {"coefficient_method", to_string(flow.coefficient_method)},
           {"shots", flow.shots},
           {"grad_tolerance", flow.grad_tolerance},
           {"step_strategy", to_string(flow.step_strategy)}};
  if (flow.subspace) out["subspace"] = subspace_to_json(*flow.subspace);
  if (flow.perturbation) {
    out["perturbation"] = {{"sigma", flow.perturbation->sigma},
                           {"max_attempts", flow.perturbation->max_attempts},
                           {"rng_seed", flow.perturbation->rng_seed}};
  }
  return out;
}

VqeSettings parse_vqe(const json& spec) {
  check_keys(spec, "optimizer.vqe",
             {"ansatz", "layers", "alpha", "beta", "step_size", "max_iters",
              "initial_parameters", "random_init"});
  VqeSettings vqe;
  const std::string ansatz =
      require(spec, "ansatz", "optimizer.vqe").get<std::string>();
  if (ansatz == "fig3") vqe.ansatz = VqeSettings::Ansatz::fig3;
  else if (ansatz == "hva_tfim") vqe.ansatz = VqeSettings::Ansatz::hva_tfim;
  else config_error("unknown ansatz \"" + ansatz + "\"");
  vqe.layers = spec.value("layers", 1);
  vqe.alpha = spec.value("alpha", 0.0);
  vqe.beta = spec.value("beta", 0.0);
  vqe.step_size = spec.value("step_size", 0.01);
  vqe.max_iters = spec.value("max_iters", 100);
  if (spec.contains("initial_parameters")) {
    vqe.initial_parameters =
        spec.at("initial_parameters").get<std::vector<double>>();
  }
  if (spec.contains("random_init")) {
    const json& r = spec.at("random_init");
    check_keys(r, "random_init", {"low", "high"});
    vqe.random_init_low = r.value("low", 0.0);
    vqe.random_init_high = r.value("high", 0.1);
  }
  return vqe;
}

json vqe_to_json(const VqeSettings& vqe) {
  json out{{"ansatz", vqe.ansatz == VqeSettings::Ansatz::fig3 ? "fig3" : "hva_tfim"},
           {"step_size", vqe.step_size},
           {"max_iters", vqe.max_iters}};
  if (vqe.ansatz == VqeSettings::Ansatz::hva_tfim) out["layers"] = vqe.layers;
  if (vqe.ansatz == VqeSettings::Ansatz::fig3) {
    out["alpha"] = vqe.alpha;
    out["beta"] = vqe.beta;
  }
  if (vqe.initial_parameters) {
    out["initial_parameters"] = *vqe.initial_parameters;
  } else {
    out["random_init"] = {{"low", vqe.random_init_low},
                          {"high", vqe.random_init_high}};
  }
  return out;
}

int infer_qubit_count(const RunConfig& config) {
  if (std::holds_alternative<TfimModel>(config.hamiltonian)) {
    return std::get<TfimModel>(config.hamiltonian).n_qubits;
  }
  const std::string& expr = std::get<std::string>(config.hamiltonian);
  return parse_pauli_sum(expr, config.n_qubits.value_or(0)).n_qubits();
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < json_text.size(); ++i) {
      if (json_text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw std::invalid_argument("config error: invalid JSON at line " +
                                std::to_string(line) + ", column " +
                                std::to_string(column) + ": " + e.what());
  }
  if (!root.is_object()) config_error("top level must be an object");
  check_keys(root, "config",
             {"hamiltonian", "initial_circuit", "n_qubits", "optimizer",
              "seed", "output"});

  RunConfig config;
  const json& ham = require(root, "hamiltonian", "config");
  if (ham.is_string()) {
    config.hamiltonian = ham.get<std::string>();
  } else if (ham.is_object() && ham.contains("tfim")) {
    check_keys(ham, "hamiltonian", {"tfim"});
    const json& t = ham.at("tfim");
    check_keys(t, "hamiltonian.tfim", {"n", "g", "periodic"});
    TfimModel model;
    model.n_qubits = require(t, "n", "hamiltonian.tfim").get<int>();
    model.g = t.value("g", 1.0);
    model.periodic = t.value("periodic", true);
    config.hamiltonian = model;
  } else {
    config_error("hamiltonian must be an expression string or {\"tfim\": ...}");
  }
  if (root.contains("n_qubits")) {
    config.n_qubits = root.at("n_qubits").get<int>();
  }
  config.seed = root.value("seed", std::uint64_t{0});

  const int n_qubits = infer_qubit_count(config);

  const json& init = require(root, "initial_circuit", "config");
  if (init.is_string()) {
    const std::string name = init.get<std::string>();
    if (name == "zero") config.initial_circuit.kind = InitialCircuit::Kind::zero;
    else if (name == "hadamard_layer") {
      config.initial_circuit.kind = InitialCircuit::Kind::hadamard_layer;
    } else {
      config_error("unknown initial_circuit \"" + name + "\"");
    }
  } else if (init.is_object() && init.contains("fig3")) {
    check_keys(init, "initial_circuit", {"fig3"});
    const json& f = init.at("fig3");
    check_keys(f, "initial_circuit.fig3", {"alpha", "beta"});
    config.initial_circuit.kind = InitialCircuit::Kind::fig3;
    config.initial_circuit.alpha = require(f, "alpha", "fig3").get<double>();
    config.initial_circuit.beta = require(f, "beta", "fig3").get<double>();
  } else if (init.is_object() && init.contains("gates")) {
    check_keys(init, "initial_circuit", {"gates"});
    config.initial_circuit.kind = InitialCircuit::Kind::gates;
    for (const auto& entry : init.at("gates")) {
      config.initial_circuit.gates.push_back(parse_gate(entry, n_qubits));
    }
  } else {
    config_error("initial_circuit must name a preset or list gates");
  }

  const json& opt = require(root, "optimizer", "config");
  if (!opt.is_object()) config_error("optimizer must be an object");
  const bool has_flow = opt.contains("flow");
  const bool has_vqe = opt.contains("vqe");
  if (has_flow == has_vqe) {
    config_error("optimizer needs exactly one of \"flow\" or \"vqe\"");
  }
  check_keys(opt, "optimizer", {"flow", "vqe"});
  if (has_flow) {
    config.optimizer = parse_flow(opt.at("flow"), n_qubits, config.seed);
  } else {
    config.optimizer = parse_vqe(opt.at("vqe"));
  }

  if (root.contains("output")) {
    const json& out = root.at("output");
    check_keys(out, "output", {"path", "format", "emit_spectrum"});
    config.output.path = out.value("path", std::string("trace.csv"));
    const std::string format = out.value("format", std::string("csv"));
    if (format == "csv") config.output.format = OutputSpec::Format::csv;
    else if (format == "json") config.output.format = OutputSpec::Format::json;
    else config_error("output format must be \"csv\" or \"json\"");
    config.output.emit_spectrum = out.value("emit_spectrum", false);
  }
  return config;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::invalid_argument("cannot open config file " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_run_config(buffer.str());
}

std::string run_config_to_json(const RunConfig& config) {
  json root;
  if (std::holds_alternative<TfimModel>(config.hamiltonian)) {
    const TfimModel& model = std::get<TfimModel>(config.hamiltonian);
    root["hamiltonian"] = {{"tfim",
                            {{"n", model.n_qubits},
                             {"g", model.g},
                             {"periodic", model.periodic}}}};
  } else {
    root["hamiltonian"] = std::get<std::string>(config.hamiltonian);
  }
  if (config.n_qubits) root["n_qubits"] = *config.n_qubits;
  switch (config.initial_circuit.kind) {
    case InitialCircuit::Kind::zero:
      root["initial_circuit"] = "zero";
      break;
    case InitialCircuit::Kind::hadamard_layer:
      root["initial_circuit"] = "hadamard_layer";
      break;
    case InitialCircuit::Kind::fig3:
      root["initial_circuit"] = {{"fig3",
                                  {{"alpha", config.initial_circuit.alpha},
                                   {"beta", config.initial_circuit.beta}}}};
      break;
    case InitialCircuit::Kind::gates: {
      json gates = json::array();
      for (const auto& gate : config.initial_circuit.gates) {
        gates.push_back(gate_to_json(gate));
      }
      root["initial_circuit"] = {{"gates", std::move(gates)}};
      break;
    }
  }
  if (std::holds_alternative<FlowConfig>(config.optimizer)) {
    root["optimizer"] = {{"flow", flow_to_json(std::get<FlowConfig>(config.optimizer))}};
  } else {
    root["optimizer"] = {{"vqe", vqe_to_json(std::get<VqeSettings>(config.optimizer))}};
  }
  root["seed"] = config.seed;
  root["output"] = {
      {"path", config.output.path},
      {"format", config.output.format == OutputSpec::Format::csv ? "csv" : "json"},
      {"emit_spectrum", config.output.emit_spectrum}};
  return root.dump();
}

PauliSum resolve_hamiltonian(const RunConfig& config) {
  if (std::holds_alternative<TfimModel>(config.hamiltonian)) {
    const TfimModel& model = std::get<TfimModel>(config.hamiltonian);
    return tfim_hamiltonian(model.n_qubits, model.g, model.periodic);
  }
  return parse_pauli_sum(std::get<std::string>(config.hamiltonian),
                         config.n_qubits.value_or(0));
}

StateVector resolve_initial_state(const RunConfig& config, int n_qubits) {
  StateVector state = init_zero_state(n_qubits);
  switch (config.initial_circuit.kind) {
    case InitialCircuit::Kind::zero:
      return state;
    case InitialCircuit::Kind::hadamard_layer:
      for (int w = 0; w < n_qubits; ++w) {
        apply_gate(state, Gate::hadamard(w));
      }
      return state;
    case InitialCircuit::Kind::fig3: {
      const ParamCircuit circuit = fig3_ansatz(config.initial_circuit.alpha,
                                               config.initial_circuit.beta);
      if (n_qubits != circuit.n_qubits()) {
        config_error("the fig3 circuit is a 2-qubit preparation");
      }
      return circuit.prepare(state, circuit.initial_params());
    }
    case InitialCircuit::Kind::gates:
      for (const auto& gate : config.initial_circuit.gates) {
        apply_gate(state, gate);
      }
      return state;
  }
  throw std::invalid_argument("invalid initial circuit kind");
}

namespace {

std::string csv_double(double value) {
  if (std::isnan(value)) return "";
  return detail::format_double(value);
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << body;
  if (!out) {
    throw std::runtime_error("failed writing " + path.string());
  }
}

std::string trace_header_comment(const RunConfig& config, double e0) {
  std::string head;
  head += "# riemflow " + std::string(kVersion) + "\n";
  head += "# config " + run_config_to_json(config) + "\n";
  head += "# e0 " + detail::format_double(e0) + "\n";
  return head;
}

std::string flow_trace_csv(const RunConfig& config, const FlowTrace& trace,
                           double e0) {
  std::string body = trace_header_comment(config, e0);
  body += "# termination " + to_string(trace.termination) + "\n";
  body +=
      "step,energy,residual,grad_norm,n_appended_gates,selected_word,theta,"
      "perturbations\n";
  for (const auto& record : trace.records) {
    std::string selected;
    std::string theta;
    if (record.appended_gates.size() == 1) {
      selected = record.appended_gates[0].first.to_string();
      theta = detail::format_double(record.appended_gates[0].second);
    }
    body += std::to_string(record.step) + "," + csv_double(record.energy) +
            "," + csv_double(record.residual) + "," +
            csv_double(record.gradient_norm) + "," +
            std::to_string(record.appended_gates.size()) + "," + selected +
            "," + theta + "," + std::to_string(record.perturbations_used) +
            "\n";
  }
  return body;
}

json flow_trace_json(const RunConfig& config, const FlowTrace& trace,
                     double e0) {
  json steps = json::array();
  for (const auto& record : trace.records) {
    json gates = json::array();
    for (const auto& [word, angle] : record.appended_gates) {
      gates.push_back({{"word", word.to_string()}, {"angle", angle}});
    }
    json row{{"step", record.step},
             {"energy", record.energy},
             {"residual", record.residual},
             {"grad_norm", record.gradient_norm},
             {"gates", std::move(gates)},
             {"perturbations", record.perturbations_used}};
    steps.push_back(std::move(row));
  }
  return json{{"tool", "riemflow"},
              {"version", kVersion},
              {"config", json::parse(run_config_to_json(config))},
              {"e0", e0},
              {"termination", to_string(trace.termination)},
              {"steps", std::move(steps)}};
}

std::string vqe_trace_csv(const RunConfig& config, const VqeTrace& trace,
                          double e0) {
  std::string body = trace_header_comment(config, e0);
  body += std::string("# termination ") +
          (trace.converged ? "converged" : "max_steps") + "\n";
  body +=
      "step,energy,residual,grad_norm,n_appended_gates,selected_word,theta,"
      "perturbations\n";
  for (std::size_t k = 0; k < trace.energies.size(); ++k) {
    body += std::to_string(k) + "," + csv_double(trace.energies[k]) + "," +
            csv_double(trace.residuals[k]) + "," +
            csv_double(trace.gradient_norms[k]) + ",0,,,0\n";
  }
  return body;
}

json vqe_trace_json(const RunConfig& config, const VqeTrace& trace,
                    double e0) {
  json steps = json::array();
  for (std::size_t k = 0; k < trace.energies.size(); ++k) {
    steps.push_back({{"step", k},
                     {"energy", trace.energies[k]},
                     {"residual", trace.residuals[k]},
                     {"grad_norm", trace.gradient_norms[k]},
                     {"parameters", trace.parameters[k]}});
  }
  return json{{"tool", "riemflow"},
              {"version", kVersion},
              {"config", json::parse(run_config_to_json(config))},
              {"e0", e0},
              {"termination", trace.converged ? "converged" : "max_steps"},
              {"steps", std::move(steps)}};
}

std::string spectrum_csv(
    const std::vector<std::pair<int, std::map<int, std::vector<SpectrumEntry>>>>&
        spectra) {
  std::string body = "step,weight,word,magnitude\n";
  for (const auto& [step, by_weight] : spectra) {
    for (const auto& [weight, entries] : by_weight) {
      for (const auto& entry : entries) {
        body += std::to_string(step) + "," + std::to_string(weight) + "," +
                entry.word.to_string() + "," +
                detail::format_double(entry.magnitude) + "\n";
      }
    }
  }
  return body;
}

std::vector<double> vqe_initial_parameters(const VqeSettings& vqe,
                                           const ParamCircuit& circuit,
                                           std::uint64_t seed) {
  if (vqe.initial_parameters) {
    if (vqe.initial_parameters->size() !=
        static_cast<std::size_t>(circuit.n_params())) {
      config_error("initial_parameters size differs from the ansatz");
    }
    return *vqe.initial_parameters;
  }
  if (vqe.ansatz == VqeSettings::Ansatz::fig3) {
    return circuit.initial_params();
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(vqe.random_init_low,
                                                 vqe.random_init_high);
  std::vector<double> params(circuit.n_params());
  for (double& p : params) p = uniform(rng);
  return params;
}

}  // namespace

RunResult execute_run(const RunConfig& config,
                      const std::filesystem::path& out_dir) {
  const PauliSum h = resolve_hamiltonian(config);
  const StateVector initial = resolve_initial_state(config, h.n_qubits());
  const GroundTruth gt = ground_truth(h);

  std::filesystem::create_directories(out_dir);
  const std::filesystem::path trace_path = out_dir / config.output.path;
  RunResult result;

  if (std::holds_alternative<FlowConfig>(config.optimizer)) {
    const FlowConfig& flow = std::get<FlowConfig>(config.optimizer);
    std::vector<std::pair<int, std::map<int, std::vector<SpectrumEntry>>>>
        spectra;
    StepObserver observer;
    if (config.output.emit_spectrum) {
      observer = [&](int step, const StateVector& state) {
        spectra.emplace_back(step, gradient_spectrum(state, h));
      };
    }
    const FlowTrace trace = run_flow(initial, h, flow, &gt, observer);
    if (config.output.format == OutputSpec::Format::csv) {
      write_file(trace_path, flow_trace_csv(config, trace, gt.ground_energy));
    } else {
      write_file(trace_path,
                 flow_trace_json(config, trace, gt.ground_energy).dump(2) + "\n");
    }
    result.files_written.push_back(trace_path);
    if (config.output.emit_spectrum) {
      std::filesystem::path spectrum_path = trace_path;
      spectrum_path.replace_filename(trace_path.stem().string() +
                                     "_spectrum.csv");
      write_file(spectrum_path, spectrum_csv(spectra));
      result.files_written.push_back(spectrum_path);
    }
    return result;
  }

  const VqeSettings& vqe = std::get<VqeSettings>(config.optimizer);
  const ParamCircuit circuit =
      vqe.ansatz == VqeSettings::Ansatz::fig3
          ? fig3_ansatz(vqe.alpha, vqe.beta)
          : hva_tfim_ansatz(h.n_qubits(), vqe.layers);
  if (circuit.n_qubits() != h.n_qubits()) {
    config_error("ansatz qubit count differs from the Hamiltonian");
  }
  const std::vector<double> params0 =
      vqe_initial_parameters(vqe, circuit, config.seed);
  const VqeTrace trace = vqe_run(circuit, params0, initial, h, vqe.step_size,
                                 vqe.max_iters, &gt);
  if (config.output.format == OutputSpec::Format::csv) {
    write_file(trace_path, vqe_trace_csv(config, trace, gt.ground_energy));
  } else {
    write_file(trace_path,
               vqe_trace_json(config, trace, gt.ground_energy).dump(2) + "\n");
  }
  result.files_written.push_back(trace_path);
  return result;
}

std::vector<RunConfig> preset_configs(const std::string& name,
                                      std::uint64_t seed, std::int64_t shots) {
  std::vector<RunConfig> configs;
  if (name == "fig3") {
    RunConfig flow;
    flow.hamiltonian = std::string("X0 + X1 + Y1");
    flow.initial_circuit.kind = InitialCircuit::Kind::fig3;
    flow.initial_circuit.alpha = 0.1;
    flow.initial_circuit.beta = 1.2;
    FlowConfig f;
    f.mode = FlowMode::exact_dense;
    f.step_size = 0.5;
    f.max_steps = 100;
    f.shots = shots;
    f.rng_seed = seed;
    flow.optimizer = f;
    flow.seed = seed;
    flow.output.path = "fig3_riemannian.csv";
    configs.push_back(std::move(flow));

    RunConfig vqe;
    vqe.hamiltonian = std::string("X0 + X1 + Y1");
    vqe.initial_circuit.kind = InitialCircuit::Kind::zero;
    VqeSettings v;
    v.ansatz = VqeSettings::Ansatz::fig3;
    v.alpha = 0.1;
    v.beta = 1.2;
    v.step_size = 0.5;
    v.max_iters = 100;
    v.initial_parameters = std::vector<double>{0.1, 1.2};
    vqe.optimizer = v;
    vqe.seed = seed;
    vqe.output.path = "fig3_vqe.csv";
    configs.push_back(std::move(vqe));
    return configs;
  }
  if (name == "fig4") {
    RunConfig flow;
    flow.hamiltonian = std::string("X0 + Y0 + X1");
    flow.initial_circuit.kind = InitialCircuit::Kind::hadamard_layer;
    FlowConfig f;
    f.mode = FlowMode::exact_dense;
    f.step_size = 0.2;
    // The stall trigger (gradient below 1e-6 at the saddle) fires past step
    // 100 at this step size, and the escape needs room to converge.
    f.max_steps = 300;
    f.shots = shots;
    f.rng_seed = seed;
    f.perturbation = PerturbationPolicy{0.1, 50, seed + 1};
    flow.optimizer = f;
    flow.seed = seed;
    flow.output.path = "fig4_riemannian.csv";
    configs.push_back(std::move(flow));
    return configs;
  }
  if (name == "fig5") {
    RunConfig flow;
    flow.hamiltonian = std::string("X0 + Y0Z1");
    flow.initial_circuit.kind = InitialCircuit::Kind::hadamard_layer;
    FlowConfig f;
    f.mode = FlowMode::trotter_restricted;
    f.step_size = 0.05;
    f.max_steps = 100;
    f.shots = shots;
    f.rng_seed = seed;
    f.subspace = basis_custom(
        2, {parse_word_text("Y0Y1", 2), parse_word_text("Z0Z1", 2)});
    flow.optimizer = f;
    flow.seed = seed;
    flow.output.path = "fig5_riemannian.csv";
    configs.push_back(std::move(flow));
    return configs;
  }
  if (name == "fig7") {
    RunConfig flow;
    flow.hamiltonian = TfimModel{4, 1.0, true};
    flow.initial_circuit.kind = InitialCircuit::Kind::hadamard_layer;
    FlowConfig f;
    f.mode = FlowMode::adaptive;
    f.step_size = 0.01;
    f.max_steps = 200;
    f.shots = shots;
    f.rng_seed = seed;
    f.subspace = basis_two_local(4, false, true, true);
    f.step_strategy = StepStrategy::rotosolve;
    // Keep stepping through the plateau instead of stopping at the default
    // stall tolerance; the trace is the point of this preset.
    f.grad_tolerance = 1e-300;
    flow.optimizer = f;
    flow.seed = seed;
    flow.output.path = "fig7_riemannian.csv";
    flow.output.emit_spectrum = true;
    configs.push_back(std::move(flow));

    RunConfig vqe;
    vqe.hamiltonian = TfimModel{4, 1.0, true};
    vqe.initial_circuit.kind = InitialCircuit::Kind::hadamard_layer;
    VqeSettings v;
    v.ansatz = VqeSettings::Ansatz::hva_tfim;
    v.layers = 2;
    v.step_size = 0.01;
    v.max_iters = 500;
    v.random_init_low = 0.0;
    v.random_init_high = 0.1;
    vqe.optimizer = v;
    vqe.seed = seed;
    vqe.output.path = "fig7_vqe.csv";
    configs.push_back(std::move(vqe));
    return configs;
  }
  throw std::invalid_argument("unknown preset \"" + name +
                              "\" (expected fig3, fig4, fig5 or fig7)");
}

RunResult run_preset(const std::string& name,
                     const std::filesystem::path& out_dir, std::uint64_t seed,
                     std::int64_t shots) {
  RunResult merged;
  for (const RunConfig& config : preset_configs(name, seed, shots)) {
    RunResult result = execute_run(config, out_dir);
    merged.files_written.insert(merged.files_written.end(),
                                result.files_written.begin(),
                                result.files_written.end());
  }
  return merged;
}

}  // namespace riemflow
