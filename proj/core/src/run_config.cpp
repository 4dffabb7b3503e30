#include "syllo/run_config.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

namespace syllo {

using nlohmann::json;

namespace {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

[[noreturn]] void bad(const std::string& what) {
  throw std::invalid_argument("config: " + what);
}

void check_keys(const json& j, const char* where,
                const std::set<std::string>& known) {
  if (!j.is_object()) bad(std::string(where) + " must be an object");
  for (const auto& [key, _] : j.items()) {
    if (key == "api_key" || key == "token" || key == "secret") {
      bad(std::string(where) + ": credentials must not appear in configs; "
          "name an environment variable via api_key_env instead");
    }
    if (!known.contains(key)) bad(std::string(where) + ": unknown field " + key);
  }
}

template <typename T>
T require(const json& j, const char* where, const char* key) {
  if (!j.contains(key)) bad(std::string(where) + ": missing field " + key);
  try {
    return j[key].get<T>();
  } catch (const json::exception&) {
    bad(std::string(where) + ": field " + key + " has the wrong type");
  }
}

template <typename T>
T optional_or(const json& j, const char* where, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j[key].get<T>();
  } catch (const json::exception&) {
    bad(std::string(where) + ": field " + key + " has the wrong type");
  }
}

json backend_to_json(const BackendConfig& b) {
  return json{{"base_url", b.base_url},
              {"path", b.path},
              {"api_key_env", b.api_key_env},
              {"timeout_ms", b.timeout_ms},
              {"max_retries", b.max_retries},
              {"backoff_initial_ms", b.backoff_initial_ms}};
}

BackendConfig backend_from_json(const json& j) {
  check_keys(j, "backend",
             {"base_url", "path", "api_key_env", "timeout_ms", "max_retries",
              "backoff_initial_ms"});
  BackendConfig b;
  b.base_url = require<std::string>(j, "backend", "base_url");
  b.path = optional_or<std::string>(j, "backend", "path", b.path);
  b.api_key_env = optional_or<std::string>(j, "backend", "api_key_env", "");
  b.timeout_ms = optional_or<int>(j, "backend", "timeout_ms", b.timeout_ms);
  b.max_retries = optional_or<int>(j, "backend", "max_retries", b.max_retries);
  b.backoff_initial_ms =
      optional_or<int>(j, "backend", "backoff_initial_ms", b.backoff_initial_ms);
  return b;
}

json classifier_to_json(const ClassifierConfig& c) {
  json j{{"id", c.id},
         {"prompt", to_string(c.prompt)},
         {"temperature", c.temperature}};
  if (const auto* sim = std::get_if<SimulatedBiasParams>(&c.backend)) {
    json s{{"structural_accuracy", sim->structural_accuracy},
           {"believability_pull", sim->believability_pull},
           {"seed", sim->seed}};
    if (sim->shared_bias_seed) s["shared_bias_seed"] = *sim->shared_bias_seed;
    j["simulated"] = std::move(s);
  } else {
    j["remote"] = json{{"model_id", std::get<RemoteModel>(c.backend).model_id}};
  }
  return j;
}

ClassifierConfig classifier_from_json(const json& j) {
  check_keys(j, "classifier", {"id", "prompt", "temperature", "simulated", "remote"});
  ClassifierConfig c;
  c.id = require<std::string>(j, "classifier", "id");
  const std::string prompt = require<std::string>(j, "classifier", "prompt");
  const auto kind = prompt_kind_from(prompt);
  if (!kind) bad("classifier " + c.id + ": unknown prompt kind " + prompt);
  c.prompt = *kind;
  c.temperature = optional_or<double>(j, "classifier", "temperature", 0.0);
  if (c.temperature < 0) bad("classifier " + c.id + ": temperature must be >= 0");

  const bool has_sim = j.contains("simulated");
  const bool has_remote = j.contains("remote");
  if (has_sim == has_remote) {
    bad("classifier " + c.id + ": exactly one of simulated|remote required");
  }
  if (has_sim) {
    const json& s = j["simulated"];
    check_keys(s, "classifier.simulated",
               {"structural_accuracy", "believability_pull", "seed",
                "shared_bias_seed"});
    SimulatedBiasParams p;
    p.structural_accuracy =
        require<double>(s, "classifier.simulated", "structural_accuracy");
    p.believability_pull =
        require<double>(s, "classifier.simulated", "believability_pull");
    p.seed = require<std::uint64_t>(s, "classifier.simulated", "seed");
    if (s.contains("shared_bias_seed")) {
      p.shared_bias_seed = s["shared_bias_seed"].get<std::uint64_t>();
    }
    for (double prob : {p.structural_accuracy, p.believability_pull}) {
      if (prob < 0.0 || prob > 1.0) {
        bad("classifier " + c.id + ": probabilities must lie in [0,1]");
      }
    }
    c.backend = p;
  } else {
    const json& r = j["remote"];
    check_keys(r, "classifier.remote", {"model_id"});
    c.backend = RemoteModel{require<std::string>(r, "classifier.remote", "model_id")};
  }
  return c;
}

}  // namespace

bool RunConfig::uses_remote() const {
  for (const auto& c : classifiers) {
    if (std::holds_alternative<RemoteModel>(c.backend)) return true;
  }
  for (const auto& id : extraction.chain) {
    if (id != "rule-based") return true;
  }
  return false;
}

void RunConfig::validate() const {
  if (dataset_path.has_value() == synthetic.has_value()) {
    bad("exactly one of dataset_path|synthetic required");
  }
  if (classifiers.empty()) bad("at least one classifier required");
  std::set<std::string> ids;
  for (const auto& c : classifiers) {
    if (!ids.insert(c.id).second) bad("duplicate classifier id: " + c.id);
  }
  if (ensemble_size < 1 ||
      ensemble_size > static_cast<int>(classifiers.size())) {
    bad("ensemble_size must lie in [1, #classifiers]");
  }
  if (extraction.chain.empty()) bad("extraction chain must be nonempty");
  if (strategies.empty()) bad("at least one fusion strategy required");
  if (tau < 0) bad("tau must be >= 0");
  if (ce_kind == CeMetricKind::External) {
    bad("external content-effect values cannot be computed during a run; "
        "use congruence-gap or pair-flip-rate");
  }
  if (parallelism < 1) bad("parallelism must be >= 1");
  if (folds < 2) bad("folds must be >= 2");
  if (inner < 1) bad("inner must be >= 1");
  if (uses_remote() && !backend) {
    bad("remote classifiers or extractors need a backend block");
  }
}

std::vector<FusionStrategy> all_strategies(int tau, int top_k) {
  return {
      {StrategyKind::EnsembleOnly},
      {StrategyKind::Tiebreaker, tau},
      {StrategyKind::Weighted},
      {StrategyKind::Veto},
      {StrategyKind::ConfidenceThreshold},
      {StrategyKind::TopK, 1, top_k},
      {StrategyKind::SolverOnly},
  };
}

RunConfig default_simulated_config(std::uint64_t seed) {
  struct Family {
    const char* name;
    double structural_accuracy;
    double believability_pull;
  };
  static constexpr Family kFamilies[] = {
      {"alpha", 0.92, 0.10},
      {"beta", 0.88, 0.25},
      {"gamma", 0.85, 0.35},
  };
  static constexpr PromptKind kPrompts[] = {
      PromptKind::ZeroShot, PromptKind::FewShot, PromptKind::FewShotCoT,
      PromptKind::SimpleCoT};
  // Prompt choice nudges structural accuracy, so inner-selection rankings
  // have real signal to find.
  static constexpr double kPromptDelta[] = {-0.02, 0.0, 0.01, -0.01};

  RunConfig cfg;
  cfg.synthetic = SyntheticSpec{SemanticsMode::SubjectImport, seed, 480};
  cfg.seed = seed;
  cfg.strategies = all_strategies();
  std::uint64_t salt = 0;
  for (const Family& family : kFamilies) {
    for (std::size_t p = 0; p < 4; ++p) {
      ClassifierConfig c;
      c.id = std::string(family.name) + "/" + to_string(kPrompts[p]);
      c.prompt = kPrompts[p];
      SimulatedBiasParams params;
      params.structural_accuracy = family.structural_accuracy + kPromptDelta[p];
      params.believability_pull = family.believability_pull;
      params.seed = mix64(seed ^ mix64(++salt));
      c.backend = params;
      cfg.classifiers.push_back(std::move(c));
    }
  }
  return cfg;
}

json to_json(const RunConfig& cfg) {
  json j;
  if (cfg.dataset_path) j["dataset_path"] = *cfg.dataset_path;
  if (cfg.synthetic) {
    j["synthetic"] = json{{"mode", to_string(cfg.synthetic->mode)},
                          {"seed", cfg.synthetic->seed},
                          {"pair_count", cfg.synthetic->pair_count}};
  }
  json classifiers = json::array();
  for (const auto& c : cfg.classifiers) classifiers.push_back(classifier_to_json(c));
  j["classifiers"] = std::move(classifiers);
  j["ensemble_size"] = cfg.ensemble_size;
  j["extraction"] = json{{"chain", cfg.extraction.chain},
                         {"attempts_per_extractor", cfg.extraction.attempts_per_extractor}};
  j["mode"] = to_string(cfg.mode);
  json strategies = json::array();
  for (const auto& s : cfg.strategies) strategies.push_back(s.name());
  j["strategies"] = std::move(strategies);
  j["tau"] = cfg.tau;
  j["ce_metric"] = to_string(cfg.ce_kind);
  j["seed"] = cfg.seed;
  j["parallelism"] = cfg.parallelism;
  j["output_dir"] = cfg.output_dir;
  j["folds"] = cfg.folds;
  j["inner"] = cfg.inner;
  j["stratified"] = cfg.stratified;
  if (cfg.backend) j["backend"] = backend_to_json(*cfg.backend);
  return j;
}

RunConfig run_config_from_json(const json& j) {
  check_keys(j, "run config",
             {"dataset_path", "synthetic", "classifiers", "ensemble_size",
              "extraction", "mode", "strategies", "tau", "ce_metric", "seed",
              "parallelism", "output_dir", "folds", "inner", "stratified",
              "backend"});
  RunConfig cfg;
  if (j.contains("dataset_path")) {
    cfg.dataset_path = require<std::string>(j, "run config", "dataset_path");
  }
  if (j.contains("synthetic")) {
    const json& s = j["synthetic"];
    check_keys(s, "synthetic", {"mode", "seed", "pair_count"});
    SyntheticSpec spec;
    const std::string mode = optional_or<std::string>(s, "synthetic", "mode",
                                                      to_string(spec.mode));
    const auto parsed = semantics_mode_from(mode);
    if (!parsed) bad("synthetic: unknown semantics mode " + mode);
    spec.mode = *parsed;
    spec.seed = optional_or<std::uint64_t>(s, "synthetic", "seed", 0);
    spec.pair_count = optional_or<int>(s, "synthetic", "pair_count", spec.pair_count);
    cfg.synthetic = spec;
  }

  if (!j.contains("classifiers") || !j["classifiers"].is_array()) {
    bad("classifiers must be an array");
  }
  for (const json& c : j["classifiers"]) {
    cfg.classifiers.push_back(classifier_from_json(c));
  }
  cfg.ensemble_size = optional_or<int>(j, "run config", "ensemble_size", 5);

  if (j.contains("extraction")) {
    const json& e = j["extraction"];
    check_keys(e, "extraction", {"chain", "attempts_per_extractor"});
    cfg.extraction.chain =
        require<std::vector<std::string>>(e, "extraction", "chain");
    cfg.extraction.attempts_per_extractor =
        optional_or<int>(e, "extraction", "attempts_per_extractor", 1);
  }

  const std::string mode =
      optional_or<std::string>(j, "run config", "mode", to_string(cfg.mode));
  const auto parsed_mode = semantics_mode_from(mode);
  if (!parsed_mode) bad("unknown semantics mode " + mode);
  cfg.mode = *parsed_mode;

  if (j.contains("strategies")) {
    if (!j["strategies"].is_array()) bad("strategies must be an array");
    for (const json& s : j["strategies"]) {
      if (!s.is_string()) bad("strategies must be strings");
      const auto strat = fusion_strategy_from(s.get<std::string>());
      if (!strat) bad("unknown strategy " + s.get<std::string>());
      cfg.strategies.push_back(*strat);
    }
  } else {
    cfg.strategies = all_strategies();
  }

  cfg.tau = optional_or<int>(j, "run config", "tau", 1);
  const std::string ce =
      optional_or<std::string>(j, "run config", "ce_metric", to_string(cfg.ce_kind));
  const auto parsed_ce = ce_metric_from(ce);
  if (!parsed_ce) bad("unknown ce metric " + ce);
  cfg.ce_kind = *parsed_ce;

  cfg.seed = optional_or<std::uint64_t>(j, "run config", "seed", 0);
  cfg.parallelism = optional_or<int>(j, "run config", "parallelism", 1);
  cfg.output_dir = optional_or<std::string>(j, "run config", "output_dir", "out");
  cfg.folds = optional_or<int>(j, "run config", "folds", 5);
  cfg.inner = optional_or<int>(j, "run config", "inner", 200);
  cfg.stratified = optional_or<bool>(j, "run config", "stratified", false);
  if (j.contains("backend")) cfg.backend = backend_from_json(j["backend"]);

  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path.string());
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) {
    throw std::runtime_error("config file is not valid structured text: " +
                             path.string());
  }
  return run_config_from_json(j);
}

void save_run_config(const std::filesystem::path& path, const RunConfig& cfg) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write config file: " + path.string());
  out << to_json(cfg).dump(2) << '\n';
}

}  // namespace syllo
