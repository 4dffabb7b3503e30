#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "syllo/backend.hpp"
#include "syllo/classify.hpp"
#include "syllo/dataset.hpp"
#include "syllo/extraction.hpp"
#include "syllo/fusion.hpp"
#include "syllo/metrics.hpp"

namespace syllo {

// Everything a run needs, fully serializable so any run can be reproduced
// from the config written next to its outputs. Credentials never appear
// here: the backend block names an environment variable instead.
struct RunConfig {
  std::optional<std::string> dataset_path;
  std::optional<SyntheticSpec> synthetic;

  std::vector<ClassifierConfig> classifiers;
  int ensemble_size = 5;

  ExtractorConfig extraction;
  SemanticsMode mode = SemanticsMode::SubjectImport;

  std::vector<FusionStrategy> strategies;
  int tau = 1;  // threshold of the primary tiebreaker, used for behavior stats
  CeMetricKind ce_kind = CeMetricKind::CongruenceGap;

  std::uint64_t seed = 0;
  int parallelism = 1;
  std::string output_dir = "out";

  int folds = 5;
  int inner = 200;
  bool stratified = false;

  std::optional<BackendConfig> backend;

  // Throws std::invalid_argument on an inconsistent config (no dataset
  // source, remote pieces without a backend block, and so on).
  void validate() const;

  bool uses_remote() const;

  bool operator==(const RunConfig&) const = default;
};

// Twelve offline candidate classifiers: three simulated model families with
// different structural accuracy and content-bias pull, crossed with the four
// prompt kinds (which nudge structural accuracy), seeds derived from the
// run seed. The default strategy set covers all seven fusion strategies.
RunConfig default_simulated_config(std::uint64_t seed = 0);

std::vector<FusionStrategy> all_strategies(int tau = 1, int top_k = 3);

nlohmann::json to_json(const RunConfig& cfg);
RunConfig run_config_from_json(const nlohmann::json& j);

RunConfig load_run_config(const std::filesystem::path& path);
void save_run_config(const std::filesystem::path& path, const RunConfig& cfg);

}  // namespace syllo
