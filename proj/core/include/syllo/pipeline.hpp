#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "syllo/classify.hpp"
#include "syllo/dataset.hpp"
#include "syllo/extraction.hpp"
#include "syllo/folds.hpp"
#include "syllo/fusion.hpp"
#include "syllo/logic.hpp"
#include "syllo/metrics.hpp"
#include "syllo/run_config.hpp"

namespace syllo {

struct SolverOutcome {
  Verdict verdict = Verdict::Indeterminate;
  std::optional<SyllogisticForm> form;
  bool extraction_failed = false;
  bool degenerate_premises = false;  // premises jointly unsatisfiable
  std::string extractor_used;
};

struct InstanceTrace {
  std::string id;
  Subgroup subgroup = Subgroup::VB;
  int gold = 0;
  std::vector<Vote> votes;  // rank order of the selected classifiers
  VoteRecord record;
  SolverOutcome solver;
  std::vector<FusedPrediction> fused;  // parallel to the strategy list
};

// Behavior counts for the primary tiebreaker (threshold = config tau).
struct TiebreakerStats {
  int total = 0;
  int splits = 0;            // margin <= tau
  int solver_available = 0;  // splits with a definite solver verdict
  int overrides = 0;         // solver flipped the majority
  int correct_flips = 0;
  int wrong_flips = 0;
  int degenerate_premises = 0;
  int extraction_failures = 0;
};

// How often each classifier sits in the losing 2-vote side of a 3-2 split.
struct CoalitionStats {
  int margin1_count = 0;
  double chance_baseline_percent = 0.0;  // 40 for a 5-member ensemble
  std::map<std::string, double> minority_frequency_percent;
};

struct StrategyResult {
  FusionStrategy strategy;
  MetricsReport metrics;
  std::vector<int> predictions;  // aligned with the evaluation instances
};

struct RunReport {
  std::vector<StrategyResult> strategies;
  TiebreakerStats tiebreaker;
  CoalitionStats coalition;
  std::map<Subgroup, int> instances_by_subgroup;
  std::map<Subgroup, int> extraction_failures_by_subgroup;
  std::vector<InstanceTrace> traces;
};

struct SelectionRow {
  ClassifierConfig config;
  MetricsReport metrics;
};

// Candidates ranked by combined score (descending, ties by id); the first
// ensemble_size rows are the selected ensemble, in rank order.
struct SelectionResult {
  std::vector<SelectionRow> ranking;
  std::vector<ClassifierConfig> selected;
};

struct CvFold {
  SelectionResult selection;
  RunReport report;
};

struct CvResult {
  FoldPlan plan;
  std::vector<CvFold> folds;
  std::map<std::string, FoldAggregate> by_strategy;  // keyed by strategy name
};

struct ImportScanEntry {
  std::string id;
  bool valid = false;
  Plausibility plausibility = Plausibility::Believable;
};

// Occurrences of the two import-sensitive forms, used to probe which
// semantics mode a dataset's gold labels assume.
struct ImportScanReport {
  std::vector<ImportScanEntry> darapti;   // AAI-3
  std::vector<ImportScanEntry> felapton;  // EAO-3
  int unextractable = 0;
  int nonstandard_shape = 0;  // extracted but not in standard two-premise form
};

ImportScanReport scan_import_forms(std::span<const DatasetInstance> dataset,
                                   const ExtractorChain& chain);

class Pipeline {
 public:
  // The backend may be null for fully offline configs.
  Pipeline(RunConfig cfg, Backend* backend = nullptr);

  const RunConfig& config() const { return cfg_; }

  // Dataset from the configured source (file path or synthetic spec).
  std::vector<DatasetInstance> load_instances() const;

  Vote cast_vote(const ClassifierConfig& classifier,
                 const DatasetInstance& instance) const;

  SolverOutcome solve_instance(const DatasetInstance& instance) const;

  // Scores every candidate classifier alone on the inner subset.
  SelectionResult select_configs(std::span<const DatasetInstance> inner) const;

  // Full ensemble + solver evaluation of one instance set.
  RunReport run(std::span<const DatasetInstance> evaluation,
                std::span<const ClassifierConfig> selected) const;

  CvResult cross_validate(std::span<const DatasetInstance> dataset) const;

 private:
  RunConfig cfg_;
  Backend* backend_;
  ExtractorChain chain_;
};

}  // namespace syllo
