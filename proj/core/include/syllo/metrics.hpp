#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>

#include "syllo/dataset.hpp"

namespace syllo {

// Validity x plausibility cell.
enum class Subgroup : std::uint8_t { VB, VU, IB, IU };

const char* to_string(Subgroup g);
Subgroup subgroup_of(bool valid, Plausibility p);

// Percent correct; throws on empty or mismatched inputs.
double accuracy(std::span<const int> preds, std::span<const int> golds);

// Accuracy restricted to each subgroup present in the data. Subgroups with
// no instances get no entry rather than a zero.
std::map<Subgroup, double> subgroup_accuracy(std::span<const int> preds,
                                             std::span<const DatasetInstance> instances);

enum class CeMetricKind : std::uint8_t { CongruenceGap, PairFlipRate, External };

const char* to_string(CeMetricKind k);
std::optional<CeMetricKind> ce_metric_from(std::string_view name);

// Content-effect size in percentage points.
//   CongruenceGap: |acc(VB u IU) - acc(VU u IB)| (congruent vs incongruent).
//   PairFlipRate:  percent of believability-matched pairs (same pair_id,
//                  exactly two members) whose predictions differ; throws when
//                  the data carries no such pairs.
//   External:      the injected value (task-supplied score); throws when
//                  external is not provided.
double content_effect(std::span<const int> preds,
                      std::span<const DatasetInstance> instances, CeMetricKind kind,
                      std::optional<double> external = std::nullopt);

// accuracy / (1 + ln(1 + ce)); throws on negative ce.
double combined_score(double accuracy_percent, double ce);

struct MetricsReport {
  double accuracy = 0.0;
  std::map<Subgroup, double> subgroup_accuracy;
  double content_effect = 0.0;
  double combined_score = 0.0;
  CeMetricKind ce_kind = CeMetricKind::CongruenceGap;
};

MetricsReport compute_metrics(std::span<const int> preds,
                              std::span<const DatasetInstance> instances,
                              CeMetricKind kind,
                              std::optional<double> external = std::nullopt);

struct Aggregate {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation; 0 for a single fold
};

struct FoldAggregate {
  Aggregate accuracy;
  Aggregate content_effect;
  Aggregate combined_score;
  std::map<Subgroup, Aggregate> subgroup_accuracy;
  int folds = 0;
};

// Mean and sample std per metric. The combined score is averaged over the
// per-fold scores, not recomputed from mean accuracy and mean CE; the two
// conventions differ whenever folds vary.
FoldAggregate aggregate_folds(std::span<const MetricsReport> reports);

}  // namespace syllo
