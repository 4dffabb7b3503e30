#include "syllo/metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace syllo {

const char* to_string(Subgroup g) {
  switch (g) {
    case Subgroup::VB: return "VB";
    case Subgroup::VU: return "VU";
    case Subgroup::IB: return "IB";
    case Subgroup::IU: return "IU";
  }
  return "?";
}

Subgroup subgroup_of(bool valid, Plausibility p) {
  if (valid) {
    return p == Plausibility::Believable ? Subgroup::VB : Subgroup::VU;
  }
  return p == Plausibility::Believable ? Subgroup::IB : Subgroup::IU;
}

double accuracy(std::span<const int> preds, std::span<const int> golds) {
  if (preds.empty() || preds.size() != golds.size()) {
    throw std::invalid_argument("accuracy needs equal-length nonempty inputs");
  }
  std::size_t correct = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (preds[i] == golds[i]) ++correct;
  }
  return 100.0 * static_cast<double>(correct) / static_cast<double>(preds.size());
}

std::map<Subgroup, double> subgroup_accuracy(
    std::span<const int> preds, std::span<const DatasetInstance> instances) {
  if (preds.size() != instances.size()) {
    throw std::invalid_argument("preds and instances must align");
  }
  std::map<Subgroup, std::pair<int, int>> tally;  // correct, total
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const Subgroup g = subgroup_of(instances[i].valid, instances[i].plausibility);
    auto& [correct, total] = tally[g];
    ++total;
    if (preds[i] == (instances[i].valid ? 1 : 0)) ++correct;
  }
  std::map<Subgroup, double> out;
  for (const auto& [g, ct] : tally) {
    out[g] = 100.0 * ct.first / ct.second;
  }
  return out;
}

const char* to_string(CeMetricKind k) {
  switch (k) {
    case CeMetricKind::CongruenceGap: return "congruence-gap";
    case CeMetricKind::PairFlipRate: return "pair-flip-rate";
    case CeMetricKind::External: return "external";
  }
  return "?";
}

std::optional<CeMetricKind> ce_metric_from(std::string_view name) {
  if (name == "congruence-gap") return CeMetricKind::CongruenceGap;
  if (name == "pair-flip-rate") return CeMetricKind::PairFlipRate;
  if (name == "external") return CeMetricKind::External;
  return std::nullopt;
}

namespace {

bool congruent(const DatasetInstance& inst) {
  // Believability agrees with the gold label: VB and IU.
  return (inst.valid && inst.plausibility == Plausibility::Believable) ||
         (!inst.valid && inst.plausibility == Plausibility::Unbelievable);
}

double congruence_gap(std::span<const int> preds,
                      std::span<const DatasetInstance> instances) {
  int cong_correct = 0, cong_total = 0;
  int incong_correct = 0, incong_total = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const bool hit = preds[i] == (instances[i].valid ? 1 : 0);
    if (congruent(instances[i])) {
      ++cong_total;
      if (hit) ++cong_correct;
    } else {
      ++incong_total;
      if (hit) ++incong_correct;
    }
  }
  if (cong_total == 0 || incong_total == 0) return 0.0;
  const double a = 100.0 * cong_correct / cong_total;
  const double b = 100.0 * incong_correct / incong_total;
  return std::abs(a - b);
}

double pair_flip_rate(std::span<const int> preds,
                      std::span<const DatasetInstance> instances) {
  std::map<std::string, std::vector<int>> groups;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (instances[i].pair_id) {
      groups[*instances[i].pair_id].push_back(preds[i]);
    }
  }
  int pairs = 0, flips = 0;
  for (const auto& [_, members] : groups) {
    if (members.size() != 2) continue;
    ++pairs;
    if (members[0] != members[1]) ++flips;
  }
  if (pairs == 0) {
    throw std::invalid_argument("pair-flip-rate needs believability-matched pairs");
  }
  return 100.0 * flips / pairs;
}

}  // namespace

double content_effect(std::span<const int> preds,
                      std::span<const DatasetInstance> instances, CeMetricKind kind,
                      std::optional<double> external) {
  if (preds.size() != instances.size()) {
    throw std::invalid_argument("preds and instances must align");
  }
  switch (kind) {
    case CeMetricKind::CongruenceGap:
      return congruence_gap(preds, instances);
    case CeMetricKind::PairFlipRate:
      return pair_flip_rate(preds, instances);
    case CeMetricKind::External:
      if (!external) {
        throw std::invalid_argument("external content-effect value not supplied");
      }
      if (*external < 0) throw std::invalid_argument("content effect must be >= 0");
      return *external;
  }
  throw std::invalid_argument("unknown content-effect kind");
}

double combined_score(double accuracy_percent, double ce) {
  if (ce < 0) throw std::invalid_argument("content effect must be >= 0");
  return accuracy_percent / (1.0 + std::log1p(ce));
}

MetricsReport compute_metrics(std::span<const int> preds,
                              std::span<const DatasetInstance> instances,
                              CeMetricKind kind, std::optional<double> external) {
  std::vector<int> golds;
  golds.reserve(instances.size());
  for (const DatasetInstance& inst : instances) golds.push_back(inst.valid ? 1 : 0);

  MetricsReport r;
  r.accuracy = accuracy(preds, golds);
  r.subgroup_accuracy = subgroup_accuracy(preds, instances);
  r.content_effect = content_effect(preds, instances, kind, external);
  r.combined_score = combined_score(r.accuracy, r.content_effect);
  r.ce_kind = kind;
  return r;
}

namespace {

Aggregate aggregate_values(const std::vector<double>& xs) {
  Aggregate a;
  if (xs.empty()) return a;
  double sum = 0;
  for (double x : xs) sum += x;
  a.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0;
    for (double x : xs) ss += (x - a.mean) * (x - a.mean);
    a.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return a;
}

}  // namespace

FoldAggregate aggregate_folds(std::span<const MetricsReport> reports) {
  if (reports.empty()) throw std::invalid_argument("need at least one fold");
  std::vector<double> acc, ce, score;
  std::map<Subgroup, std::vector<double>> sub;
  for (const MetricsReport& r : reports) {
    acc.push_back(r.accuracy);
    ce.push_back(r.content_effect);
    score.push_back(r.combined_score);
    for (const auto& [g, v] : r.subgroup_accuracy) sub[g].push_back(v);
  }
  FoldAggregate out;
  out.accuracy = aggregate_values(acc);
  out.content_effect = aggregate_values(ce);
  out.combined_score = aggregate_values(score);
  for (const auto& [g, v] : sub) out.subgroup_accuracy[g] = aggregate_values(v);
  out.folds = static_cast<int>(reports.size());
  return out;
}

}  // namespace syllo
