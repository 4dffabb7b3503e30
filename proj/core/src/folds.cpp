#include "syllo/folds.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <stdexcept>

#include "syllo/metrics.hpp"

namespace syllo {

namespace {

std::vector<std::vector<std::string>> partition_contiguous(
    const std::vector<std::string>& ids, int k) {
  std::vector<std::vector<std::string>> parts(static_cast<std::size_t>(k));
  const std::size_t n = ids.size();
  const std::size_t base = n / static_cast<std::size_t>(k);
  const std::size_t extra = n % static_cast<std::size_t>(k);
  std::size_t pos = 0;
  for (std::size_t f = 0; f < static_cast<std::size_t>(k); ++f) {
    const std::size_t len = base + (f < extra ? 1 : 0);
    parts[f].assign(ids.begin() + static_cast<std::ptrdiff_t>(pos),
                    ids.begin() + static_cast<std::ptrdiff_t>(pos + len));
    pos += len;
  }
  return parts;
}

}  // namespace

FoldPlan plan_folds(std::span<const DatasetInstance> dataset, int k, int inner,
                    std::uint64_t seed, bool stratified) {
  if (k < 2) throw std::invalid_argument("need at least two folds");
  if (dataset.size() < static_cast<std::size_t>(k)) {
    throw std::invalid_argument("dataset smaller than fold count");
  }

  std::mt19937_64 rng(seed);

  std::vector<std::vector<std::string>> eval_sets;
  if (!stratified) {
    std::vector<std::string> ids;
    ids.reserve(dataset.size());
    for (const auto& inst : dataset) ids.push_back(inst.id);
    std::shuffle(ids.begin(), ids.end(), rng);
    eval_sets = partition_contiguous(ids, k);
  } else {
    std::map<Subgroup, std::vector<std::string>> by_group;
    for (const auto& inst : dataset) {
      by_group[subgroup_of(inst.valid, inst.plausibility)].push_back(inst.id);
    }
    eval_sets.resize(static_cast<std::size_t>(k));
    for (auto& [_, ids] : by_group) {
      std::shuffle(ids.begin(), ids.end(), rng);
      for (std::size_t i = 0; i < ids.size(); ++i) {
        eval_sets[i % static_cast<std::size_t>(k)].push_back(std::move(ids[i]));
      }
    }
  }

  FoldPlan plan;
  plan.seed = seed;
  plan.k = k;
  plan.inner_size = inner;
  plan.stratified = stratified;
  for (int f = 0; f < k; ++f) {
    Fold fold;
    fold.evaluation_ids = eval_sets[static_cast<std::size_t>(f)];
    for (int other = 0; other < k; ++other) {
      if (other == f) continue;
      const auto& ids = eval_sets[static_cast<std::size_t>(other)];
      fold.calibration_ids.insert(fold.calibration_ids.end(), ids.begin(), ids.end());
    }
    std::vector<std::string> pool = fold.calibration_ids;
    std::shuffle(pool.begin(), pool.end(), rng);
    const std::size_t take =
        std::min<std::size_t>(static_cast<std::size_t>(std::max(0, inner)), pool.size());
    fold.inner_ids.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(take));
    plan.folds.push_back(std::move(fold));
  }
  return plan;
}

std::vector<DatasetInstance> select_instances(std::span<const DatasetInstance> dataset,
                                              std::span<const std::string> ids) {
  std::map<std::string, const DatasetInstance*> index;
  for (const auto& inst : dataset) index[inst.id] = &inst;
  std::vector<DatasetInstance> out;
  out.reserve(ids.size());
  for (const std::string& id : ids) {
    auto it = index.find(id);
    if (it == index.end()) throw std::invalid_argument("unknown instance id: " + id);
    out.push_back(*it->second);
  }
  return out;
}

}  // namespace syllo
