#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "syllo/dataset.hpp"

namespace syllo {

struct Fold {
  std::vector<std::string> calibration_ids;
  std::vector<std::string> evaluation_ids;
  std::vector<std::string> inner_ids;  // subset of calibration_ids
};

struct FoldPlan {
  std::uint64_t seed = 0;
  int k = 5;
  int inner_size = 200;
  bool stratified = false;
  std::vector<Fold> folds;
};

// Seeded shuffle, contiguous partition into k evaluation sets (sizes differ
// by at most one), calibration = complement, inner subset of
// min(inner, |calibration|) ids drawn from each calibration set. With
// stratified=true the shuffle and partition run per subgroup so each
// evaluation set gets a near-equal share of every subgroup.
FoldPlan plan_folds(std::span<const DatasetInstance> dataset, int k = 5,
                    int inner = 200, std::uint64_t seed = 0,
                    bool stratified = false);

// Instances matching ids, in the ids' order. Throws on unknown id.
std::vector<DatasetInstance> select_instances(std::span<const DatasetInstance> dataset,
                                              std::span<const std::string> ids);

}  // namespace syllo
