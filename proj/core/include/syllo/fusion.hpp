#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "syllo/classify.hpp"
#include "syllo/logic.hpp"

namespace syllo {

struct VoteRecord {
  std::vector<int> votes;  // 0/1 each, in classifier rank order
  int sum = 0;
  int margin = 0;    // |2*sum - n|
  int majority = 0;  // 1 iff sum > n/2; exact ties fall to 0 (invalid)
};

VoteRecord aggregate(std::span<const int> votes);
VoteRecord aggregate(std::span<const Vote> votes);

enum class StrategyKind : std::uint8_t {
  EnsembleOnly,
  Tiebreaker,            // solver verdict iff margin <= tau and verdict definite
  Weighted,              // solver as one extra vote; ties fall back to the
                         // original ensemble majority
  Veto,                  // solver verdict whenever definite
  ConfidenceThreshold,   // Tiebreaker with tau = 3
  TopK,                  // first k votes in rank order, then Tiebreaker(1)
  SolverOnly,            // solver verdict; ensemble majority on indeterminate
};

struct FusionStrategy {
  StrategyKind kind = StrategyKind::EnsembleOnly;
  int tau = 1;    // Tiebreaker only
  int top_k = 3;  // TopK only

  std::string name() const;
  bool operator==(const FusionStrategy&) const = default;
};

std::optional<FusionStrategy> fusion_strategy_from(std::string_view name);

enum class FusionSource : std::uint8_t { Ensemble, Solver };

struct FusedPrediction {
  int prediction = 0;
  FusionSource source = FusionSource::Ensemble;
  int margin = 0;  // the margin the strategy compared against its threshold
  Verdict solver = Verdict::Indeterminate;
};

FusedPrediction fuse(const VoteRecord& record, Verdict solver,
                     const FusionStrategy& strategy);

}  // namespace syllo
