#include "syllo/fusion.hpp"

#include <cstdlib>
#include <stdexcept>

namespace syllo {

VoteRecord aggregate(std::span<const int> votes) {
  if (votes.empty()) throw std::invalid_argument("need at least one vote");
  VoteRecord r;
  r.votes.assign(votes.begin(), votes.end());
  for (int v : votes) {
    if (v != 0 && v != 1) throw std::invalid_argument("votes must be 0 or 1");
    r.sum += v;
  }
  const int n = static_cast<int>(votes.size());
  r.margin = std::abs(2 * r.sum - n);
  r.majority = 2 * r.sum > n ? 1 : 0;
  return r;
}

VoteRecord aggregate(std::span<const Vote> votes) {
  std::vector<int> values;
  values.reserve(votes.size());
  for (const Vote& v : votes) values.push_back(v.value);
  return aggregate(values);
}

std::string FusionStrategy::name() const {
  switch (kind) {
    case StrategyKind::EnsembleOnly: return "ensemble-only";
    case StrategyKind::Tiebreaker: return "tiebreaker(" + std::to_string(tau) + ")";
    case StrategyKind::Weighted: return "weighted";
    case StrategyKind::Veto: return "veto";
    case StrategyKind::ConfidenceThreshold: return "confidence-threshold";
    case StrategyKind::TopK:
      return "top" + std::to_string(top_k) + "+solver";
    case StrategyKind::SolverOnly: return "solver-only";
  }
  return "?";
}

std::optional<FusionStrategy> fusion_strategy_from(std::string_view name) {
  if (name == "ensemble-only") return FusionStrategy{StrategyKind::EnsembleOnly};
  if (name.rfind("tiebreaker(", 0) == 0 && name.back() == ')') {
    const std::string digits(name.substr(11, name.size() - 12));
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
      return std::nullopt;
    }
    return FusionStrategy{StrategyKind::Tiebreaker, std::stoi(digits)};
  }
  if (name == "weighted") return FusionStrategy{StrategyKind::Weighted};
  if (name == "veto") return FusionStrategy{StrategyKind::Veto};
  if (name == "confidence-threshold") {
    return FusionStrategy{StrategyKind::ConfidenceThreshold};
  }
  if (name.rfind("top", 0) == 0 && name.size() > 10 &&
      name.substr(name.size() - 7) == "+solver") {
    const std::string digits(name.substr(3, name.size() - 10));
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
      return std::nullopt;
    }
    return FusionStrategy{StrategyKind::TopK, 1, std::stoi(digits)};
  }
  if (name == "solver-only") return FusionStrategy{StrategyKind::SolverOnly};
  return std::nullopt;
}

namespace {

FusedPrediction from_ensemble(const VoteRecord& r, Verdict solver) {
  return {r.majority, FusionSource::Ensemble, r.margin, solver};
}

FusedPrediction from_solver(const VoteRecord& r, Verdict solver) {
  return {solver == Verdict::Valid ? 1 : 0, FusionSource::Solver, r.margin, solver};
}

FusedPrediction tiebreak(const VoteRecord& r, Verdict solver, int tau) {
  if (r.margin <= tau && solver != Verdict::Indeterminate) {
    return from_solver(r, solver);
  }
  return from_ensemble(r, solver);
}

}  // namespace

FusedPrediction fuse(const VoteRecord& record, Verdict solver,
                     const FusionStrategy& strategy) {
  switch (strategy.kind) {
    case StrategyKind::EnsembleOnly:
      return from_ensemble(record, solver);

    case StrategyKind::Tiebreaker:
      return tiebreak(record, solver, strategy.tau);

    case StrategyKind::ConfidenceThreshold:
      return tiebreak(record, solver, 3);

    case StrategyKind::Veto:
      if (solver != Verdict::Indeterminate) return from_solver(record, solver);
      return from_ensemble(record, solver);

    case StrategyKind::SolverOnly:
      if (solver != Verdict::Indeterminate) return from_solver(record, solver);
      return from_ensemble(record, solver);

    case StrategyKind::Weighted: {
      if (solver == Verdict::Indeterminate) return from_ensemble(record, solver);
      const int n = static_cast<int>(record.votes.size()) + 1;
      const int sum = record.sum + (solver == Verdict::Valid ? 1 : 0);
      FusedPrediction p;
      p.solver = solver;
      p.margin = record.margin;
      if (2 * sum > n) {
        p.prediction = 1;
      } else if (2 * sum < n) {
        p.prediction = 0;
      } else {
        p.prediction = record.majority;  // tie falls back to the ensemble
      }
      const int solver_bit = solver == Verdict::Valid ? 1 : 0;
      p.source = p.prediction == record.majority ? FusionSource::Ensemble
                 : p.prediction == solver_bit    ? FusionSource::Solver
                                                 : FusionSource::Ensemble;
      return p;
    }

    case StrategyKind::TopK: {
      const int k = std::min<int>(strategy.top_k,
                                  static_cast<int>(record.votes.size()));
      if (k < 1) throw std::invalid_argument("top_k must be at least 1");
      const std::span<const int> head(record.votes.data(),
                                      static_cast<std::size_t>(k));
      const VoteRecord sub = aggregate(head);
      return tiebreak(sub, solver, 1);
    }
  }
  return from_ensemble(record, solver);
}

}  // namespace syllo
