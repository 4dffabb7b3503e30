#include "syllo/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace syllo {

namespace {

// Index-parallel map; each index writes only its own slot, so results are
// identical regardless of scheduling.
void parallel_for(std::size_t n, int workers,
                  const std::function<void(std::size_t)>& fn) {
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const std::size_t count = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
  pool.reserve(count);
  for (std::size_t w = 0; w < count; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

ImportScanReport scan_import_forms(std::span<const DatasetInstance> dataset,
                                   const ExtractorChain& chain) {
  ImportScanReport report;
  for (const DatasetInstance& inst : dataset) {
    ExtractionOutcome outcome = chain.extract(inst.text);
    if (!outcome.ok()) {
      ++report.unextractable;
      continue;
    }
    const auto form = identify_form(*outcome.structure);
    if (!form) {
      ++report.nonstandard_shape;
      continue;
    }
    const std::string name = form->name();
    if (name == "AAI-3") {
      report.darapti.push_back({inst.id, inst.valid, inst.plausibility});
    } else if (name == "EAO-3") {
      report.felapton.push_back({inst.id, inst.valid, inst.plausibility});
    }
  }
  return report;
}

Pipeline::Pipeline(RunConfig cfg, Backend* backend)
    : cfg_(std::move(cfg)), backend_(backend), chain_(cfg_.extraction, backend) {
  cfg_.validate();
  if (cfg_.uses_remote() && !backend_) {
    throw std::invalid_argument("config uses remote models but no backend given");
  }
}

std::vector<DatasetInstance> Pipeline::load_instances() const {
  if (cfg_.dataset_path) return load_dataset(*cfg_.dataset_path);
  return generate_synthetic(builtin_lexicon(), *cfg_.synthetic);
}

Vote Pipeline::cast_vote(const ClassifierConfig& classifier,
                         const DatasetInstance& instance) const {
  if (const auto* sim = std::get_if<SimulatedBiasParams>(&classifier.backend)) {
    return classify_simulated(*sim, instance,
                              instance.valid ? Verdict::Valid : Verdict::Invalid);
  }
  const auto& model = std::get<RemoteModel>(classifier.backend);
  return classify_remote(*backend_, classifier, model, instance.text);
}

SolverOutcome Pipeline::solve_instance(const DatasetInstance& instance) const {
  SolverOutcome out;
  ExtractionOutcome extraction = chain_.extract(instance.text);
  if (!extraction.ok()) {
    out.extraction_failed = true;
    return out;
  }
  const SyllogismStructure& s = *extraction.structure;
  out.extractor_used = extraction.extractor_used;
  out.form = identify_form(s);
  out.verdict = decide_validity(s, cfg_.mode);
  if (out.verdict == Verdict::Indeterminate) {
    const std::array<Proposition, 2> premises{s.premise1, s.premise2};
    out.degenerate_premises = !check_sat(premises, cfg_.mode);
  }
  return out;
}

SelectionResult Pipeline::select_configs(std::span<const DatasetInstance> inner) const {
  if (inner.empty()) throw std::invalid_argument("inner subset is empty");

  std::vector<SelectionRow> rows(cfg_.classifiers.size());
  parallel_for(cfg_.classifiers.size(), cfg_.parallelism, [&](std::size_t c) {
    const ClassifierConfig& classifier = cfg_.classifiers[c];
    std::vector<int> preds;
    preds.reserve(inner.size());
    for (const DatasetInstance& inst : inner) {
      preds.push_back(cast_vote(classifier, inst).value);
    }
    rows[c] = {classifier, compute_metrics(preds, inner, cfg_.ce_kind)};
  });

  std::sort(rows.begin(), rows.end(), [](const SelectionRow& a, const SelectionRow& b) {
    if (a.metrics.combined_score != b.metrics.combined_score) {
      return a.metrics.combined_score > b.metrics.combined_score;
    }
    return a.config.id < b.config.id;
  });

  SelectionResult result;
  result.ranking = std::move(rows);
  const std::size_t take =
      std::min<std::size_t>(static_cast<std::size_t>(cfg_.ensemble_size),
                            result.ranking.size());
  for (std::size_t i = 0; i < take; ++i) {
    result.selected.push_back(result.ranking[i].config);
  }
  return result;
}

RunReport Pipeline::run(std::span<const DatasetInstance> evaluation,
                        std::span<const ClassifierConfig> selected) const {
  if (evaluation.empty()) throw std::invalid_argument("evaluation set is empty");
  if (selected.empty()) throw std::invalid_argument("no classifiers selected");

  RunReport report;
  report.traces.resize(evaluation.size());

  parallel_for(evaluation.size(), cfg_.parallelism, [&](std::size_t i) {
    const DatasetInstance& inst = evaluation[i];
    InstanceTrace& trace = report.traces[i];
    trace.id = inst.id;
    trace.subgroup = subgroup_of(inst.valid, inst.plausibility);
    trace.gold = inst.valid ? 1 : 0;
    for (const ClassifierConfig& classifier : selected) {
      trace.votes.push_back(cast_vote(classifier, inst));
    }
    trace.record = aggregate(std::span<const Vote>(trace.votes));
    trace.solver = solve_instance(inst);
    trace.fused.reserve(cfg_.strategies.size());
    for (const FusionStrategy& strategy : cfg_.strategies) {
      trace.fused.push_back(fuse(trace.record, trace.solver.verdict, strategy));
    }
  });

  // Per-strategy metrics.
  for (std::size_t s = 0; s < cfg_.strategies.size(); ++s) {
    StrategyResult sr;
    sr.strategy = cfg_.strategies[s];
    sr.predictions.reserve(evaluation.size());
    for (const InstanceTrace& trace : report.traces) {
      sr.predictions.push_back(trace.fused[s].prediction);
    }
    sr.metrics = compute_metrics(sr.predictions, evaluation, cfg_.ce_kind);
    report.strategies.push_back(std::move(sr));
  }

  // Behavior of the primary tiebreaker.
  const FusionStrategy primary{StrategyKind::Tiebreaker, cfg_.tau};
  TiebreakerStats& tb = report.tiebreaker;
  tb.total = static_cast<int>(evaluation.size());
  for (const InstanceTrace& trace : report.traces) {
    if (trace.solver.extraction_failed) {
      ++tb.extraction_failures;
      ++report.extraction_failures_by_subgroup[trace.subgroup];
    }
    if (trace.solver.degenerate_premises) ++tb.degenerate_premises;
    ++report.instances_by_subgroup[trace.subgroup];

    if (trace.record.margin > cfg_.tau) continue;
    ++tb.splits;
    if (trace.solver.verdict == Verdict::Indeterminate) continue;
    ++tb.solver_available;
    const FusedPrediction fused = fuse(trace.record, trace.solver.verdict, primary);
    if (fused.prediction == trace.record.majority) continue;
    ++tb.overrides;
    if (fused.prediction == trace.gold) {
      ++tb.correct_flips;
    } else {
      ++tb.wrong_flips;
    }
  }

  // Minority-coalition structure of 3-2 splits.
  CoalitionStats& co = report.coalition;
  const int n = static_cast<int>(selected.size());
  co.chance_baseline_percent = 100.0 * (n - 1) / (2.0 * n);
  std::map<std::string, int> minority_counts;
  for (const ClassifierConfig& classifier : selected) {
    minority_counts[classifier.id] = 0;
  }
  for (const InstanceTrace& trace : report.traces) {
    if (trace.record.margin != 1) continue;
    ++co.margin1_count;
    for (std::size_t c = 0; c < selected.size(); ++c) {
      if (trace.votes[c].value != trace.record.majority) {
        ++minority_counts[selected[c].id];
      }
    }
  }
  for (const auto& [id, count] : minority_counts) {
    co.minority_frequency_percent[id] =
        co.margin1_count == 0 ? 0.0 : 100.0 * count / co.margin1_count;
  }
  return report;
}

CvResult Pipeline::cross_validate(std::span<const DatasetInstance> dataset) const {
  CvResult result;
  result.plan = plan_folds(dataset, cfg_.folds, cfg_.inner, cfg_.seed, cfg_.stratified);

  for (const Fold& fold : result.plan.folds) {
    CvFold cv_fold;
    const std::vector<DatasetInstance> inner =
        select_instances(dataset, fold.inner_ids);
    cv_fold.selection = select_configs(inner);

    const std::vector<DatasetInstance> evaluation =
        select_instances(dataset, fold.evaluation_ids);
    cv_fold.report = run(evaluation, cv_fold.selection.selected);
    result.folds.push_back(std::move(cv_fold));
  }

  for (std::size_t s = 0; s < cfg_.strategies.size(); ++s) {
    std::vector<MetricsReport> per_fold;
    per_fold.reserve(result.folds.size());
    for (const CvFold& fold : result.folds) {
      per_fold.push_back(fold.report.strategies[s].metrics);
    }
    result.by_strategy[cfg_.strategies[s].name()] = aggregate_folds(per_fold);
  }
  return result;
}

}  // namespace syllo
