#include "syllo/reporting.hpp"

#include <array>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace syllo {

using nlohmann::json;

namespace {

constexpr std::array<Subgroup, 4> kSubgroups{Subgroup::VB, Subgroup::VU,
                                             Subgroup::IB, Subgroup::IU};

std::string fmt(double v, int precision = 2) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

std::string mean_std(const Aggregate& a) {
  return fmt(a.mean) + " +- " + fmt(a.stddev);
}

[[noreturn]] void bad(const std::string& what) {
  throw std::runtime_error("report: " + what);
}

Subgroup subgroup_from(const std::string& name) {
  for (Subgroup g : kSubgroups) {
    if (name == to_string(g)) return g;
  }
  bad("unknown subgroup " + name);
}

}  // namespace

json to_json(const MetricsReport& r) {
  json sub = json::object();
  for (const auto& [g, v] : r.subgroup_accuracy) sub[to_string(g)] = v;
  return json{{"accuracy", r.accuracy},
              {"subgroup_accuracy", std::move(sub)},
              {"content_effect", r.content_effect},
              {"combined_score", r.combined_score},
              {"ce_metric", to_string(r.ce_kind)}};
}

MetricsReport metrics_report_from_json(const json& j) {
  MetricsReport r;
  r.accuracy = j.at("accuracy").get<double>();
  r.content_effect = j.at("content_effect").get<double>();
  r.combined_score = j.at("combined_score").get<double>();
  const auto kind = ce_metric_from(j.at("ce_metric").get<std::string>());
  if (!kind) bad("unknown ce metric");
  r.ce_kind = *kind;
  for (const auto& [key, value] : j.at("subgroup_accuracy").items()) {
    r.subgroup_accuracy[subgroup_from(key)] = value.get<double>();
  }
  return r;
}

json to_json(const FoldAggregate& a) {
  json sub = json::object();
  for (const auto& [g, agg] : a.subgroup_accuracy) {
    sub[to_string(g)] = json{{"mean", agg.mean}, {"stddev", agg.stddev}};
  }
  return json{
      {"accuracy", {{"mean", a.accuracy.mean}, {"stddev", a.accuracy.stddev}}},
      {"content_effect",
       {{"mean", a.content_effect.mean}, {"stddev", a.content_effect.stddev}}},
      {"combined_score",
       {{"mean", a.combined_score.mean}, {"stddev", a.combined_score.stddev}}},
      {"subgroup_accuracy", std::move(sub)},
      {"folds", a.folds}};
}

namespace {

FoldAggregate fold_aggregate_from_json(const json& j) {
  FoldAggregate a;
  auto read = [](const json& node) {
    return Aggregate{node.at("mean").get<double>(), node.at("stddev").get<double>()};
  };
  a.accuracy = read(j.at("accuracy"));
  a.content_effect = read(j.at("content_effect"));
  a.combined_score = read(j.at("combined_score"));
  for (const auto& [key, value] : j.at("subgroup_accuracy").items()) {
    a.subgroup_accuracy[subgroup_from(key)] = read(value);
  }
  a.folds = j.at("folds").get<int>();
  return a;
}

}  // namespace

json to_json(const RunReport& r) {
  json strategies = json::array();
  for (const StrategyResult& s : r.strategies) {
    strategies.push_back(json{{"strategy", s.strategy.name()},
                              {"metrics", to_json(s.metrics)},
                              {"predictions", s.predictions}});
  }
  json by_subgroup = json::object();
  json failures = json::object();
  for (const auto& [g, count] : r.instances_by_subgroup) {
    by_subgroup[to_string(g)] = count;
  }
  for (const auto& [g, count] : r.extraction_failures_by_subgroup) {
    failures[to_string(g)] = count;
  }
  return json{
      {"strategies", std::move(strategies)},
      {"tiebreaker",
       {{"total", r.tiebreaker.total},
        {"splits", r.tiebreaker.splits},
        {"solver_available", r.tiebreaker.solver_available},
        {"overrides", r.tiebreaker.overrides},
        {"correct_flips", r.tiebreaker.correct_flips},
        {"wrong_flips", r.tiebreaker.wrong_flips},
        {"degenerate_premises", r.tiebreaker.degenerate_premises},
        {"extraction_failures", r.tiebreaker.extraction_failures}}},
      {"coalition",
       {{"margin1_count", r.coalition.margin1_count},
        {"chance_baseline_percent", r.coalition.chance_baseline_percent},
        {"minority_frequency_percent", r.coalition.minority_frequency_percent}}},
      {"instances_by_subgroup", std::move(by_subgroup)},
      {"extraction_failures_by_subgroup", std::move(failures)}};
}

RunReport run_report_from_json(const json& j) {
  RunReport r;
  for (const json& s : j.at("strategies")) {
    StrategyResult sr;
    const auto strategy = fusion_strategy_from(s.at("strategy").get<std::string>());
    if (!strategy) bad("unknown strategy " + s.at("strategy").get<std::string>());
    sr.strategy = *strategy;
    sr.metrics = metrics_report_from_json(s.at("metrics"));
    sr.predictions = s.at("predictions").get<std::vector<int>>();
    r.strategies.push_back(std::move(sr));
  }
  const json& tb = j.at("tiebreaker");
  r.tiebreaker = {tb.at("total").get<int>(),
                  tb.at("splits").get<int>(),
                  tb.at("solver_available").get<int>(),
                  tb.at("overrides").get<int>(),
                  tb.at("correct_flips").get<int>(),
                  tb.at("wrong_flips").get<int>(),
                  tb.at("degenerate_premises").get<int>(),
                  tb.at("extraction_failures").get<int>()};
  const json& co = j.at("coalition");
  r.coalition.margin1_count = co.at("margin1_count").get<int>();
  r.coalition.chance_baseline_percent =
      co.at("chance_baseline_percent").get<double>();
  for (const auto& [key, value] : co.at("minority_frequency_percent").items()) {
    r.coalition.minority_frequency_percent[key] = value.get<double>();
  }
  for (const auto& [key, value] : j.at("instances_by_subgroup").items()) {
    r.instances_by_subgroup[subgroup_from(key)] = value.get<int>();
  }
  for (const auto& [key, value] : j.at("extraction_failures_by_subgroup").items()) {
    r.extraction_failures_by_subgroup[subgroup_from(key)] = value.get<int>();
  }
  return r;
}

json to_json(const SelectionResult& r) {
  json ranking = json::array();
  for (const SelectionRow& row : r.ranking) {
    ranking.push_back(json{{"id", row.config.id},
                           {"prompt", to_string(row.config.prompt)},
                           {"metrics", to_json(row.metrics)}});
  }
  json selected = json::array();
  for (const ClassifierConfig& c : r.selected) selected.push_back(c.id);
  return json{{"ranking", std::move(ranking)}, {"selected", std::move(selected)}};
}

SelectionResult selection_result_from_json(const json& j) {
  SelectionResult r;
  for (const json& row : j.at("ranking")) {
    SelectionRow out;
    out.config.id = row.at("id").get<std::string>();
    const auto prompt = prompt_kind_from(row.at("prompt").get<std::string>());
    if (!prompt) bad("unknown prompt kind");
    out.config.prompt = *prompt;
    out.metrics = metrics_report_from_json(row.at("metrics"));
    r.ranking.push_back(std::move(out));
  }
  for (const json& id : j.at("selected")) {
    for (const SelectionRow& row : r.ranking) {
      if (row.config.id == id.get<std::string>()) {
        r.selected.push_back(row.config);
        break;
      }
    }
  }
  return r;
}

json to_json(const CvResult& r) {
  json folds = json::array();
  for (const CvFold& fold : r.folds) {
    folds.push_back(json{{"selection", to_json(fold.selection)},
                         {"report", to_json(fold.report)}});
  }
  json plan_folds_json = json::array();
  for (const Fold& fold : r.plan.folds) {
    plan_folds_json.push_back(json{{"calibration_ids", fold.calibration_ids},
                                   {"evaluation_ids", fold.evaluation_ids},
                                   {"inner_ids", fold.inner_ids}});
  }
  json by_strategy = json::object();
  for (const auto& [name, agg] : r.by_strategy) by_strategy[name] = to_json(agg);
  return json{{"plan",
               {{"seed", r.plan.seed},
                {"k", r.plan.k},
                {"inner_size", r.plan.inner_size},
                {"stratified", r.plan.stratified},
                {"folds", std::move(plan_folds_json)}}},
              {"folds", std::move(folds)},
              {"by_strategy", std::move(by_strategy)}};
}

CvResult cv_result_from_json(const json& j) {
  CvResult r;
  const json& plan = j.at("plan");
  r.plan.seed = plan.at("seed").get<std::uint64_t>();
  r.plan.k = plan.at("k").get<int>();
  r.plan.inner_size = plan.at("inner_size").get<int>();
  r.plan.stratified = plan.at("stratified").get<bool>();
  for (const json& fold : plan.at("folds")) {
    Fold f;
    f.calibration_ids = fold.at("calibration_ids").get<std::vector<std::string>>();
    f.evaluation_ids = fold.at("evaluation_ids").get<std::vector<std::string>>();
    f.inner_ids = fold.at("inner_ids").get<std::vector<std::string>>();
    r.plan.folds.push_back(std::move(f));
  }
  for (const json& fold : j.at("folds")) {
    CvFold f;
    f.selection = selection_result_from_json(fold.at("selection"));
    f.report = run_report_from_json(fold.at("report"));
    r.folds.push_back(std::move(f));
  }
  for (const auto& [name, agg] : j.at("by_strategy").items()) {
    r.by_strategy[name] = fold_aggregate_from_json(agg);
  }
  return r;
}

json to_json(const ImportScanReport& r) {
  auto entries = [](const std::vector<ImportScanEntry>& list) {
    json out = json::array();
    for (const ImportScanEntry& e : list) {
      out.push_back(json{{"id", e.id},
                         {"valid", e.valid},
                         {"plausibility", to_string(e.plausibility)}});
    }
    return out;
  };
  return json{{"darapti", entries(r.darapti)},
              {"felapton", entries(r.felapton)},
              {"unextractable", r.unextractable},
              {"nonstandard_shape", r.nonstandard_shape}};
}

namespace {

// by_strategy is a map; preserve the config's strategy order when available.
std::vector<std::string> strategy_order(const CvResult& result) {
  std::vector<std::string> order;
  if (!result.folds.empty()) {
    for (const StrategyResult& s : result.folds.front().report.strategies) {
      order.push_back(s.strategy.name());
    }
  } else {
    for (const auto& [name, _] : result.by_strategy) order.push_back(name);
  }
  return order;
}

void append_row(std::string& out, const std::vector<std::string>& cells,
                const std::vector<std::size_t>& widths) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    out += cells[i];
    if (i + 1 < cells.size()) {
      out.append(widths[i] > cells[i].size() ? widths[i] - cells[i].size() + 2 : 2,
                 ' ');
    }
  }
  out += '\n';
}

std::string render_table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths;
  for (const auto& row : rows) {
    if (widths.size() < row.size()) widths.resize(row.size());
    for (std::size_t i = 0; i < row.size(); ++i) {
      widths[i] = std::max(widths[i], row[i].size());
    }
  }
  std::string out;
  for (const auto& row : rows) append_row(out, row, widths);
  return out;
}

std::string tsv(const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out += row[i];
      if (i + 1 < row.size()) out += '\t';
    }
    out += '\n';
  }
  return out;
}

std::vector<std::vector<std::string>> strategy_rows(const CvResult& result) {
  std::vector<std::vector<std::string>> rows{{"Strategy", "Acc", "CE", "Score"}};
  for (const std::string& name : strategy_order(result)) {
    const FoldAggregate& agg = result.by_strategy.at(name);
    rows.push_back({name, mean_std(agg.accuracy), mean_std(agg.content_effect),
                    mean_std(agg.combined_score)});
  }
  return rows;
}

std::vector<std::vector<std::string>> subgroup_rows(const CvResult& result) {
  std::vector<std::vector<std::string>> rows{{"Strategy", "VB", "VU", "IB", "IU"}};
  for (const std::string& name : strategy_order(result)) {
    const FoldAggregate& agg = result.by_strategy.at(name);
    std::vector<std::string> row{name};
    for (Subgroup g : kSubgroups) {
      auto it = agg.subgroup_accuracy.find(g);
      row.push_back(it == agg.subgroup_accuracy.end() ? "-" : mean_std(it->second));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::vector<std::string>> behavior_rows(const CvResult& result) {
  TiebreakerStats total{};
  int margin1 = 0;
  for (const CvFold& fold : result.folds) {
    const TiebreakerStats& tb = fold.report.tiebreaker;
    total.total += tb.total;
    total.splits += tb.splits;
    total.solver_available += tb.solver_available;
    total.overrides += tb.overrides;
    total.correct_flips += tb.correct_flips;
    total.wrong_flips += tb.wrong_flips;
    total.degenerate_premises += tb.degenerate_premises;
    total.extraction_failures += tb.extraction_failures;
    margin1 += fold.report.coalition.margin1_count;
  }
  return {{"Measure", "Count"},
          {"Evaluation instances", std::to_string(total.total)},
          {"Close splits (tiebreaker triggered)", std::to_string(total.splits)},
          {"Solver verdict available", std::to_string(total.solver_available)},
          {"Override decisions", std::to_string(total.overrides)},
          {"Correct flips", std::to_string(total.correct_flips)},
          {"Wrong flips", std::to_string(total.wrong_flips)},
          {"Degenerate premises", std::to_string(total.degenerate_premises)},
          {"Extraction failures", std::to_string(total.extraction_failures)},
          {"3-2 splits", std::to_string(margin1)}};
}

}  // namespace

std::string render_strategy_table(const CvResult& result) {
  return render_table(strategy_rows(result));
}

std::string render_subgroup_table(const CvResult& result) {
  return render_table(subgroup_rows(result));
}

std::string render_behavior_table(const CvResult& result) {
  return render_table(behavior_rows(result));
}

std::string strategy_table_tsv(const CvResult& result) {
  return tsv(strategy_rows(result));
}

std::string subgroup_table_tsv(const CvResult& result) {
  return tsv(subgroup_rows(result));
}

std::string behavior_table_tsv(const CvResult& result) {
  return tsv(behavior_rows(result));
}

std::string render_selection_table(const SelectionResult& result) {
  std::vector<std::vector<std::string>> rows{
      {"Rank", "Classifier", "Acc", "CE", "Score", "Selected"}};
  for (std::size_t i = 0; i < result.ranking.size(); ++i) {
    const SelectionRow& row = result.ranking[i];
    const bool selected = i < result.selected.size();
    rows.push_back({std::to_string(i + 1), row.config.id, fmt(row.metrics.accuracy),
                    fmt(row.metrics.content_effect), fmt(row.metrics.combined_score),
                    selected ? "yes" : ""});
  }
  return render_table(rows);
}

std::string render_import_scan(const ImportScanReport& report) {
  std::ostringstream out;
  auto describe = [&out](const char* label, const std::vector<ImportScanEntry>& list) {
    out << label << ": " << list.size() << " candidate(s)\n";
    for (const ImportScanEntry& e : list) {
      out << "  " << e.id << "  gold=" << (e.valid ? "valid" : "invalid")
          << "  plausibility=" << to_string(e.plausibility) << "\n";
    }
  };
  describe("Darapti (AAI-3)", report.darapti);
  describe("Felapton (EAO-3)", report.felapton);
  out << "unextractable: " << report.unextractable << "\n";
  out << "nonstandard shape: " << report.nonstandard_shape << "\n";
  return out.str();
}

}  // namespace syllo
