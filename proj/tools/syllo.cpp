// Command-line front end: every pipeline stage is reachable as a subcommand
// so runs can be scripted and inspected piecewise.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "syllo/dataset.hpp"
#include "syllo/extraction.hpp"
#include "syllo/logic.hpp"
#include "syllo/parser.hpp"
#include "syllo/pipeline.hpp"
#include "syllo/reporting.hpp"
#include "syllo/run_config.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  out << content;
}

syllo::SemanticsMode parse_mode(const std::string& name) {
  const auto mode = syllo::semantics_mode_from(name);
  if (!mode) {
    throw std::runtime_error(
        "unknown semantics mode: " + name +
        " (expected boolean|subject-import|all-terms-nonempty)");
  }
  return *mode;
}

json structure_to_json(const syllo::SyllogismStructure& s) {
  auto prop = [](const syllo::Proposition& p) {
    return json{{"type", std::string(1, syllo::to_char(p.type))},
                {"subject", p.subject},
                {"predicate", p.predicate}};
  };
  return json{{"terms", {s.terms[0], s.terms[1], s.terms[2]}},
              {"premise1", prop(s.premise1)},
              {"premise2", prop(s.premise2)},
              {"conclusion", prop(s.conclusion)}};
}

// Accepts --text, --file, or --structure (a record file in the extraction
// JSON shape) and returns the structure.
struct StructureInput {
  std::string text;
  std::string file;
  std::string structure_file;

  void attach(CLI::App* cmd, bool required = true) {
    auto* text_opt = cmd->add_option("--text", text, "Syllogism text");
    auto* file_opt =
        cmd->add_option("--file", file, "File containing the syllogism text");
    auto* record_opt = cmd->add_option("--structure", structure_file,
                                       "File holding a structure record");
    if (required) {
      text_opt->excludes(file_opt)->excludes(record_opt);
      file_opt->excludes(record_opt);
    }
  }

  syllo::SyllogismStructure resolve() const {
    if (!structure_file.empty()) {
      json record = json::parse(read_file(structure_file), nullptr, false);
      if (record.is_discarded()) {
        throw std::runtime_error("structure file is not valid structured text");
      }
      return syllo::validate_structure(record);
    }
    const std::string source = !text.empty() ? text : read_file(file);
    if (source.empty()) {
      throw std::runtime_error("provide --text, --file, or --structure");
    }
    syllo::ParseResult r = syllo::parse_syllogism(source);
    if (!r.ok()) {
      throw std::runtime_error(std::string("parse failure: ") +
                               syllo::to_string(*r.failure));
    }
    return *r.structure;
  }
};

syllo::RunConfig resolve_config(const std::string& config_path, bool default_sim,
                                std::uint64_t seed, const std::string& out_dir) {
  syllo::RunConfig cfg;
  if (!config_path.empty()) {
    cfg = syllo::load_run_config(config_path);
  } else if (default_sim) {
    cfg = syllo::default_simulated_config(seed);
  } else {
    throw std::runtime_error("provide --config or --default-sim");
  }
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  cfg.validate();
  return cfg;
}

void write_cv_artifacts(const fs::path& dir, const syllo::RunConfig& cfg,
                        const syllo::CvResult& result) {
  fs::create_directories(dir);
  syllo::save_run_config(dir / "resolved_config.json", cfg);
  write_file(dir / "cv_result.json", syllo::to_json(result).dump(2) + "\n");
  std::string tables = "Strategy comparison (mean +- std across folds)\n";
  tables += syllo::render_strategy_table(result);
  tables += "\nSubgroup accuracy\n";
  tables += syllo::render_subgroup_table(result);
  tables += "\nTiebreaker behavior (counts over all folds)\n";
  tables += syllo::render_behavior_table(result);
  write_file(dir / "tables.txt", tables);
  write_file(dir / "strategy_table.tsv", syllo::strategy_table_tsv(result));
  write_file(dir / "subgroup_table.tsv", syllo::subgroup_table_tsv(result));
  write_file(dir / "behavior_table.tsv", syllo::behavior_table_tsv(result));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Syllogism validity pipeline: exact solver, rule-based parser, "
               "classifier ensemble, fusion strategies, and evaluation harness"};
  app.require_subcommand(1);

  // solve
  auto* solve = app.add_subcommand("solve", "Decide validity of one syllogism");
  StructureInput solve_input;
  solve_input.attach(solve);
  std::string solve_mode = "subject-import";
  bool solve_all_modes = false;
  solve->add_option("--mode", solve_mode, "Semantics mode")->capture_default_str();
  solve->add_flag("--all-modes", solve_all_modes, "Print verdicts for all modes");
  solve->callback([&] {
    const syllo::SyllogismStructure s = solve_input.resolve();
    if (solve_all_modes) {
      for (auto mode : {syllo::SemanticsMode::Boolean, syllo::SemanticsMode::SubjectImport,
                        syllo::SemanticsMode::AllTermsNonempty}) {
        std::cout << syllo::to_string(mode) << ": "
                  << syllo::to_string(syllo::decide_validity(s, mode)) << "\n";
      }
      return;
    }
    std::cout << syllo::to_string(syllo::decide_validity(s, parse_mode(solve_mode)))
              << "\n";
  });

  // parse
  auto* parse = app.add_subcommand("parse", "Parse text into a structure record");
  std::string parse_text, parse_file;
  parse->add_option("--text", parse_text, "Syllogism text");
  parse->add_option("--file", parse_file, "File containing the syllogism text");
  parse->callback([&] {
    const std::string source = !parse_text.empty() ? parse_text : read_file(parse_file);
    if (source.empty()) throw std::runtime_error("provide --text or --file");
    syllo::ParseResult r = syllo::parse_syllogism(source);
    if (!r.ok()) {
      throw std::runtime_error(std::string("parse failure: ") +
                               syllo::to_string(*r.failure));
    }
    std::cout << structure_to_json(*r.structure).dump(2) << "\n";
  });

  // emit-smt
  auto* emit = app.add_subcommand("emit-smt", "Emit an SMT-LIB script");
  StructureInput emit_input;
  emit_input.attach(emit);
  std::string emit_mode = "subject-import";
  std::string emit_check = "entailment";
  std::string emit_out;
  emit->add_option("--mode", emit_mode, "Semantics mode")->capture_default_str();
  emit->add_option("--check", emit_check, "consistency|entailment")
      ->capture_default_str();
  emit->add_option("-o,--out", emit_out, "Output path (stdout when omitted)");
  emit->callback([&] {
    const syllo::SyllogismStructure s = emit_input.resolve();
    syllo::SmtCheck check;
    if (emit_check == "consistency") {
      check = syllo::SmtCheck::PremiseConsistency;
    } else if (emit_check == "entailment") {
      check = syllo::SmtCheck::Entailment;
    } else {
      throw std::runtime_error("unknown check: " + emit_check);
    }
    const std::string script = syllo::emit_smtlib(s, parse_mode(emit_mode), check);
    if (emit_out.empty()) {
      std::cout << script;
    } else {
      write_file(emit_out, script);
    }
  });

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a synthetic corpus");
  std::string gen_out = "corpus.jsonl";
  std::string gen_mode = "subject-import";
  std::uint64_t gen_seed = 0;
  int gen_pairs = 480;
  gen->add_option("-o,--out", gen_out, "Output dataset path")->capture_default_str();
  gen->add_option("--mode", gen_mode, "Semantics mode for gold labels")
      ->capture_default_str();
  gen->add_option("--seed", gen_seed, "Generator seed")->capture_default_str();
  gen->add_option("--pairs", gen_pairs, "Believable/unbelievable pair count")
      ->capture_default_str();
  gen->callback([&] {
    syllo::SyntheticSpec spec{parse_mode(gen_mode), gen_seed, gen_pairs};
    const auto instances = syllo::generate_synthetic(syllo::builtin_lexicon(), spec);
    syllo::save_dataset(gen_out, instances);
    std::cout << "wrote " << instances.size() << " instances to " << gen_out << "\n";
  });

  // scan-import
  auto* scan = app.add_subcommand(
      "scan-import", "Report import-sensitive forms (AAI-3, EAO-3) in a dataset");
  std::string scan_dataset;
  std::string scan_json_out;
  scan->add_option("--dataset", scan_dataset, "Dataset path")->required();
  scan->add_option("--json-out", scan_json_out, "Also write the report as JSON");
  scan->callback([&] {
    const auto instances = syllo::load_dataset(scan_dataset);
    syllo::ExtractorChain chain{syllo::ExtractorConfig{}};
    const auto report = syllo::scan_import_forms(instances, chain);
    std::cout << syllo::render_import_scan(report);
    if (!scan_json_out.empty()) {
      write_file(scan_json_out, syllo::to_json(report).dump(2) + "\n");
    }
  });

  // eval
  auto* eval = app.add_subcommand(
      "eval", "Single-split evaluation (fold 0 of the configured plan)");
  std::string eval_config, eval_out;
  bool eval_default_sim = false;
  std::uint64_t eval_seed = 0;
  eval->add_option("--config", eval_config, "Run config file");
  eval->add_flag("--default-sim", eval_default_sim,
                 "Use the built-in simulated-classifier config");
  eval->add_option("--seed", eval_seed, "Seed for --default-sim")
      ->capture_default_str();
  eval->add_option("--out", eval_out, "Output directory (overrides config)");
  eval->callback([&] {
    const syllo::RunConfig cfg =
        resolve_config(eval_config, eval_default_sim, eval_seed, eval_out);
    syllo::Pipeline pipeline(cfg);
    const auto dataset = pipeline.load_instances();
    const auto plan = syllo::plan_folds(dataset, cfg.folds, cfg.inner, cfg.seed,
                                        cfg.stratified);
    const auto& fold = plan.folds.front();
    const auto inner = syllo::select_instances(dataset, fold.inner_ids);
    const auto selection = pipeline.select_configs(inner);
    const auto evaluation = syllo::select_instances(dataset, fold.evaluation_ids);
    const auto report = pipeline.run(evaluation, selection.selected);

    const fs::path dir(cfg.output_dir);
    fs::create_directories(dir);
    syllo::save_run_config(dir / "resolved_config.json", cfg);
    write_file(dir / "selection.json", syllo::to_json(selection).dump(2) + "\n");
    write_file(dir / "run_report.json", syllo::to_json(report).dump(2) + "\n");
    std::cout << syllo::render_selection_table(selection) << "\n";
    for (const syllo::StrategyResult& s : report.strategies) {
      std::cout << s.strategy.name() << ": acc=" << s.metrics.accuracy
                << " ce=" << s.metrics.content_effect
                << " score=" << s.metrics.combined_score << "\n";
    }
  });

  // cv
  auto* cv = app.add_subcommand("cv", "Nested cross-validation");
  std::string cv_config, cv_out;
  bool cv_default_sim = false;
  std::uint64_t cv_seed = 0;
  cv->add_option("--config", cv_config, "Run config file");
  cv->add_flag("--default-sim", cv_default_sim,
               "Use the built-in simulated-classifier config");
  cv->add_option("--seed", cv_seed, "Seed for --default-sim")->capture_default_str();
  cv->add_option("--out", cv_out, "Output directory (overrides config)");
  cv->callback([&] {
    const syllo::RunConfig cfg =
        resolve_config(cv_config, cv_default_sim, cv_seed, cv_out);
    syllo::Pipeline pipeline(cfg);
    const auto dataset = pipeline.load_instances();
    const auto result = pipeline.cross_validate(dataset);
    write_cv_artifacts(cfg.output_dir, cfg, result);
    std::cout << "Strategy comparison (mean +- std across folds)\n"
              << syllo::render_strategy_table(result) << "\n"
              << "artifacts written to " << cfg.output_dir << "\n";
  });

  // report
  auto* report_cmd =
      app.add_subcommand("report", "Render tables from a cv_result.json artifact");
  std::string report_in;
  report_cmd->add_option("--in", report_in, "Path to cv_result.json")->required();
  report_cmd->callback([&] {
    json j = json::parse(read_file(report_in), nullptr, false);
    if (j.is_discarded()) {
      throw std::runtime_error("report artifact is not valid structured text");
    }
    const syllo::CvResult result = syllo::cv_result_from_json(j);
    std::cout << "Strategy comparison (mean +- std across folds)\n"
              << syllo::render_strategy_table(result) << "\n"
              << "Subgroup accuracy\n"
              << syllo::render_subgroup_table(result) << "\n"
              << "Tiebreaker behavior (counts over all folds)\n"
              << syllo::render_behavior_table(result);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
