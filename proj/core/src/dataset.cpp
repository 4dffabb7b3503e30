#include "syllo/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <stdexcept>

#include "json.hpp"
#include "syllo/parser.hpp"

namespace syllo {

using nlohmann::json;

const char* to_string(Plausibility p) {
  return p == Plausibility::Believable ? "believable" : "unbelievable";
}

std::optional<Plausibility> plausibility_from(std::string_view name) {
  if (name == "believable") return Plausibility::Believable;
  if (name == "unbelievable") return Plausibility::Unbelievable;
  return std::nullopt;
}

namespace {

[[noreturn]] void line_error(const std::filesystem::path& path, std::size_t line,
                             const std::string& what) {
  throw std::runtime_error(path.string() + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

std::vector<DatasetInstance> load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open dataset file: " + path.string());
  }
  static const std::set<std::string> kKnown{"id", "text", "valid", "plausibility",
                                            "pair_id"};
  std::vector<DatasetInstance> out;
  std::set<std::string> seen_ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json rec = json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.is_object()) {
      line_error(path, lineno, "not a structured record");
    }
    for (const auto& [key, _] : rec.items()) {
      if (!kKnown.contains(key)) line_error(path, lineno, "unknown field: " + key);
    }
    for (const char* req : {"id", "text", "valid", "plausibility"}) {
      if (!rec.contains(req)) {
        line_error(path, lineno, std::string("missing field: ") + req);
      }
    }
    if (!rec["id"].is_string() || !rec["text"].is_string()) {
      line_error(path, lineno, "id and text must be strings");
    }
    if (!rec["valid"].is_boolean()) line_error(path, lineno, "valid must be a boolean");
    if (!rec["plausibility"].is_string()) {
      line_error(path, lineno, "plausibility must be a string");
    }

    DatasetInstance inst;
    inst.id = rec["id"].get<std::string>();
    inst.text = rec["text"].get<std::string>();
    inst.valid = rec["valid"].get<bool>();
    auto p = plausibility_from(rec["plausibility"].get<std::string>());
    if (!p) {
      line_error(path, lineno,
                 "plausibility must be believable|unbelievable, got: " +
                     rec["plausibility"].get<std::string>());
    }
    inst.plausibility = *p;
    if (rec.contains("pair_id")) {
      if (!rec["pair_id"].is_string()) {
        line_error(path, lineno, "pair_id must be a string");
      }
      inst.pair_id = rec["pair_id"].get<std::string>();
    }
    if (!seen_ids.insert(inst.id).second) {
      line_error(path, lineno, "duplicate id: " + inst.id);
    }
    out.push_back(std::move(inst));
  }
  return out;
}

void save_dataset(const std::filesystem::path& path,
                  std::span<const DatasetInstance> instances) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write dataset file: " + path.string());
  }
  for (const DatasetInstance& inst : instances) {
    json rec{{"id", inst.id},
             {"text", inst.text},
             {"valid", inst.valid},
             {"plausibility", to_string(inst.plausibility)}};
    if (inst.pair_id) rec["pair_id"] = *inst.pair_id;
    out << rec.dump() << '\n';
  }
}

const Lexicon& builtin_lexicon() {
  static const Lexicon lex{
      {
          {"roses", "flowers", "plants"},
          {"dogs", "mammals", "animals"},
          {"sparrows", "birds", "creatures"},
          {"oaks", "trees", "organisms"},
          {"carrots", "vegetables", "foods"},
          {"hammers", "tools", "objects"},
          {"sedans", "cars", "vehicles"},
          {"novels", "books", "publications"},
      },
      {
          {"humans", "things made of glass", "indestructible things"},
          {"stones", "philosophers", "dancers"},
          {"clouds", "rocks", "edible things"},
          {"whales", "insects", "musicians"},
          {"planets", "lawyers", "umbrellas"},
          {"mountains", "fish", "accountants"},
          {"teapots", "senators", "glaciers"},
          {"mirrors", "penguins", "waterfalls"},
      },
  };
  return lex;
}

namespace {

std::string capitalize(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

std::string render_clause(const Proposition& p, bool alt_affirmative) {
  switch (p.type) {
    case PropositionType::A:
      if (alt_affirmative) {
        return "all " + p.subject + " belong to the class of " + p.predicate;
      }
      return "all " + p.subject + " are " + p.predicate;
    case PropositionType::E:
      return "no " + p.subject + " are " + p.predicate;
    case PropositionType::I:
      return "some " + p.subject + " are " + p.predicate;
    case PropositionType::O:
      return "some " + p.subject + " are not " + p.predicate;
  }
  return "";
}

}  // namespace

std::string render_text(const SyllogismStructure& surface_structure,
                        std::uint64_t template_choice) {
  static constexpr const char* kMarkers[3] = {"Therefore,", "Hence,", "Thus,"};
  const bool alt1 = template_choice & 1;
  const bool alt2 = template_choice & 2;
  const bool alt3 = template_choice & 4;
  const char* marker = kMarkers[(template_choice >> 3) % 3];

  std::string text = capitalize(render_clause(surface_structure.premise1, alt1)) + ". ";
  text += capitalize(render_clause(surface_structure.premise2, alt2)) + ". ";
  text += std::string(marker) + " " +
          render_clause(surface_structure.conclusion, alt3) + ".";
  return text;
}

SyllogismStructure reference_structure(const SyllogisticForm& form,
                                       const LexiconTriple& triple) {
  return instantiate_form(form, normalize_term(triple.minor),
                          normalize_term(triple.major),
                          normalize_term(triple.middle));
}

std::vector<DatasetInstance> generate_synthetic(const Lexicon& lexicon,
                                                const SyntheticSpec& spec) {
  if (lexicon.believable.empty() || lexicon.unbelievable.empty()) {
    throw std::invalid_argument("lexicon needs believable and unbelievable triples");
  }
  if (spec.pair_count < 1) {
    throw std::invalid_argument("pair_count must be positive");
  }

  std::vector<SyllogisticForm> valid_pool;
  std::vector<SyllogisticForm> invalid_pool;
  for (const FormVerdict& fv : enumerate_forms(spec.mode)) {
    if (fv.verdict == Verdict::Valid) valid_pool.push_back(fv.form);
    if (fv.verdict == Verdict::Invalid) invalid_pool.push_back(fv.form);
  }

  std::mt19937_64 rng(spec.seed);
  std::shuffle(valid_pool.begin(), valid_pool.end(), rng);
  std::shuffle(invalid_pool.begin(), invalid_pool.end(), rng);

  std::vector<DatasetInstance> out;
  out.reserve(static_cast<std::size_t>(spec.pair_count) * 2);
  for (int i = 0; i < spec.pair_count; ++i) {
    const bool want_valid = i % 2 == 0;
    const auto& pool = want_valid ? valid_pool : invalid_pool;
    const SyllogisticForm form = pool[static_cast<std::size_t>(i / 2) % pool.size()];
    const std::uint64_t template_choice = rng();

    char pair_id[32];
    std::snprintf(pair_id, sizeof pair_id, "pair-%04d", i);

    const struct {
      const LexiconTriple& triple;
      Plausibility tag;
      const char* suffix;
    } twins[2] = {
        {lexicon.believable[static_cast<std::size_t>(i) % lexicon.believable.size()],
         Plausibility::Believable, "b"},
        {lexicon.unbelievable[static_cast<std::size_t>(i) % lexicon.unbelievable.size()],
         Plausibility::Unbelievable, "u"},
    };
    for (const auto& twin : twins) {
      SyllogismStructure surface =
          instantiate_form(form, twin.triple.minor, twin.triple.major, twin.triple.middle);
      DatasetInstance inst;
      char id[32];
      std::snprintf(id, sizeof id, "syn-%04d-%s", i, twin.suffix);
      inst.id = id;
      inst.text = render_text(surface, template_choice);
      inst.valid = want_valid;
      inst.plausibility = twin.tag;
      inst.pair_id = pair_id;
      out.push_back(std::move(inst));
    }
  }
  return out;
}

}  // namespace syllo
