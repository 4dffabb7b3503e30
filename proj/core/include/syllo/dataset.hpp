#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "syllo/logic.hpp"

namespace syllo {

enum class Plausibility : std::uint8_t { Believable, Unbelievable };

const char* to_string(Plausibility p);
std::optional<Plausibility> plausibility_from(std::string_view name);

struct DatasetInstance {
  std::string id;
  std::string text;
  bool valid = false;
  Plausibility plausibility = Plausibility::Believable;
  std::optional<std::string> pair_id;

  bool operator==(const DatasetInstance&) const = default;
};

// Line-delimited records, one object per line with fields
// id/text/valid/plausibility and optional pair_id. Validation is strict:
// missing or mistyped fields, unknown fields, and duplicate ids all raise
// std::runtime_error naming the offending line.
std::vector<DatasetInstance> load_dataset(const std::filesystem::path& path);
void save_dataset(const std::filesystem::path& path,
                  std::span<const DatasetInstance> instances);

// Ordered minor/middle/major surface terms (plural noun phrases).
struct LexiconTriple {
  std::string minor;
  std::string middle;
  std::string major;
};

struct Lexicon {
  std::vector<LexiconTriple> believable;
  std::vector<LexiconTriple> unbelievable;
};

// Small built-in lexicon so the whole pipeline runs offline.
const Lexicon& builtin_lexicon();

struct SyntheticSpec {
  SemanticsMode mode = SemanticsMode::SubjectImport;
  std::uint64_t seed = 0;
  int pair_count = 480;  // believable/unbelievable twins; 2x instances

  bool operator==(const SyntheticSpec&) const = default;
};

// Balanced synthetic corpus. Forms are drawn alternately from the valid and
// invalid pools of enumerate_forms(mode) (both pools seeded-shuffled and
// cycled); each drawn form is rendered twice, once with a believable term
// triple and once with an unbelievable one, the twins sharing a pair_id and
// the oracle gold label. Every rendered text round-trips through
// parse_syllogism to its generating structure.
std::vector<DatasetInstance> generate_synthetic(const Lexicon& lexicon,
                                                const SyntheticSpec& spec);

// The structure a synthetic instance was generated from (terms normalized,
// first-appearance order). Exposed so tests can assert the round-trip.
SyllogismStructure reference_structure(const SyllogisticForm& form,
                                       const LexiconTriple& triple);

// English rendering of a structure using the generator's sentence templates.
// template_choice selects among equivalent surface variants deterministically.
std::string render_text(const SyllogismStructure& surface_structure,
                        std::uint64_t template_choice);

}  // namespace syllo
