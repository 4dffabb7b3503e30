#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "syllo/logic.hpp"

namespace syllo {

enum class ParseFailure : std::uint8_t {
  NoConclusionMarker,
  UnrecognizedQuantifier,
  TermMismatch,
  SentenceCount,
};

const char* to_string(ParseFailure f);

struct ParseResult {
  std::optional<SyllogismStructure> structure;
  std::optional<ParseFailure> failure;

  bool ok() const { return structure.has_value(); }
};

// Canonical term id: lowercased, articles and filler words stripped, trailing
// punctuation removed, final token singularized by suffix rules.
TermId normalize_term(std::string_view raw);

struct SentenceSplit {
  std::string premise1;
  std::string premise2;
  std::string conclusion;
};

// Locates the first conclusion marker (therefore/hence/thus/consequently/so,
// whole-word, earliest position) and splits the remaining text into exactly
// two premise sentences.
std::variant<SentenceSplit, ParseFailure> split_and_find_conclusion(std::string_view text);

// Maps one clause to a typed proposition via the closed frame inventory.
// Terms come back already normalized.
std::variant<Proposition, ParseFailure> classify_proposition(std::string_view clause);

// Full text -> structure. Terms across the three propositions must unify to
// exactly three canonical ids (first-appearance order).
ParseResult parse_syllogism(std::string_view text);

}  // namespace syllo
