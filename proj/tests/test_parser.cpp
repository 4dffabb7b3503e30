#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <string>
#include <variant>

#include "doctest.h"
#include "json.hpp"
#include "syllo/extraction.hpp"
#include "syllo/logic.hpp"
#include "syllo/parser.hpp"

using namespace syllo;
using nlohmann::json;

namespace {

SyllogismStructure parse_ok(const std::string& text) {
  ParseResult r = parse_syllogism(text);
  REQUIRE_MESSAGE(r.ok(), "text failed to parse: " << text);
  return *r.structure;
}

ParseFailure parse_fail(const std::string& text) {
  ParseResult r = parse_syllogism(text);
  REQUIRE_MESSAGE(!r.ok(), "text parsed unexpectedly: " << text);
  return *r.failure;
}

Proposition prop(char type, const char* subject, const char* predicate) {
  return Proposition{*proposition_type_from(type), subject, predicate};
}

}  // namespace

TEST_CASE("term normalization") {
  CHECK(normalize_term("Roses") == "rose");
  CHECK(normalize_term("the roses") == "rose");
  CHECK(normalize_term("a flower") == "flower");
  CHECK(normalize_term("an oak") == "oak");
  CHECK(normalize_term("ladies") == "lady");
  CHECK(normalize_term("boxes") == "box");
  CHECK(normalize_term("churches") == "church");
  CHECK(normalize_term("glasses") == "glass");
  CHECK(normalize_term("glass") == "glass");       // ss endings stay
  CHECK(normalize_term("cactus") == "cactus");     // us endings stay
  CHECK(normalize_term("thesis") == "thesis");     // is endings stay
  CHECK(normalize_term("things made of glass") == "made of glass");
  CHECK(normalize_term("single thing made of glass") == "made of glass");
  CHECK(normalize_term("things that are red") == "red");
  CHECK(normalize_term("people who are dancers") == "people who are dancer");
  CHECK(normalize_term("dogs.") == "dog");
  CHECK(normalize_term("  DOGS  ") == "dog");
}

TEST_CASE("conclusion marker selection") {
  const char* texts[] = {
      "All dogs are mammals. All mammals are animals. Therefore, all dogs are animals.",
      "All dogs are mammals. All mammals are animals. Hence, all dogs are animals.",
      "All dogs are mammals. All mammals are animals. Thus, all dogs are animals.",
      "All dogs are mammals. All mammals are animals. Consequently, all dogs are animals.",
      "All dogs are mammals. All mammals are animals. So, all dogs are animals.",
  };
  for (const char* text : texts) {
    const SyllogismStructure s = parse_ok(text);
    CHECK(s.conclusion == prop('A', "dog", "animal"));
  }
}

TEST_CASE("marker match requires word boundaries") {
  // "Some" contains "so" and "sour" starts with it; neither is a marker.
  CHECK(parse_fail("Some apples are sour. All sour things are fruits.") ==
        ParseFailure::NoConclusionMarker);
  // Lowercase marker mid-text still counts.
  const SyllogismStructure s = parse_ok(
      "Some apples are fruits. All fruits are plants. so some apples are plants.");
  CHECK(s.conclusion == prop('I', "apple", "plant"));
}

TEST_CASE("quantifier frames") {
  auto clause = [](const std::string& text) {
    auto r = classify_proposition(text);
    REQUIRE_MESSAGE(std::holds_alternative<Proposition>(r),
                    "clause failed: " << text);
    return std::get<Proposition>(r);
  };

  CHECK(clause("all dogs are mammals") == prop('A', "dog", "mammal"));
  CHECK(clause("every dog is a mammal") == prop('A', "dog", "mammal"));
  CHECK(clause("each dog is a mammal") == prop('A', "dog", "mammal"));
  CHECK(clause("any dog is a mammal") == prop('A', "dog", "mammal"));
  CHECK(clause("anything that is a rose is a flower") == prop('A', "rose", "flower"));
  CHECK(clause("there are no humans that are not made of glass") ==
        prop('A', "human", "made of glass"));

  CHECK(clause("no dogs are cats") == prop('E', "dog", "cat"));
  CHECK(clause("none of the dogs are cats") == prop('E', "dog", "cat"));
  CHECK(clause("there are no fish that are mammals") == prop('E', "fish", "mammal"));
  CHECK(clause("under no circumstances is a flower a tree") ==
        prop('E', "flower", "tree"));

  CHECK(clause("some dogs are pets") == prop('I', "dog", "pet"));
  CHECK(clause("at least one dog is a pet") == prop('I', "dog", "pet"));

  CHECK(clause("some dogs are not pets") == prop('O', "dog", "pet"));
  CHECK(clause("some fish do not belong to the class of mammals") ==
        prop('O', "fish", "mammal"));
}

TEST_CASE("class-of copula keeps the full term") {
  const SyllogismStructure s = parse_ok(
      "Some fish are penguins. All penguins belong to the class of birds. "
      "Therefore, some birds are fish.");
  CHECK(s.premise1 == prop('I', "fish", "penguin"));
  CHECK(s.premise2 == prop('A', "penguin", "bird"));
  CHECK(s.conclusion == prop('I', "bird", "fish"));
}

TEST_CASE("negated universal frame is rejected rather than misread") {
  auto r = classify_proposition("all dogs are not cats");
  REQUIRE(std::holds_alternative<ParseFailure>(r));
  CHECK(std::get<ParseFailure>(r) == ParseFailure::UnrecognizedQuantifier);

  CHECK(parse_fail("All dogs are not cats. All cats are animals. "
                   "Therefore, some dogs are not animals.") ==
        ParseFailure::UnrecognizedQuantifier);
}

TEST_CASE("unknown frame fails as unrecognized quantifier") {
  auto r = classify_proposition("most dogs are friendly");
  REQUIRE(std::holds_alternative<ParseFailure>(r));
  CHECK(std::get<ParseFailure>(r) == ParseFailure::UnrecognizedQuantifier);
}

TEST_CASE("sentence count is enforced") {
  CHECK(parse_fail("All dogs are mammals. Therefore, all dogs are mammals.") ==
        ParseFailure::SentenceCount);
  CHECK(parse_fail("All a are b. All b are c. All c are d. "
                   "Therefore, all a are d.") == ParseFailure::SentenceCount);
  CHECK(parse_fail("All dogs are mammals. All mammals are animals. "
                   "Therefore, all dogs are animals. And that is that.") ==
        ParseFailure::SentenceCount);
}

TEST_CASE("three-term unification is enforced") {
  CHECK(parse_fail("All dogs are mammals. All birds are reptiles. "
                   "Therefore, all dogs are reptiles.") == ParseFailure::TermMismatch);
  // Inflection differences unify: "dogs" and "dog" are one term.
  const SyllogismStructure s = parse_ok(
      "All dogs are mammals. Every dog is a pet. Therefore, some pets are mammals.");
  CHECK(s.terms[0] == "dog");
}

TEST_CASE("figure one regression: double negative reads as A") {
  const SyllogismStructure s = parse_ok(
      "There are no humans that are not made of glass. "
      "Every single thing made of glass is indestructible. "
      "Therefore, some indestructible things are humans.");
  CHECK(s.premise1 == prop('A', "human", "made of glass"));
  CHECK(s.premise2 == prop('A', "made of glass", "indestructible"));
  CHECK(s.conclusion == prop('I', "indestructible", "human"));
  const auto form = identify_form(s);
  REQUIRE(form.has_value());
  CHECK(form->name() == "AAI-4");
}

TEST_CASE("figure one regression: non-standard quantifier reads as E") {
  const SyllogismStructure s = parse_ok(
      "Anything that is a rose is a flower. "
      "Under no circumstances is a flower a tree. "
      "Therefore, some trees are not roses.");
  CHECK(s.premise1 == prop('A', "rose", "flower"));
  CHECK(s.premise2 == prop('E', "flower", "tree"));
  CHECK(s.conclusion == prop('O', "tree", "rose"));
  const auto form = identify_form(s);
  REQUIRE(form.has_value());
  CHECK(form->name() == "AEO-4");
}

TEST_CASE("parse failures carry kebab-case names") {
  CHECK(std::string(to_string(ParseFailure::NoConclusionMarker)) ==
        "no-conclusion-marker");
  CHECK(std::string(to_string(ParseFailure::UnrecognizedQuantifier)) ==
        "unrecognized-quantifier");
  CHECK(std::string(to_string(ParseFailure::TermMismatch)) == "term-mismatch");
  CHECK(std::string(to_string(ParseFailure::SentenceCount)) == "sentence-count");
}

TEST_CASE("rule-based extractor wraps the parser") {
  RuleBasedExtractor ex;
  CHECK(ex.id() == "rule-based");
  auto ok = ex.extract(
      "All dogs are mammals. All mammals are animals. Therefore, all dogs are animals.");
  REQUIRE(std::holds_alternative<SyllogismStructure>(ok));
  CHECK(std::get<SyllogismStructure>(ok).conclusion == prop('A', "dog", "animal"));

  auto bad = ex.extract("No marker in sight here.");
  REQUIRE(std::holds_alternative<std::string>(bad));
  CHECK(std::get<std::string>(bad).find("no-conclusion-marker") != std::string::npos);
}

TEST_CASE("extraction chain reports the extractor that succeeded") {
  ExtractorConfig cfg;
  ExtractorChain chain(cfg);
  const auto outcome = chain.extract(
      "All dogs are mammals. All mammals are animals. Therefore, all dogs are animals.");
  REQUIRE(outcome.ok());
  CHECK(outcome.extractor_used == "rule-based");
  CHECK(outcome.attempts == 1);

  const auto failed = chain.extract("gibberish");
  CHECK(!failed.ok());
  CHECK(failed.extractor_used.empty());
  CHECK(!failed.error.empty());
}

TEST_CASE("structure records validate strictly") {
  const json good = {
      {"terms", {"dog", "mammal", "animal"}},
      {"premise1", {{"type", "A"}, {"subject", "dogs"}, {"predicate", "mammals"}}},
      {"premise2", {{"type", "A"}, {"subject", "mammals"}, {"predicate", "animals"}}},
      {"conclusion", {{"type", "A"}, {"subject", "dogs"}, {"predicate", "animals"}}},
  };
  const SyllogismStructure s = validate_structure(good);
  // Terms inside propositions normalize onto the listed terms.
  CHECK(s.premise1 == prop('A', "dog", "mammal"));

  json bad_type = good;
  bad_type["premise1"]["type"] = "Q";
  CHECK_THROWS_WITH_AS(validate_structure(bad_type),
                       doctest::Contains("malformed:"), std::runtime_error);

  json two_terms = good;
  two_terms["terms"] = {"dog", "mammal"};
  CHECK_THROWS_WITH_AS(validate_structure(two_terms),
                       doctest::Contains("malformed:"), std::runtime_error);

  json stray = good;
  stray["conclusion"]["subject"] = "cats";
  CHECK_THROWS_WITH_AS(validate_structure(stray),
                       doctest::Contains("term-mismatch:"), std::runtime_error);

  json not_object = json::array();
  CHECK_THROWS_WITH_AS(validate_structure(not_object),
                       doctest::Contains("malformed:"), std::runtime_error);
}

TEST_CASE("extraction prompt embeds the text and schema stays an object") {
  const std::string prompt = render_extraction_prompt("All cats are cats.");
  CHECK(prompt.find("All cats are cats.") != std::string::npos);
  const json schema = extraction_record_schema();
  REQUIRE(schema.is_object());
  CHECK(schema.contains("properties"));
}
