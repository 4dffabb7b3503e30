#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "syllo/backend.hpp"
#include "syllo/logic.hpp"
#include "syllo/parser.hpp"

namespace syllo {

struct ExtractorConfig {
  // Extractor ids in fallback order: "rule-based" or a remote model id.
  std::vector<std::string> chain{"rule-based"};
  int attempts_per_extractor = 1;

  bool operator==(const ExtractorConfig&) const = default;
};

struct ExtractionOutcome {
  std::optional<SyllogismStructure> structure;
  std::string extractor_used;  // empty when every extractor failed
  int attempts = 0;            // total attempts across the chain
  std::string error;           // last failure description

  bool ok() const { return structure.has_value(); }
};

class Extractor {
 public:
  virtual ~Extractor() = default;
  virtual const std::string& id() const = 0;
  // Returns a structure or a failure description.
  virtual std::variant<SyllogismStructure, std::string> extract(
      const std::string& text) = 0;
};

class RuleBasedExtractor final : public Extractor {
 public:
  const std::string& id() const override;
  std::variant<SyllogismStructure, std::string> extract(
      const std::string& text) override;
};

// Checks a structured record against the expected shape: "terms" holding
// exactly three strings plus premise1/premise2/conclusion objects with
// type/subject/predicate. Terms are normalized with the parser's rules and
// each proposition's terms must resolve to a listed term. Throws
// std::runtime_error whose message starts with "malformed:" for shape
// violations and "term-mismatch:" for resolution failures.
SyllogismStructure validate_structure(const nlohmann::json& record);

// JSON schema enforcing the extraction record shape, sent with remote
// extraction requests as the response schema.
nlohmann::json extraction_record_schema();

// The structure-extraction prompt with the text substituted in.
std::string render_extraction_prompt(std::string_view syllogism_text);

class RemoteExtractor final : public Extractor {
 public:
  RemoteExtractor(Backend& backend, std::string model_id, double temperature = 0.0);

  const std::string& id() const override;
  std::variant<SyllogismStructure, std::string> extract(
      const std::string& text) override;

 private:
  Backend* backend_;
  std::string model_id_;
  double temperature_;
};

class ExtractorChain {
 public:
  // Builds the chain from config ids; any id other than "rule-based" becomes
  // a remote extractor and requires a backend.
  ExtractorChain(const ExtractorConfig& cfg, Backend* backend = nullptr);

  // Takes ownership of pre-built extractors (for tests and custom chains).
  ExtractorChain(std::vector<std::unique_ptr<Extractor>> extractors,
                 int attempts_per_extractor = 1);

  ExtractionOutcome extract(const std::string& text) const;

  std::size_t size() const { return extractors_.size(); }

 private:
  std::vector<std::unique_ptr<Extractor>> extractors_;
  int attempts_per_extractor_ = 1;
};

}  // namespace syllo
