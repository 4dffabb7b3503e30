#include "syllo/extraction.hpp"

#include <algorithm>
#include <stdexcept>

namespace syllo {

using nlohmann::json;

const std::string& RuleBasedExtractor::id() const {
  static const std::string kId = "rule-based";
  return kId;
}

std::variant<SyllogismStructure, std::string> RuleBasedExtractor::extract(
    const std::string& text) {
  ParseResult r = parse_syllogism(text);
  if (r.ok()) return *r.structure;
  return std::string(to_string(*r.failure));
}

namespace {

[[noreturn]] void malformed(const std::string& what) {
  throw std::runtime_error("malformed: " + what);
}

[[noreturn]] void term_mismatch(const std::string& what) {
  throw std::runtime_error("term-mismatch: " + what);
}

Proposition read_proposition(const json& rec, const char* key,
                             const std::array<TermId, 3>& terms) {
  if (!rec.contains(key) || !rec[key].is_object()) {
    malformed(std::string(key) + " must be an object");
  }
  const json& p = rec[key];
  for (const char* field : {"type", "subject", "predicate"}) {
    if (!p.contains(field) || !p[field].is_string()) {
      malformed(std::string(key) + "." + field + " must be a string");
    }
  }
  const std::string type_str = p["type"].get<std::string>();
  if (type_str.size() != 1) malformed(std::string(key) + ".type must be one letter");
  const auto type = proposition_type_from(type_str[0]);
  if (!type) malformed(std::string(key) + ".type must be A, E, I, or O");

  Proposition out;
  out.type = *type;
  out.subject = normalize_term(p["subject"].get<std::string>());
  out.predicate = normalize_term(p["predicate"].get<std::string>());
  for (const TermId* t : {&out.subject, &out.predicate}) {
    if (std::find(terms.begin(), terms.end(), *t) == terms.end()) {
      term_mismatch(std::string(key) + " uses a term outside the term list: " + *t);
    }
  }
  if (out.subject == out.predicate) {
    term_mismatch(std::string(key) + " relates a term to itself");
  }
  return out;
}

}  // namespace

SyllogismStructure validate_structure(const json& record) {
  if (!record.is_object()) malformed("record must be an object");
  if (!record.contains("terms") || !record["terms"].is_array() ||
      record["terms"].size() != 3) {
    malformed("terms must be an array of three strings");
  }
  SyllogismStructure s;
  for (std::size_t i = 0; i < 3; ++i) {
    if (!record["terms"][i].is_string()) {
      malformed("terms must be an array of three strings");
    }
    s.terms[i] = normalize_term(record["terms"][i].get<std::string>());
    if (s.terms[i].empty()) malformed("term " + std::to_string(i) + " is empty");
  }
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < 3; ++j) {
      if (s.terms[i] == s.terms[j]) {
        malformed("terms must be distinct after normalization");
      }
    }
  }
  s.premise1 = read_proposition(record, "premise1", s.terms);
  s.premise2 = read_proposition(record, "premise2", s.terms);
  s.conclusion = read_proposition(record, "conclusion", s.terms);
  check_well_formed(s);
  return s;
}

json extraction_record_schema() {
  const json prop{
      {"type", "object"},
      {"properties",
       {{"type", {{"type", "string"}, {"enum", {"A", "E", "I", "O"}}}},
        {"subject", {{"type", "string"}}},
        {"predicate", {{"type", "string"}}}}},
      {"required", {"type", "subject", "predicate"}},
  };
  return json{
      {"type", "object"},
      {"properties",
       {{"terms",
         {{"type", "array"},
          {"items", {{"type", "string"}}},
          {"minItems", 3},
          {"maxItems", 3}}},
        {"premise1", prop},
        {"premise2", prop},
        {"conclusion", prop}}},
      {"required", {"terms", "premise1", "premise2", "conclusion"}},
  };
}

std::string render_extraction_prompt(std::string_view syllogism_text) {
  static constexpr const char* kTemplate =
      "Extract the logical structure of this syllogism.\n"
      "\n"
      "SYLLOGISM: {syllogism}\n"
      "\n"
      "Proposition types:\n"
      "- A: \"All S are P\" / \"Every S is P\"\n"
      "- E: \"No S are P\"\n"
      "- I: \"Some S are P\" / \"At least one S is P\"\n"
      "- O: \"Some S are not P\"\n"
      "\n"
      "The CONCLUSION follows \"therefore/hence/thus/consequently/so\".\n"
      "\n"
      "Output ONLY this JSON (replace t1/t2/t3 with the exact term WORDS from "
      "the syllogism text):\n"
      "{\"terms\": [\"t1\", \"t2\", \"t3\"],\n"
      "\"premise1\": {\"type\": \"A/E/I/O\",\n"
      "  \"subject\": \"term <- exact word(s) from text\",\n"
      "  \"predicate\": \"term <- exact word(s) from text\"},\n"
      "\"premise2\": {\"type\": \"A/E/I/O\",\n"
      "  \"subject\": \"term <- exact word(s) from text\",\n"
      "  \"predicate\": \"term <- exact word(s) from text\"},\n"
      "\"conclusion\": {\"type\": \"A/E/I/O\",\n"
      "  \"subject\": \"term <- exact word(s) from text\",\n"
      "  \"predicate\": \"term <- exact word(s) from text\"}}\n";
  std::string out = kTemplate;
  const std::string placeholder = "{syllogism}";
  out.replace(out.find(placeholder), placeholder.size(), syllogism_text);
  return out;
}

RemoteExtractor::RemoteExtractor(Backend& backend, std::string model_id,
                                 double temperature)
    : backend_(&backend), model_id_(std::move(model_id)), temperature_(temperature) {}

const std::string& RemoteExtractor::id() const { return model_id_; }

std::variant<SyllogismStructure, std::string> RemoteExtractor::extract(
    const std::string& text) {
  ChatRequest req;
  req.model = model_id_;
  req.temperature = temperature_;
  req.messages = {{"user", render_extraction_prompt(text)}};
  req.response_schema = extraction_record_schema();

  auto result = backend_->complete(req);
  if (std::holds_alternative<TransportError>(result)) {
    return "transport: " + std::get<TransportError>(result).message;
  }
  const std::string& content = std::get<ChatResult>(result).content;
  json record = json::parse(content, nullptr, false);
  if (record.is_discarded()) {
    return std::string("malformed: response is not a structured record");
  }
  try {
    return validate_structure(record);
  } catch (const std::runtime_error& e) {
    return std::string(e.what());
  }
}

ExtractorChain::ExtractorChain(const ExtractorConfig& cfg, Backend* backend)
    : attempts_per_extractor_(std::max(1, cfg.attempts_per_extractor)) {
  if (cfg.chain.empty()) {
    throw std::invalid_argument("extractor chain must be nonempty");
  }
  for (const std::string& id : cfg.chain) {
    if (id == "rule-based") {
      extractors_.push_back(std::make_unique<RuleBasedExtractor>());
    } else {
      if (!backend) {
        throw std::invalid_argument("remote extractor '" + id +
                                    "' needs a backend");
      }
      extractors_.push_back(std::make_unique<RemoteExtractor>(*backend, id));
    }
  }
}

ExtractorChain::ExtractorChain(std::vector<std::unique_ptr<Extractor>> extractors,
                               int attempts_per_extractor)
    : extractors_(std::move(extractors)),
      attempts_per_extractor_(std::max(1, attempts_per_extractor)) {
  if (extractors_.empty()) {
    throw std::invalid_argument("extractor chain must be nonempty");
  }
}

ExtractionOutcome ExtractorChain::extract(const std::string& text) const {
  ExtractionOutcome out;
  for (const auto& extractor : extractors_) {
    for (int attempt = 0; attempt < attempts_per_extractor_; ++attempt) {
      ++out.attempts;
      auto r = extractor->extract(text);
      if (std::holds_alternative<SyllogismStructure>(r)) {
        out.structure = std::get<SyllogismStructure>(r);
        out.extractor_used = extractor->id();
        return out;
      }
      out.error = std::get<std::string>(r);
    }
  }
  return out;
}

}  // namespace syllo
