#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "syllo/backend.hpp"
#include "syllo/dataset.hpp"
#include "syllo/logic.hpp"

namespace syllo {

enum class PromptKind : std::uint8_t { ZeroShot, FewShot, FewShotCoT, SimpleCoT };

const char* to_string(PromptKind k);
std::optional<PromptKind> prompt_kind_from(std::string_view name);

// Byte-exact substitution of the syllogism text into the selected template.
std::string render_prompt(PromptKind kind, std::string_view syllogism_text);

// Which stage of the response parser produced the vote value.
enum class ParseStage : std::uint8_t {
  AnswerTag,       // explicit "ANSWER: true|false"
  LastLine,        // last nonempty line is a bare true/false/valid/invalid
  LastToken,       // last whole-word true/false/valid/invalid anywhere
  DefaultInvalid,  // nothing matched; the error sink
};

const char* to_string(ParseStage s);

struct Vote {
  int value = 0;  // 1 = valid
  ParseStage stage = ParseStage::DefaultInvalid;
  bool transport_error = false;
  std::string raw_response;
  CallTelemetry telemetry;
};

struct ResponseParseOptions {
  bool case_insensitive = true;
  bool anchor_line_start = false;  // require the ANSWER tag at line start
};

// Total over strings; never throws. Stages run in the order above and the
// first productive stage wins.
Vote parse_response(std::string_view text, const ResponseParseOptions& opts = {});

struct SimulatedBiasParams {
  double structural_accuracy = 1.0;
  double believability_pull = 0.0;
  std::uint64_t seed = 0;
  // When set, all classifiers sharing this seed err on the same instances
  // (correlated content bias).
  std::optional<std::uint64_t> shared_bias_seed;

  bool operator==(const SimulatedBiasParams&) const = default;
};

struct RemoteModel {
  std::string model_id;

  bool operator==(const RemoteModel&) const = default;
};

struct ClassifierConfig {
  std::string id;
  PromptKind prompt = PromptKind::ZeroShot;
  double temperature = 0.0;
  std::variant<SimulatedBiasParams, RemoteModel> backend;

  bool operator==(const ClassifierConfig&) const = default;
};

// Deterministic classifier with controllable content bias: starts from the
// gold verdict with probability structural_accuracy (else the flip), then
// with probability believability_pull replaces the answer with the
// believability-congruent one. Both draws hash (seed, instance id), so a
// fixed seed gives an identical vote on every call.
Vote classify_simulated(const SimulatedBiasParams& params,
                        const DatasetInstance& instance, Verdict gold);

// Renders the prompt, posts it, and parses the response. Transport failures
// (after the backend's retries) yield a vote of 0 with transport_error set,
// so they can be counted apart from parse defaults.
Vote classify_remote(Backend& backend, const ClassifierConfig& cfg,
                     const RemoteModel& model, std::string_view instance_text,
                     const ResponseParseOptions& opts = {});

// Uniform [0,1) draw keyed by (seed, instance id, salt); the deterministic
// randomness source behind classify_simulated.
double simulated_draw(std::uint64_t seed, std::string_view instance_id,
                      std::string_view salt);

}  // namespace syllo
