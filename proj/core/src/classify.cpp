#include "syllo/classify.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <vector>

namespace syllo {

const char* to_string(PromptKind k) {
  switch (k) {
    case PromptKind::ZeroShot: return "zero-shot";
    case PromptKind::FewShot: return "few-shot";
    case PromptKind::FewShotCoT: return "few-shot-cot";
    case PromptKind::SimpleCoT: return "simple-cot";
  }
  return "?";
}

std::optional<PromptKind> prompt_kind_from(std::string_view name) {
  if (name == "zero-shot") return PromptKind::ZeroShot;
  if (name == "few-shot") return PromptKind::FewShot;
  if (name == "few-shot-cot") return PromptKind::FewShotCoT;
  if (name == "simple-cot") return PromptKind::SimpleCoT;
  return std::nullopt;
}

const char* to_string(ParseStage s) {
  switch (s) {
    case ParseStage::AnswerTag: return "answer-tag";
    case ParseStage::LastLine: return "last-line";
    case ParseStage::LastToken: return "last-token";
    case ParseStage::DefaultInvalid: return "default-invalid";
  }
  return "?";
}

namespace {

constexpr const char* kZeroShotTemplate =
    "Determine if this syllogism is VALID.\n"
    "\n"
    "VALID means: IF the premises were true, the conclusion MUST be true. "
    "Ignore whether premises are actually true in the real world.\n"
    "\n"
    "Syllogism: {syllogism}\n"
    "\n"
    "Answer with exactly one word: true or false\n";

constexpr const char* kFewShotTemplate =
    "Determine if this syllogism is VALID (conclusion necessarily follows "
    "from premises).\n"
    "\n"
    "VALIDITY RULES:\n"
    "- \"All A are B\" + \"All B are C\" -> \"All A are C\" (valid)\n"
    "- \"No A are B\" + \"All C are A\" -> \"No C are B\" (valid)\n"
    "- \"All A are B\" + \"Some C are A\" -> \"Some C are B\" (valid)\n"
    "- \"All A are B\" + \"All C are B\" -> \"All A are C\" (invalid, "
    "undistributed middle)\n"
    "- \"Some A are B\" does NOT guarantee \"All A are B\"\n"
    "\n"
    "EXAMPLES:\n"
    "\"All dogs are mammals. All mammals are animals. Therefore, all dogs are "
    "animals.\" -> true\n"
    "\"All birds are dinosaurs. All sparrows are birds. Therefore, all "
    "sparrows are dinosaurs.\" -> true\n"
    "\"No fish are mammals. All sharks are fish. Therefore, no sharks are "
    "mammals.\" -> true\n"
    "\"All reptiles are cold-blooded. Some lizards are reptiles. Therefore, "
    "some lizards are cold-blooded.\" -> true\n"
    "\"All lawyers are professionals. All doctors are professionals. "
    "Therefore, all lawyers are doctors.\" -> false\n"
    "\"Some politicians are corrupt. All senators are politicians. Therefore, "
    "some senators are corrupt.\" -> false\n"
    "\"All rocks are edible. Some clouds are rocks. Therefore, all clouds are "
    "edible.\" -> false\n"
    "\n"
    "Syllogism: {syllogism}\n"
    "\n"
    "Answer with exactly one word: true or false\n";

constexpr const char* kFewShotCoTTemplate =
    "Analyze this syllogism's logical VALIDITY.\n"
    "\n"
    "IMPORTANT: VALID = conclusion MUST follow IF premises are assumed true. "
    "Ignore real-world facts.\n"
    "\n"
    "RULES:\n"
    "- \"All A are B\" + \"All B are C\" -> \"All A are C\" (valid chain)\n"
    "- \"No A are B\" + \"All C are A\" -> \"No C are B\" (valid exclusion)\n"
    "- \"All A are B\" + \"Some C are A\" -> \"Some C are B\" (Darii)\n"
    "- \"All A are B\" + \"All C are B\" -> \"All A are C\" (invalid, "
    "undistributed middle)\n"
    "- \"Some A are B\" means ONLY SOME, not all\n"
    "\n"
    "WORKED EXAMPLES:\n"
    "\n"
    "Example 1: \"All cats are mammals. All mammals are animals. Therefore, "
    "all cats are animals.\"\n"
    "- Structure: cats ⊆ mammals ⊆ animals\n"
    "- Chain is complete. ANSWER: true\n"
    "\n"
    "Example 2: \"All unicorns fly. All pegasi are unicorns. Therefore, all "
    "pegasi fly.\"\n"
    "- Premises are fantasy but structure is: pegasi ⊆ unicorns ⊆ "
    "fly\n"
    "- Valid chain regardless of real-world truth. ANSWER: true\n"
    "\n"
    "Example 3: \"All athletes are healthy. All healthy people exercise. "
    "Therefore, all athletes exercise.\"\n"
    "- Chain: athletes -> healthy -> exercise\n"
    "- Chain is complete. ANSWER: true\n"
    "\n"
    "Example 4: \"All doctors are professionals. All lawyers are "
    "professionals. Therefore, all doctors are lawyers.\"\n"
    "- \"Professionals\" appears as PREDICATE in both premises.\n"
    "- Middle term is undistributed: we only know both are subsets of "
    "professionals, not that they overlap.\n"
    "- Despite the believable surface, the structure is invalid. ANSWER: "
    "false\n"
    "\n"
    "Example 5: \"All cats are pets. All dogs are pets. Therefore, all cats "
    "are dogs.\"\n"
    "- Both subsets of pets, but could be separate\n"
    "- Undistributed middle. ANSWER: false\n"
    "\n"
    "Example 6: \"Some birds can fly. All penguins are birds. Therefore, some "
    "penguins can fly.\"\n"
    "- \"Some birds\" doesn't tell us WHICH birds\n"
    "- Cannot guarantee any penguin is in the flying subset. ANSWER: false\n"
    "\n"
    "Syllogism: {syllogism}\n"
    "\n"
    "Think through the structure briefly, then write your final answer as: "
    "ANSWER: true or ANSWER: false\n";

constexpr const char* kSimpleCoTTemplate =
    "Is this syllogism logically VALID? (If premises were true, must "
    "conclusion be true?)\n"
    "\n"
    "Syllogism: {syllogism}\n"
    "\n"
    "First, identify the logical structure. Then determine if the conclusion "
    "necessarily follows.\n"
    "\n"
    "End your response with exactly: ANSWER: true or ANSWER: false\n";

const char* template_for(PromptKind kind) {
  switch (kind) {
    case PromptKind::ZeroShot: return kZeroShotTemplate;
    case PromptKind::FewShot: return kFewShotTemplate;
    case PromptKind::FewShotCoT: return kFewShotCoTTemplate;
    case PromptKind::SimpleCoT: return kSimpleCoTTemplate;
  }
  return kZeroShotTemplate;
}

}  // namespace

std::string render_prompt(PromptKind kind, std::string_view syllogism_text) {
  std::string out = template_for(kind);
  const std::string placeholder = "{syllogism}";
  const std::size_t pos = out.find(placeholder);
  out.replace(pos, placeholder.size(), syllogism_text);
  return out;
}

namespace {

std::optional<int> token_value(std::string_view token, bool case_insensitive) {
  std::string t(token);
  if (case_insensitive) {
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) {
      return static_cast<char>(std::tolower(c));
    });
  }
  if (t == "true" || t == "valid") return 1;
  if (t == "false" || t == "invalid") return 0;
  return std::nullopt;
}

std::optional<int> stage_answer_tag(const std::string& text,
                                    const ResponseParseOptions& opts) {
  auto flags = std::regex::ECMAScript | std::regex::multiline;
  if (opts.case_insensitive) flags |= std::regex::icase;
  const std::regex re(opts.anchor_line_start ? R"(^[ \t]*ANSWER:[ \t]*(true|false))"
                                             : R"(ANSWER:[ \t]*(true|false))",
                      flags);
  std::optional<int> result;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), re);
       it != std::sregex_iterator(); ++it) {
    result = token_value((*it)[1].str(), true);
  }
  return result;
}

std::optional<int> stage_last_line(const std::string& text,
                                   const ResponseParseOptions& opts) {
  std::string_view rest = text;
  std::string last;
  while (!rest.empty()) {
    const std::size_t nl = rest.find('\n');
    std::string_view line = rest.substr(0, nl);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front()))) {
      line.remove_prefix(1);
    }
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) {
      line.remove_suffix(1);
    }
    if (!line.empty()) last.assign(line);
    if (nl == std::string_view::npos) break;
    rest.remove_prefix(nl + 1);
  }
  return token_value(last, opts.case_insensitive);
}

std::optional<int> stage_last_token(const std::string& text,
                                    const ResponseParseOptions& opts) {
  auto flags = std::regex::ECMAScript;
  if (opts.case_insensitive) flags |= std::regex::icase;
  static const char* pattern = R"(\b(true|false|valid|invalid)\b)";
  const std::regex re(pattern, flags);
  std::optional<int> result;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), re);
       it != std::sregex_iterator(); ++it) {
    result = token_value((*it)[1].str(), true);
  }
  return result;
}

}  // namespace

Vote parse_response(std::string_view text, const ResponseParseOptions& opts) {
  const std::string s(text);
  Vote v;
  v.raw_response = s;
  if (auto r = stage_answer_tag(s, opts)) {
    v.value = *r;
    v.stage = ParseStage::AnswerTag;
    return v;
  }
  if (auto r = stage_last_line(s, opts)) {
    v.value = *r;
    v.stage = ParseStage::LastLine;
    return v;
  }
  if (auto r = stage_last_token(s, opts)) {
    v.value = *r;
    v.stage = ParseStage::LastToken;
    return v;
  }
  v.value = 0;
  v.stage = ParseStage::DefaultInvalid;
  return v;
}

namespace {

std::uint64_t fnv1a(std::uint64_t seed, std::string_view a, std::string_view b) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](unsigned char byte) {
    h ^= byte;
    h *= 1099511628211ull;
  };
  for (int i = 0; i < 8; ++i) mix(static_cast<unsigned char>(seed >> (8 * i)));
  for (char c : a) mix(static_cast<unsigned char>(c));
  mix(0x1f);
  for (char c : b) mix(static_cast<unsigned char>(c));
  return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

double simulated_draw(std::uint64_t seed, std::string_view instance_id,
                      std::string_view salt) {
  const std::uint64_t h = splitmix64(fnv1a(seed, instance_id, salt));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

Vote classify_simulated(const SimulatedBiasParams& params,
                        const DatasetInstance& instance, Verdict gold) {
  const int gold_bit = gold == Verdict::Valid ? 1 : 0;
  int answer = gold_bit;
  if (simulated_draw(params.seed, instance.id, "structural") >=
      params.structural_accuracy) {
    answer = 1 - answer;
  }
  const std::uint64_t pull_seed =
      params.shared_bias_seed ? *params.shared_bias_seed : params.seed;
  if (simulated_draw(pull_seed, instance.id, "pull") < params.believability_pull) {
    answer = instance.plausibility == Plausibility::Believable ? 1 : 0;
  }
  // Route through the real response parser so vote accounting is uniform.
  Vote v = parse_response(answer ? "ANSWER: true" : "ANSWER: false");
  return v;
}

Vote classify_remote(Backend& backend, const ClassifierConfig& cfg,
                     const RemoteModel& model, std::string_view instance_text,
                     const ResponseParseOptions& opts) {
  ChatRequest req;
  req.model = model.model_id;
  req.temperature = cfg.temperature;
  req.messages = {{"user", render_prompt(cfg.prompt, instance_text)}};

  auto result = backend.complete(req);
  if (std::holds_alternative<TransportError>(result)) {
    const auto& err = std::get<TransportError>(result);
    Vote v;
    v.value = 0;
    v.stage = ParseStage::DefaultInvalid;
    v.transport_error = true;
    v.raw_response = err.message;
    v.telemetry.attempts = err.attempts;
    return v;
  }
  const auto& ok = std::get<ChatResult>(result);
  Vote v = parse_response(ok.content, opts);
  v.telemetry = ok.telemetry;
  return v;
}

}  // namespace syllo
