#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "doctest.h"
#include "httplib.h"
#include "json.hpp"
#include "syllo/backend.hpp"
#include "syllo/classify.hpp"
#include "syllo/dataset.hpp"

using namespace syllo;
using nlohmann::json;

TEST_CASE("prompt rendering substitutes the syllogism text") {
  const std::string text = "All cats are cats. All cats are cats. Therefore, cats.";
  for (PromptKind kind : {PromptKind::ZeroShot, PromptKind::FewShot,
                          PromptKind::FewShotCoT, PromptKind::SimpleCoT}) {
    const std::string prompt = render_prompt(kind, text);
    CHECK(prompt.find(text) != std::string::npos);
    CHECK(prompt.find("{syllogism}") == std::string::npos);
  }
  CHECK(render_prompt(PromptKind::ZeroShot, text)
            .starts_with("Determine if this syllogism is VALID."));
  CHECK(render_prompt(PromptKind::SimpleCoT, text).find(
            "ANSWER: true or ANSWER: false") != std::string::npos);
}

TEST_CASE("prompt kind names round-trip") {
  for (PromptKind kind : {PromptKind::ZeroShot, PromptKind::FewShot,
                          PromptKind::FewShotCoT, PromptKind::SimpleCoT}) {
    CHECK(prompt_kind_from(to_string(kind)) == kind);
  }
  CHECK(!prompt_kind_from("chain-of-thought").has_value());
}

TEST_CASE("response parsing stages") {
  auto check = [](const std::string& text, int value, ParseStage stage) {
    const Vote v = parse_response(text);
    CAPTURE(text);
    CHECK(v.value == value);
    CHECK(v.stage == stage);
  };

  check("ANSWER: true", 1, ParseStage::AnswerTag);
  check("reasoning here\nANSWER: false", 0, ParseStage::AnswerTag);
  check("ANSWER: true\nwait, reconsidering\nANSWER: false", 0, ParseStage::AnswerTag);
  check("true\nANSWER: false", 0, ParseStage::AnswerTag);
  check("deduction...\ntrue", 1, ParseStage::LastLine);
  check("deduction...\n  Valid  \n\n", 1, ParseStage::LastLine);
  check("the syllogism is valid.", 1, ParseStage::LastToken);
  check("valid at first glance, but ultimately invalid", 0, ParseStage::LastToken);
  check("", 0, ParseStage::DefaultInvalid);
  check("no determination possible", 0, ParseStage::DefaultInvalid);
}

TEST_CASE("response parsing options") {
  ResponseParseOptions anchored;
  anchored.anchor_line_start = true;
  const Vote mid = parse_response("we conclude ANSWER: true", anchored);
  CHECK(mid.stage == ParseStage::LastToken);
  CHECK(mid.value == 1);
  const Vote at_start = parse_response("  ANSWER: true", anchored);
  CHECK(at_start.stage == ParseStage::AnswerTag);

  ResponseParseOptions exact;
  exact.case_insensitive = false;
  const Vote wrong_case = parse_response("answer: TRUE", exact);
  CHECK(wrong_case.stage == ParseStage::DefaultInvalid);
  CHECK(wrong_case.value == 0);
  const Vote right_case = parse_response("ANSWER: true", exact);
  CHECK(right_case.stage == ParseStage::AnswerTag);
  CHECK(right_case.value == 1);
}

TEST_CASE("word-boundary matching ignores embedded tokens") {
  const Vote v = parse_response("trueish claims are invalidated");
  CHECK(v.stage == ParseStage::DefaultInvalid);
  CHECK(v.value == 0);
}

namespace {

DatasetInstance make_instance(const std::string& id, bool valid, Plausibility p) {
  DatasetInstance inst;
  inst.id = id;
  inst.valid = valid;
  inst.plausibility = p;
  inst.text = "placeholder";
  return inst;
}

}  // namespace

TEST_CASE("simulated draws are deterministic and uniform-ish") {
  const double d1 = simulated_draw(42, "inst-1", "structural");
  const double d2 = simulated_draw(42, "inst-1", "structural");
  CHECK(d1 == d2);
  CHECK(d1 >= 0.0);
  CHECK(d1 < 1.0);
  CHECK(simulated_draw(42, "inst-1", "pull") != d1);
  CHECK(simulated_draw(43, "inst-1", "structural") != d1);

  double sum = 0.0;
  for (int i = 0; i < 4000; ++i) {
    sum += simulated_draw(7, "id-" + std::to_string(i), "structural");
  }
  CHECK(sum / 4000.0 == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("simulated classifier honors its accuracy knobs") {
  SimulatedBiasParams perfect{1.0, 0.0, 99, std::nullopt};
  SimulatedBiasParams inverted{0.0, 0.0, 99, std::nullopt};
  SimulatedBiasParams biased{1.0, 1.0, 99, std::nullopt};

  for (int i = 0; i < 50; ++i) {
    const bool gold_valid = i % 2 == 0;
    const auto plaus = i % 3 == 0 ? Plausibility::Unbelievable : Plausibility::Believable;
    const auto inst = make_instance("case-" + std::to_string(i), gold_valid, plaus);
    const Verdict gold = gold_valid ? Verdict::Valid : Verdict::Invalid;

    CHECK(classify_simulated(perfect, inst, gold).value == (gold_valid ? 1 : 0));
    CHECK(classify_simulated(inverted, inst, gold).value == (gold_valid ? 0 : 1));
    CHECK(classify_simulated(biased, inst, gold).value ==
          (plaus == Plausibility::Believable ? 1 : 0));
  }
}

TEST_CASE("simulated classifier hits its structural accuracy in aggregate") {
  SimulatedBiasParams params{0.9, 0.0, 4242, std::nullopt};
  int correct = 0;
  const int n = 2000;
  for (int i = 0; i < n; ++i) {
    const bool gold_valid = i % 2 == 0;
    const auto inst = make_instance("agg-" + std::to_string(i), gold_valid,
                                    Plausibility::Believable);
    const Verdict gold = gold_valid ? Verdict::Valid : Verdict::Invalid;
    if (classify_simulated(params, inst, gold).value == (gold_valid ? 1 : 0)) {
      ++correct;
    }
  }
  CHECK(static_cast<double>(correct) / n == doctest::Approx(0.9).epsilon(0.05));
}

TEST_CASE("simulated votes are reproducible and parser-routed") {
  SimulatedBiasParams params{0.8, 0.3, 7, std::nullopt};
  const auto inst = make_instance("repro", true, Plausibility::Unbelievable);
  const Vote a = classify_simulated(params, inst, Verdict::Valid);
  const Vote b = classify_simulated(params, inst, Verdict::Valid);
  CHECK(a.value == b.value);
  CHECK(a.stage == ParseStage::AnswerTag);
  CHECK(a.raw_response == b.raw_response);
}

TEST_CASE("shared bias seed correlates the content pull across classifiers") {
  SimulatedBiasParams first{1.0, 0.5, 100, 555};
  SimulatedBiasParams second{1.0, 0.5, 200, 555};
  SimulatedBiasParams independent{1.0, 0.5, 300, std::nullopt};

  int shared_diff = 0;
  int indep_diff = 0;
  for (int i = 0; i < 300; ++i) {
    const bool gold_valid = i % 2 == 0;
    const auto plaus = i % 2 == 0 ? Plausibility::Believable : Plausibility::Unbelievable;
    const auto inst = make_instance("corr-" + std::to_string(i), gold_valid, plaus);
    const Verdict gold = gold_valid ? Verdict::Valid : Verdict::Invalid;
    const int va = classify_simulated(first, inst, gold).value;
    const int vb = classify_simulated(second, inst, gold).value;
    const int vc = classify_simulated(independent, inst, gold).value;
    shared_diff += va != vb;
    indep_diff += va != vc;
  }
  // Same shared seed, same pull draws, same answers; an independent seed
  // diverges on some instances.
  CHECK(shared_diff == 0);
  CHECK(indep_diff > 0);
}

// -------- remote backend against a local mock server --------

namespace {

struct MockServer {
  httplib::Server server;
  std::thread thread;
  int port = 0;

  explicit MockServer(httplib::Server::Handler handler) {
    server.Post("/v1/chat/completions", std::move(handler));
    port = server.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }

  ~MockServer() {
    server.stop();
    thread.join();
  }

  BackendConfig config() const {
    BackendConfig cfg;
    cfg.base_url = "http://127.0.0.1:" + std::to_string(port);
    cfg.max_retries = 2;
    cfg.backoff_initial_ms = 1;
    cfg.timeout_ms = 5000;
    return cfg;
  }
};

ChatRequest simple_request() {
  ChatRequest req;
  req.model = "mock-model";
  req.messages = {{"user", "Is this valid?"}};
  req.temperature = 0.25;
  return req;
}

}  // namespace

TEST_CASE("backend parses the chat-completion response shape") {
  json seen_body;
  MockServer mock([&](const httplib::Request& req, httplib::Response& res) {
    seen_body = json::parse(req.body);
    res.set_content(json{{"choices",
                          {{{"message", {{"role", "assistant"},
                                         {"content", "ANSWER: true"}}}}}},
                         {"usage", {{"prompt_tokens", 42}, {"completion_tokens", 7}}}}
                        .dump(),
                    "application/json");
  });

  HttpBackend backend(mock.config());
  const auto result = backend.complete(simple_request());
  REQUIRE(std::holds_alternative<ChatResult>(result));
  const auto& ok = std::get<ChatResult>(result);
  CHECK(ok.content == "ANSWER: true");
  CHECK(ok.telemetry.input_tokens == 42);
  CHECK(ok.telemetry.output_tokens == 7);
  CHECK(ok.telemetry.attempts == 1);
  CHECK(ok.telemetry.latency_ms >= 0.0);

  CHECK(seen_body["model"] == "mock-model");
  CHECK(seen_body["temperature"] == doctest::Approx(0.25));
  CHECK(seen_body["messages"][0]["role"] == "user");
  CHECK(seen_body["messages"][0]["content"] == "Is this valid?");
  CHECK(!seen_body.contains("response_schema"));
}

TEST_CASE("backend accepts the flat content shape and alternate usage keys") {
  MockServer mock([](const httplib::Request&, httplib::Response& res) {
    res.set_content(json{{"content", "plainly false"},
                         {"usage", {{"input_tokens", 5}, {"output_tokens", 2}}}}
                        .dump(),
                    "application/json");
  });
  HttpBackend backend(mock.config());
  const auto result = backend.complete(simple_request());
  REQUIRE(std::holds_alternative<ChatResult>(result));
  CHECK(std::get<ChatResult>(result).content == "plainly false");
  CHECK(std::get<ChatResult>(result).telemetry.input_tokens == 5);
  CHECK(std::get<ChatResult>(result).telemetry.output_tokens == 2);
}

TEST_CASE("backend omits telemetry counts when usage is missing") {
  MockServer mock([](const httplib::Request&, httplib::Response& res) {
    res.set_content(json{{"content", "ok"}}.dump(), "application/json");
  });
  HttpBackend backend(mock.config());
  const auto result = backend.complete(simple_request());
  REQUIRE(std::holds_alternative<ChatResult>(result));
  CHECK(std::get<ChatResult>(result).telemetry.input_tokens == -1);
  CHECK(std::get<ChatResult>(result).telemetry.output_tokens == -1);
}

TEST_CASE("backend retries transient server errors") {
  std::atomic<int> calls{0};
  MockServer mock([&](const httplib::Request&, httplib::Response& res) {
    if (calls.fetch_add(1) == 0) {
      res.status = 503;
      return;
    }
    res.set_content(json{{"content", "recovered"}}.dump(), "application/json");
  });
  HttpBackend backend(mock.config());
  const auto result = backend.complete(simple_request());
  REQUIRE(std::holds_alternative<ChatResult>(result));
  CHECK(std::get<ChatResult>(result).content == "recovered");
  CHECK(std::get<ChatResult>(result).telemetry.attempts == 2);
  CHECK(calls.load() == 2);
}

TEST_CASE("backend retries rate limiting") {
  std::atomic<int> calls{0};
  MockServer mock([&](const httplib::Request&, httplib::Response& res) {
    if (calls.fetch_add(1) < 1) {
      res.status = 429;
      return;
    }
    res.set_content(json{{"content", "after backoff"}}.dump(), "application/json");
  });
  HttpBackend backend(mock.config());
  const auto result = backend.complete(simple_request());
  REQUIRE(std::holds_alternative<ChatResult>(result));
  CHECK(std::get<ChatResult>(result).telemetry.attempts == 2);
}

TEST_CASE("backend does not retry client errors") {
  std::atomic<int> calls{0};
  MockServer mock([&](const httplib::Request&, httplib::Response& res) {
    calls.fetch_add(1);
    res.status = 400;
    res.set_content("bad request", "text/plain");
  });
  HttpBackend backend(mock.config());
  const auto result = backend.complete(simple_request());
  REQUIRE(std::holds_alternative<TransportError>(result));
  CHECK(std::get<TransportError>(result).status == 400);
  CHECK(std::get<TransportError>(result).attempts == 1);
  CHECK(calls.load() == 1);
}

TEST_CASE("backend exhausts retries on malformed bodies") {
  std::atomic<int> calls{0};
  MockServer mock([&](const httplib::Request&, httplib::Response& res) {
    calls.fetch_add(1);
    res.set_content("not json at all", "text/plain");
  });
  HttpBackend backend(mock.config());
  const auto result = backend.complete(simple_request());
  REQUIRE(std::holds_alternative<TransportError>(result));
  CHECK(std::get<TransportError>(result).attempts == 3);  // initial + 2 retries
  CHECK(calls.load() == 3);
}

TEST_CASE("backend sends the bearer token from the configured env var") {
  std::string seen_auth = "unset";
  MockServer mock([&](const httplib::Request& req, httplib::Response& res) {
    seen_auth = req.get_header_value("Authorization");
    res.set_content(json{{"content", "ok"}}.dump(), "application/json");
  });

  BackendConfig cfg = mock.config();
  cfg.api_key_env = "SYLLO_TEST_KEY";
  ::setenv("SYLLO_TEST_KEY", "sekrit-token", 1);
  HttpBackend with_key(cfg);
  REQUIRE(std::holds_alternative<ChatResult>(with_key.complete(simple_request())));
  CHECK(seen_auth == "Bearer sekrit-token");

  ::unsetenv("SYLLO_TEST_KEY");
  HttpBackend without_key(cfg);
  REQUIRE(std::holds_alternative<ChatResult>(without_key.complete(simple_request())));
  CHECK(seen_auth.empty());
}

TEST_CASE("backend forwards the response schema when present") {
  json seen_body;
  MockServer mock([&](const httplib::Request& req, httplib::Response& res) {
    seen_body = json::parse(req.body);
    res.set_content(json{{"content", "ok"}}.dump(), "application/json");
  });
  HttpBackend backend(mock.config());
  ChatRequest req = simple_request();
  req.response_schema = json{{"type", "object"}};
  REQUIRE(std::holds_alternative<ChatResult>(backend.complete(req)));
  CHECK(seen_body.contains("response_schema"));
  CHECK(seen_body["response_schema"]["type"] == "object");
}

TEST_CASE("classify_remote turns transport failure into a flagged vote") {
  BackendConfig cfg;
  cfg.base_url = "http://127.0.0.1:9";  // discard port; nothing listens
  cfg.max_retries = 0;
  cfg.timeout_ms = 500;
  HttpBackend backend(cfg);

  ClassifierConfig classifier;
  classifier.id = "remote-test";
  classifier.prompt = PromptKind::ZeroShot;
  classifier.backend = RemoteModel{"mock-model"};

  const Vote v = classify_remote(backend, classifier, RemoteModel{"mock-model"},
                                 "All a are b. All b are c. Therefore, all a are c.");
  CHECK(v.value == 0);
  CHECK(v.transport_error);
  CHECK(v.stage == ParseStage::DefaultInvalid);
}

TEST_CASE("classify_remote parses a live mock answer") {
  MockServer mock([](const httplib::Request& req, httplib::Response& res) {
    const json body = json::parse(req.body);
    const std::string prompt = body["messages"][0]["content"];
    const char* answer = prompt.find("Therefore, all dogs are animals") !=
                                 std::string::npos
                             ? "ANSWER: true"
                             : "ANSWER: false";
    res.set_content(json{{"content", answer}}.dump(), "application/json");
  });
  HttpBackend backend(mock.config());

  ClassifierConfig classifier;
  classifier.id = "remote-test";
  classifier.prompt = PromptKind::FewShot;
  classifier.backend = RemoteModel{"mock-model"};

  const Vote v = classify_remote(
      backend, classifier, RemoteModel{"mock-model"},
      "All dogs are mammals. All mammals are animals. Therefore, all dogs are animals.");
  CHECK(v.value == 1);
  CHECK(!v.transport_error);
  CHECK(v.stage == ParseStage::AnswerTag);
  CHECK(v.telemetry.attempts == 1);
}
