#include "syllo/backend.hpp"

#include <chrono>
#include <cstdlib>
#include <thread>

#include "httplib.h"

namespace syllo {

namespace {

using nlohmann::json;

std::optional<std::string> extract_content(const json& body) {
  if (body.contains("content") && body["content"].is_string()) {
    return body["content"].get<std::string>();
  }
  if (body.contains("choices") && body["choices"].is_array() &&
      !body["choices"].empty()) {
    const json& c0 = body["choices"][0];
    if (c0.contains("message") && c0["message"].contains("content") &&
        c0["message"]["content"].is_string()) {
      return c0["message"]["content"].get<std::string>();
    }
  }
  return std::nullopt;
}

void fill_usage(const json& body, CallTelemetry& t) {
  if (!body.contains("usage") || !body["usage"].is_object()) return;
  const json& u = body["usage"];
  auto read = [&u](const char* primary, const char* alias) -> long {
    for (const char* key : {primary, alias}) {
      if (u.contains(key) && u[key].is_number_integer()) {
        return u[key].get<long>();
      }
    }
    return -1;
  };
  t.input_tokens = read("input_tokens", "prompt_tokens");
  t.output_tokens = read("output_tokens", "completion_tokens");
}

bool retryable_status(int status) {
  return status == 429 || status >= 500;
}

}  // namespace

json to_json(const ChatRequest& req) {
  json messages = json::array();
  for (const ChatMessage& m : req.messages) {
    messages.push_back({{"role", m.role}, {"content", m.content}});
  }
  json body{{"model", req.model},
            {"messages", std::move(messages)},
            {"temperature", req.temperature}};
  if (req.response_schema) {
    body["response_schema"] = *req.response_schema;
  }
  return body;
}

HttpBackend::HttpBackend(BackendConfig cfg) : cfg_(std::move(cfg)) {}

std::variant<ChatResult, TransportError> HttpBackend::complete(const ChatRequest& req) {
  const std::string body = to_json(req).dump();

  httplib::Headers headers;
  if (!cfg_.api_key_env.empty()) {
    if (const char* key = std::getenv(cfg_.api_key_env.c_str())) {
      headers.emplace("Authorization", std::string("Bearer ") + key);
    }
  }

  TransportError last{"no attempt made", 0, 0};
  const int total_attempts = 1 + std::max(0, cfg_.max_retries);
  for (int attempt = 0; attempt < total_attempts; ++attempt) {
    if (attempt > 0) {
      const int delay = cfg_.backoff_initial_ms * (1 << (attempt - 1));
      std::this_thread::sleep_for(std::chrono::milliseconds(delay));
    }

    httplib::Client client(cfg_.base_url);
    client.set_connection_timeout(0, cfg_.timeout_ms * 1000LL);
    client.set_read_timeout(cfg_.timeout_ms / 1000, (cfg_.timeout_ms % 1000) * 1000);
    client.set_write_timeout(cfg_.timeout_ms / 1000, (cfg_.timeout_ms % 1000) * 1000);

    const auto start = std::chrono::steady_clock::now();
    httplib::Result res = client.Post(cfg_.path, headers, body, "application/json");
    const auto elapsed = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - start)
                             .count();

    if (!res) {
      last = {std::string("transport: ") + httplib::to_string(res.error()), 0,
              attempt + 1};
      continue;
    }
    if (res->status != 200) {
      last = {"http status " + std::to_string(res->status), res->status,
              attempt + 1};
      if (!retryable_status(res->status)) break;
      continue;
    }

    json parsed = json::parse(res->body, nullptr, false);
    if (parsed.is_discarded()) {
      last = {"response body is not valid structured text", res->status, attempt + 1};
      continue;
    }
    auto content = extract_content(parsed);
    if (!content) {
      last = {"response carries no content field", res->status, attempt + 1};
      continue;
    }

    ChatResult out;
    out.content = std::move(*content);
    out.telemetry.latency_ms = elapsed;
    out.telemetry.attempts = attempt + 1;
    fill_usage(parsed, out.telemetry);
    return out;
  }
  if (last.attempts == 0) last.attempts = total_attempts;
  return last;
}

}  // namespace syllo
