#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace syllo {

// Connection settings for a chat-completion endpoint. The bearer token is
// read from the environment variable named by api_key_env at call time;
// configs never hold the secret itself.
struct BackendConfig {
  std::string base_url;  // e.g. "http://127.0.0.1:8080"
  std::string path = "/v1/chat/completions";
  std::string api_key_env;
  int timeout_ms = 30000;
  int max_retries = 2;  // attempts after the first, on transport errors
  int backoff_initial_ms = 250;

  bool operator==(const BackendConfig&) const = default;
};

struct ChatMessage {
  std::string role;
  std::string content;
};

struct ChatRequest {
  std::string model;
  std::vector<ChatMessage> messages;
  double temperature = 0.0;
  std::optional<nlohmann::json> response_schema;
};

struct CallTelemetry {
  double latency_ms = 0.0;
  long input_tokens = -1;  // -1 when the backend reported no usage
  long output_tokens = -1;
  int attempts = 0;
};

struct TransportError {
  std::string message;
  int status = 0;  // last HTTP status, 0 for connection-level failures
  int attempts = 0;
};

struct ChatResult {
  std::string content;
  CallTelemetry telemetry;
};

class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::variant<ChatResult, TransportError> complete(const ChatRequest& req) = 0;
};

// Blocking HTTP client. Accepts either a top-level "content" string or the
// chat-completion "choices[0].message.content" shape; token usage is read
// from input_tokens/output_tokens or prompt_tokens/completion_tokens.
// Latency is measured client-side around each attempt. Each call uses its
// own connection, so one instance may be shared across threads.
class HttpBackend final : public Backend {
 public:
  explicit HttpBackend(BackendConfig cfg);

  std::variant<ChatResult, TransportError> complete(const ChatRequest& req) override;

  const BackendConfig& config() const { return cfg_; }

 private:
  BackendConfig cfg_;
};

nlohmann::json to_json(const ChatRequest& req);

}  // namespace syllo
