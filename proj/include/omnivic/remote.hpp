#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace omnivic {

struct BackendError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EndpointConfig {
  std::string url;      // e.g. http://127.0.0.1:8080/v1/chat/completions
  std::string model;    // opaque model identifier passed through
  std::string api_key;  // sent as a bearer token when non-empty
  int timeout_ms{5000};
  int retries{2};  // attempts after the first failure
};

struct ChatMessage {
  std::string role;  // "system" or "user"
  std::string content;
};

// One chat-completion exchange. Temperature is fixed at 0 so a conforming
// server answers deterministically. The image slot carries an optional
// base64 payload straight through; nothing here inspects it.
struct ChatRequest {
  std::string model;
  std::vector<ChatMessage> messages;
  double temperature{0.0};
  std::optional<std::string> image_b64;
};

// POSTs the request as JSON and returns the assistant text. Accepts either
// an OpenAI-style {"choices":[{"message":{"content":...}}]} body or a flat
// {"content": ...} body. Throws BackendError on transport failure, non-2xx
// status, or a body with neither shape.
std::string chat_complete(const EndpointConfig& endpoint,
                          const ChatRequest& request);

// chat_complete with endpoint.retries extra attempts before giving up.
std::string chat_complete_with_retry(const EndpointConfig& endpoint,
                                     const ChatRequest& request);

}  // namespace omnivic
