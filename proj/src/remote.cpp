#include "omnivic/remote.hpp"

#include <json.hpp>

// httplib spins up worker threads for its blocking client; keep the
// dependency local to this translation unit.
#include <httplib.h>

namespace omnivic {

namespace {

struct ParsedUrl {
  std::string host_port;  // scheme://host:port
  std::string path;
};

ParsedUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw BackendError("endpoint url missing scheme: '" + url + "'");
  }
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) {
    return {url, "/"};
  }
  return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

std::string chat_complete(const EndpointConfig& endpoint,
                          const ChatRequest& request) {
  const ParsedUrl url = split_url(endpoint.url);

  nlohmann::json body;
  body["model"] = request.model;
  body["temperature"] = request.temperature;
  auto& messages = body["messages"] = nlohmann::json::array();
  for (const auto& m : request.messages) {
    messages.push_back({{"role", m.role}, {"content", m.content}});
  }
  if (request.image_b64) {
    body["image"] = *request.image_b64;
  }

  httplib::Client client(url.host_port);
  client.set_connection_timeout(0, endpoint.timeout_ms * 1000);
  client.set_read_timeout(0, endpoint.timeout_ms * 1000);
  if (!endpoint.api_key.empty()) {
    client.set_bearer_token_auth(endpoint.api_key);
  }

  auto res = client.Post(url.path, body.dump(), "application/json");
  if (!res) {
    throw BackendError("transport failure talking to " + endpoint.url + ": " +
                       httplib::to_string(res.error()));
  }
  if (res->status < 200 || res->status >= 300) {
    throw BackendError("endpoint returned status " +
                       std::to_string(res->status));
  }

  nlohmann::json reply;
  try {
    reply = nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::exception& e) {
    throw BackendError(std::string("endpoint reply is not JSON: ") + e.what());
  }
  try {
    if (reply.contains("choices")) {
      return reply.at("choices").at(0).at("message").at("content")
          .get<std::string>();
    }
    if (reply.contains("content")) {
      return reply.at("content").get<std::string>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw BackendError(std::string("endpoint reply has unexpected shape: ") +
                       e.what());
  }
  throw BackendError("endpoint reply carries no content field");
}

std::string chat_complete_with_retry(const EndpointConfig& endpoint,
                                     const ChatRequest& request) {
  const int attempts = 1 + std::max(0, endpoint.retries);
  std::string last_error;
  for (int i = 0; i < attempts; ++i) {
    try {
      return chat_complete(endpoint, request);
    } catch (const BackendError& e) {
      last_error = e.what();
    }
  }
  throw BackendError("all " + std::to_string(attempts) +
                     " attempts failed; last error: " + last_error);
}

}  // namespace omnivic
