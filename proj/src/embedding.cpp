#include "omnivic/embedding.hpp"

#include <cctype>
#include <cstdint>
#include <stdexcept>

#include <json.hpp>

namespace omnivic {

namespace {

// FNV-1a, 64 bit. Stable across platforms, which keeps banks portable.
std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

HashEmbedder::HashEmbedder(int dim) : dim_(dim) {
  if (dim <= 0) {
    throw std::invalid_argument("HashEmbedder: dimension must be positive");
  }
}

Eigen::VectorXd HashEmbedder::embed(const std::string& text) const {
  if (text.empty()) {
    throw std::invalid_argument("HashEmbedder: empty text");
  }
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dim_);
  std::string token;
  bool any_token = false;
  auto flush = [&] {
    if (!token.empty()) {
      v[static_cast<Eigen::Index>(fnv1a(token) % static_cast<std::uint64_t>(dim_))] += 1.0;
      any_token = true;
      token.clear();
    }
  };
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      token += static_cast<char>(std::tolower(c));
    } else {
      flush();
    }
  }
  flush();
  if (!any_token) {
    // Punctuation-only text: hash the raw string as one token.
    v[static_cast<Eigen::Index>(fnv1a(text) % static_cast<std::uint64_t>(dim_))] = 1.0;
  }
  return v / v.norm();
}

RemoteEmbedder::RemoteEmbedder(EndpointConfig endpoint, int dim)
    : endpoint_(std::move(endpoint)), dim_(dim) {
  if (dim <= 0) {
    throw std::invalid_argument("RemoteEmbedder: dimension must be positive");
  }
}

Eigen::VectorXd RemoteEmbedder::embed(const std::string& text) const {
  if (text.empty()) {
    throw std::invalid_argument("RemoteEmbedder: empty text");
  }
  ChatRequest req;
  req.model = endpoint_.model;
  req.messages = {{"system", "Return the embedding of the user text as a JSON "
                             "array of " + std::to_string(dim_) + " numbers."},
                  {"user", text}};
  const std::string reply = chat_complete_with_retry(endpoint_, req);

  nlohmann::json arr;
  try {
    arr = nlohmann::json::parse(reply);
  } catch (const nlohmann::json::exception& e) {
    throw BackendError(std::string("embedding reply is not JSON: ") + e.what());
  }
  if (!arr.is_array() || arr.size() != static_cast<std::size_t>(dim_)) {
    throw BackendError("embedding reply is not an array of " +
                       std::to_string(dim_) + " numbers");
  }
  Eigen::VectorXd v(dim_);
  for (int i = 0; i < dim_; ++i) {
    if (!arr[static_cast<std::size_t>(i)].is_number()) {
      throw BackendError("embedding reply holds a non-numeric entry");
    }
    v[i] = arr[static_cast<std::size_t>(i)].get<double>();
  }
  const double n = v.norm();
  if (!(n > 0.0) || !v.allFinite()) {
    throw BackendError("embedding reply is zero or non-finite");
  }
  return v / n;
}

}  // namespace omnivic
