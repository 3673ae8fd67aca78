#pragma once

#include <chrono>
#include <cstdlib>
#include <memory>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "ads/errors.hpp"
#include "ads/similarity.hpp"

#include "httplib.h"
#include "json.hpp"

namespace ads {

struct RemoteConfig {
  std::string endpoint;        // e.g. "http://127.0.0.1:8080"
  double timeout_seconds = 10.0;
  int retries = 2;             // extra attempts after the first failure
  int backoff_ms = 100;        // doubled per retry
};

inline std::string embed_endpoint_from_env() {
  const char* v = std::getenv("ADS_EMBED_URL");
  return v ? std::string(v) : std::string();
}

inline std::string summarize_endpoint_from_env() {
  const char* v = std::getenv("ADS_SUMM_URL");
  return v ? std::string(v) : std::string();
}

namespace detail {

// Split "scheme://host:port/prefix" into the client base and a path prefix.
inline std::pair<std::string, std::string> split_endpoint(
    const std::string& endpoint) {
  const std::size_t scheme = endpoint.find("://");
  const std::size_t path_start =
      endpoint.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  if (path_start == std::string::npos) return {endpoint, ""};
  std::string prefix = endpoint.substr(path_start);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {endpoint.substr(0, path_start), prefix};
}

inline nlohmann::json post_json(const RemoteConfig& config,
                                const std::string& path,
                                const nlohmann::json& body) {
  const auto [base, prefix] = split_endpoint(config.endpoint);
  if (base.empty()) {
    raise(Errc::service_unreachable, "no service endpoint configured");
  }

  const auto timeout = std::chrono::microseconds(
      static_cast<long long>(config.timeout_seconds * 1e6));
  int backoff = config.backoff_ms;
  httplib::Error last_error = httplib::Error::Success;

  for (int attempt = 0; attempt <= config.retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(backoff));
      backoff *= 2;
    }
    httplib::Client client(base);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);

    httplib::Result res =
        client.Post(prefix + path, body.dump(), "application/json");
    if (res) {
      if (res->status != 200) {
        raise(Errc::bad_response, "service returned HTTP " +
                                      std::to_string(res->status) + " for " +
                                      path);
      }
      nlohmann::json parsed = nlohmann::json::parse(res->body, nullptr, false);
      if (parsed.is_discarded()) {
        raise(Errc::bad_response, "service returned invalid JSON for " + path);
      }
      return parsed;
    }
    last_error = res.error();
  }

  if (last_error == httplib::Error::ConnectionTimeout ||
      last_error == httplib::Error::Read ||
      last_error == httplib::Error::Write) {
    raise(Errc::timeout, "service timed out: " + config.endpoint + path);
  }
  raise(Errc::service_unreachable,
        "service unreachable: " + config.endpoint + path);
}

}  // namespace detail

// POST {endpoint}/embed  {"texts": [...]}  ->  {"vectors": [[...], ...]}
inline std::vector<EmbeddingVector> remote_embed(
    const std::vector<std::string>& texts, const RemoteConfig& config) {
  if (texts.empty()) raise(Errc::empty_input, "remote_embed: no texts");

  nlohmann::json request;
  request["texts"] = texts;
  const nlohmann::json response = detail::post_json(config, "/embed", request);

  if (!response.is_object() || !response.contains("vectors") ||
      !response["vectors"].is_array()) {
    raise(Errc::bad_response, "embed response missing \"vectors\" array");
  }
  const auto& rows = response["vectors"];
  if (rows.size() != texts.size()) {
    raise(Errc::bad_response,
          "embed response has " + std::to_string(rows.size()) +
              " vectors for " + std::to_string(texts.size()) + " texts");
  }
  std::vector<EmbeddingVector> out;
  out.reserve(rows.size());
  std::size_t dim = 0;
  for (const auto& row : rows) {
    if (!row.is_array()) {
      raise(Errc::bad_response, "embed response row is not an array");
    }
    EmbeddingVector v;
    v.values.reserve(row.size());
    for (const auto& x : row) {
      if (!x.is_number()) {
        raise(Errc::bad_response, "embed response contains a non-number");
      }
      v.values.push_back(x.get<double>());
    }
    if (out.empty()) {
      dim = v.dim();
    } else if (v.dim() != dim) {
      raise(Errc::bad_response, "embed response has ragged dimensions");
    }
    out.push_back(std::move(v));
  }
  return out;
}

class RemoteEmbeddingProvider : public EmbeddingProvider {
 public:
  explicit RemoteEmbeddingProvider(RemoteConfig config)
      : config_(std::move(config)) {}

  EmbeddingVector embed(const std::string& text) const override {
    return remote_embed({text}, config_).front();
  }

  std::vector<EmbeddingVector> embed_batch(
      const std::vector<std::string>& texts) const override {
    return remote_embed(texts, config_);
  }

 private:
  RemoteConfig config_;
};

// POST {endpoint}/summarize  {"text": "..."}  ->  {"summary": "..."}
inline std::string remote_summarize(const std::string& text,
                                    const RemoteConfig& config) {
  nlohmann::json request;
  request["text"] = text;
  const nlohmann::json response =
      detail::post_json(config, "/summarize", request);
  if (!response.is_object() || !response.contains("summary") ||
      !response["summary"].is_string()) {
    raise(Errc::bad_response, "summarize response missing \"summary\" string");
  }
  return response["summary"].get<std::string>();
}

}  // namespace ads
