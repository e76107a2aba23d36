#pragma once

#include <cstdlib>
#include <string>

#include <httplib.h>
#include <json.hpp>

#include "liet/errors.hpp"
#include "liet/llm.hpp"

// HTTP chat-completions client: OpenAI-compatible request body, exponential
// backoff on transport errors / 429 / 5xx, credentials from an environment
// variable that never reaches logs or errors.
namespace liet::llm {

namespace detail {

struct ParsedEndpoint {
  std::string host_port;  // scheme://host[:port]
  std::string path;
};

inline ParsedEndpoint parse_endpoint(const std::string& url) {
  const std::string http = "http://";
  if (url.rfind(http, 0) != 0)
    throw ConfigError("endpoint must be an http:// URL, got '" + url + "'");
  size_t path_pos = url.find('/', http.size());
  if (path_pos == std::string::npos)
    return {url, "/v1/chat/completions"};
  return {url.substr(0, path_pos), url.substr(path_pos)};
}

}  // namespace detail

inline HttpBackend::HttpBackend(BackendSpec spec) : spec_(std::move(spec)) {
  if (spec_.max_retries < 0) throw ConfigError("max_retries must be >= 0");
  auto parsed = detail::parse_endpoint(spec_.endpoint);
  host_port_ = parsed.host_port;
  path_ = parsed.path;
}

inline CompletionResult HttpBackend::complete(const CompletionRequest& request) {
  request.validate();

  nlohmann::ordered_json body;
  body["model"] = spec_.model;
  body["messages"] = nlohmann::json::array({{{"role", "user"}, {"content", request.prompt}}});
  body["temperature"] = request.temperature;
  body["top_p"] = request.top_p;
  body["max_tokens"] = request.max_tokens;
  if (request.seed_hint) body["seed"] = *request.seed_hint;
  const std::string payload = body.dump();

  httplib::Headers headers;
  if (!spec_.auth_env.empty()) {
    const char* token = std::getenv(spec_.auth_env.c_str());
    if (!token || !*token)
      throw BackendFailure(BackendFailure::Cause::Auth,
                           "credential environment variable '" + spec_.auth_env + "' is not set");
    headers.emplace("Authorization", std::string("Bearer ") + token);
  }

  auto start = std::chrono::steady_clock::now();
  long total_delay_ms = 0;
  std::string last_error = "no attempt made";
  for (int attempt = 0; attempt <= spec_.max_retries; ++attempt) {
    if (attempt > 0) {
      long delay = static_cast<long>(spec_.backoff_base_ms) << (attempt - 1);
      delay = std::min<long>(delay, spec_.backoff_ceiling_ms - total_delay_ms);
      if (delay > 0) {
        std::this_thread::sleep_for(std::chrono::milliseconds(delay));
        total_delay_ms += delay;
      }
    }
    httplib::Client client(host_port_);
    client.set_connection_timeout(0, spec_.timeout_ms * 1000LL);
    client.set_read_timeout(spec_.timeout_ms / 1000, (spec_.timeout_ms % 1000) * 1000);
    auto res = client.Post(path_, headers, payload, "application/json");
    if (!res) {
      last_error = "transport error (" + httplib::to_string(res.error()) + ")";
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_error = "http status " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200)
      throw BackendFailure(BackendFailure::Cause::HttpStatus,
                           "http status " + std::to_string(res->status));
    try {
      auto j = nlohmann::json::parse(res->body);
      CompletionResult out;
      out.text = j.at("choices").at(0).at("message").at("content").get<std::string>();
      out.retries = attempt;
      out.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - start)
                           .count();
      return out;
    } catch (const nlohmann::json::exception& e) {
      throw BackendFailure(BackendFailure::Cause::Other,
                           std::string("malformed completion response: ") + e.what());
    }
  }
  throw BackendFailure(BackendFailure::Cause::ExhaustedRetries,
                       "exhausted " + std::to_string(spec_.max_retries) + " retries: " + last_error);
}

}  // namespace liet::llm
