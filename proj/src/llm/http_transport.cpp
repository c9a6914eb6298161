#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include <fmt/format.h>

#include <cstdlib>

#include "modlab/llm/gateway.hpp"

namespace modlab::llm {

using nlohmann::json;

namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string prefix;  // path, no trailing slash
};

SplitUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  const auto host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
  const auto path_start = url.find('/', host_start);
  SplitUrl out;
  out.origin = url.substr(0, path_start);
  if (path_start != std::string::npos) out.prefix = url.substr(path_start);
  while (!out.prefix.empty() && out.prefix.back() == '/') out.prefix.pop_back();
  return out;
}

}  // namespace

HttpTransport::HttpTransport(std::string base_url, std::string api_key,
                             std::chrono::seconds timeout)
    : base_url_(std::move(base_url)), api_key_(std::move(api_key)), timeout_(timeout) {}

std::unique_ptr<HttpTransport> HttpTransport::from_environment() {
  const char* key = std::getenv("MODLAB_API_KEY");
  if (key == nullptr || *key == '\0')
    throw GatewayError(GatewayError::Kind::credentials,
                       "live backend requires MODLAB_API_KEY in the environment");
  const char* base = std::getenv("MODLAB_API_BASE");
  return std::make_unique<HttpTransport>(base && *base ? base : "https://api.openai.com/v1", key);
}

std::string HttpTransport::send(const PromptRequest& request) {
  const SplitUrl url = split_url(base_url_);
  httplib::Client client(url.origin);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  client.set_bearer_token_auth(api_key_);

  const json body = {
      {"model", request.model_id},
      {"messages", json::array({{{"role", "user"}, {"content", request.prompt_text}}})},
      {"temperature", request.decoding.temperature},
      {"max_tokens", request.decoding.max_tokens}};
  auto res = client.Post(url.prefix + "/chat/completions", body.dump(), "application/json");
  if (!res) throw TransientError("transport error: " + httplib::to_string(res.error()));
  if (res->status == 429 || res->status >= 500)
    throw TransientError(fmt::format("HTTP {}", res->status));
  if (res->status != 200)
    throw GatewayError(GatewayError::Kind::http,
                       fmt::format("HTTP {}: {}", res->status, res->body.substr(0, 400)));
  try {
    const json doc = json::parse(res->body);
    return doc.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception& e) {
    throw GatewayError(GatewayError::Kind::http,
                       std::string("unexpected completion payload: ") + e.what());
  }
}

}  // namespace modlab::llm
