#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include <fmt/format.h>

#include <cstdlib>

#include "json.hpp"
#include "modlab/discovery/embedding.hpp"
#include "modlab/error.hpp"
#include "modlab/llm/gateway.hpp"

namespace modlab::discovery {

using nlohmann::json;

HttpEmbedder::HttpEmbedder(std::string model, std::string base_url, std::string api_key,
                           std::size_t batch_size)
    : model_(std::move(model)),
      base_url_(std::move(base_url)),
      api_key_(std::move(api_key)),
      batch_size_(batch_size == 0 ? 1 : batch_size) {}

std::unique_ptr<HttpEmbedder> HttpEmbedder::from_environment(std::string model) {
  const char* key = std::getenv("MODLAB_API_KEY");
  if (key == nullptr || *key == '\0')
    throw llm::GatewayError(llm::GatewayError::Kind::credentials,
                            "embedding endpoint requires MODLAB_API_KEY in the environment");
  const char* base = std::getenv("MODLAB_API_BASE");
  return std::make_unique<HttpEmbedder>(std::move(model),
                                        base && *base ? base : "https://api.openai.com/v1", key);
}

Embeddings HttpEmbedder::embed(const std::vector<std::string>& texts) {
  if (texts.empty()) throw DataError("embed: no texts");
  const auto scheme_end = base_url_.find("://");
  const auto path_start = base_url_.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  std::string prefix = path_start == std::string::npos ? "" : base_url_.substr(path_start);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  httplib::Client client(base_url_.substr(0, path_start));
  client.set_bearer_token_auth(api_key_);
  client.set_read_timeout(std::chrono::seconds(120));

  Embeddings out;
  for (std::size_t start = 0; start < texts.size(); start += batch_size_) {
    const std::size_t end = std::min(texts.size(), start + batch_size_);
    json input = json::array();
    for (std::size_t i = start; i < end; ++i) input.push_back(texts[i].empty() ? " " : texts[i]);
    const json body = {{"model", model_}, {"input", input}};
    auto res = client.Post(prefix + "/embeddings", body.dump(), "application/json");
    if (!res)
      throw llm::GatewayError(llm::GatewayError::Kind::network,
                              "embedding request failed: " + httplib::to_string(res.error()));
    if (res->status != 200)
      throw llm::GatewayError(llm::GatewayError::Kind::http,
                              fmt::format("embedding HTTP {}: {}", res->status, res->body.substr(0, 400)));
    const json doc = json::parse(res->body);
    std::vector<Vector> batch(end - start);
    for (const auto& item : doc.at("data"))
      batch.at(item.at("index").get<std::size_t>()) = item.at("embedding").get<Vector>();
    for (std::size_t i = start; i < end; ++i) {
      if (texts[i].find_first_not_of(" \t\r\n") == std::string::npos) {
        out.flagged.push_back(i);
        batch[i - start].assign(batch[i - start].size(), 0.0);
      }
      out.vectors.push_back(std::move(batch[i - start]));
    }
  }
  return out;
}

}  // namespace modlab::discovery
