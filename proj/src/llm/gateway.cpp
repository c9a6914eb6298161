#include "modlab/llm/gateway.hpp"

#include <fmt/format.h>

#include <cstdlib>
#include <ctime>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "modlab/hashing.hpp"

namespace modlab::llm {

using nlohmann::json;
namespace fs = std::filesystem;

std::string_view to_string(SchemaTag tag) {
  switch (tag) {
    case SchemaTag::whow: return "whow";
    case SchemaTag::eslmod: return "eslmod";
    case SchemaTag::quality: return "quality";
  }
  return "?";
}

std::string_view to_string(BackendKind kind) {
  switch (kind) {
    case BackendKind::live: return "live";
    case BackendKind::mock: return "mock";
    case BackendKind::replay: return "replay";
  }
  return "?";
}

SchemaTag schema_tag_from_string(std::string_view s) {
  if (s == "whow") return SchemaTag::whow;
  if (s == "eslmod") return SchemaTag::eslmod;
  if (s == "quality") return SchemaTag::quality;
  throw ConfigError("unknown schema tag '" + std::string(s) + "'");
}

BackendKind backend_kind_from_string(std::string_view s) {
  if (s == "live") return BackendKind::live;
  if (s == "mock") return BackendKind::mock;
  if (s == "replay") return BackendKind::replay;
  throw ConfigError("unknown backend '" + std::string(s) + "' (expected live|mock|replay)");
}

void PromptRequest::validate() const {
  if (prompt_text.empty()) throw ConfigError("prompt_text must be non-empty");
  if (!(decoding.temperature >= 0.0 && decoding.temperature <= 2.0))
    throw ConfigError(fmt::format("temperature {} outside [0, 2]", decoding.temperature));
  if (decoding.max_tokens <= 0) throw ConfigError("max_tokens must be positive");
}

json to_json(const PromptRequest& r) {
  return {{"prompt_text", r.prompt_text},
          {"decoding", {{"temperature", r.decoding.temperature},
                        {"max_tokens", r.decoding.max_tokens}}},
          {"model_id", r.model_id},
          {"schema_tag", to_string(r.schema_tag)}};
}

PromptRequest request_from_json(const json& doc) {
  PromptRequest r;
  r.prompt_text = doc.at("prompt_text").get<std::string>();
  r.decoding.temperature = doc.at("decoding").at("temperature").get<double>();
  r.decoding.max_tokens = doc.at("decoding").at("max_tokens").get<int>();
  r.model_id = doc.at("model_id").get<std::string>();
  r.schema_tag = schema_tag_from_string(doc.at("schema_tag").get<std::string>());
  return r;
}

std::string canonical_decoding(const Decoding& d) {
  // %.17g round-trips doubles; fixed key order.
  return fmt::format("max_tokens={};temperature={:.17g}", d.max_tokens, d.temperature);
}

std::string cache_key(const PromptRequest& r) {
  const std::string decoding = canonical_decoding(r.decoding);
  std::string material;
  material.reserve(r.model_id.size() + r.prompt_text.size() + decoding.size() + 48);
  for (std::string_view part : {std::string_view(r.model_id), std::string_view(r.prompt_text),
                                std::string_view(decoding)}) {
    material += std::to_string(part.size());
    material.push_back(':');
    material.append(part);
  }
  return sha256_hex(material);
}

// --- cache --------------------------------------------------------------------

ResponseCache::ResponseCache(fs::path dir) : dir_(std::move(dir)) {}

fs::path ResponseCache::path_for(const std::string& key) const {
  return dir_ / key.substr(0, 2) / (key + ".json");
}

bool ResponseCache::empty() const {
  if (!fs::exists(dir_)) return true;
  for (const auto& e : fs::recursive_directory_iterator(dir_))
    if (e.is_regular_file() && e.path().extension() == ".json") return false;
  return true;
}

std::optional<CacheEntry> ResponseCache::get(const std::string& key) const {
  const fs::path p = path_for(key);
  std::ifstream in(p);
  if (!in) return std::nullopt;
  try {
    const json doc = json::parse(in);
    CacheEntry e;
    e.key = key;
    e.request = request_from_json(doc.at("request"));
    e.raw_response = doc.at("raw_response").get<std::string>();
    e.created_at = doc.value("created_at", std::string{});
    return e;
  } catch (const std::exception& ex) {
    throw Error("corrupt cache entry " + p.string() + ": " + ex.what());
  }
}

void ResponseCache::put(const CacheEntry& entry) const {
  static std::atomic<unsigned> counter{0};
  const fs::path target = path_for(entry.key);
  fs::create_directories(target.parent_path());
  const json doc = {{"request", to_json(entry.request)},
                    {"raw_response", entry.raw_response},
                    {"created_at", entry.created_at}};
  std::ostringstream tmp_name;
  tmp_name << entry.key << ".tmp." << std::this_thread::get_id() << "." << counter++;
  const fs::path tmp = target.parent_path() / tmp_name.str();
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error("cannot write cache entry " + tmp.string());
    out << doc.dump(2) << '\n';
  }
  fs::rename(tmp, target);
}

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

// --- gateway ------------------------------------------------------------------

Gateway::Gateway(GatewayOptions options, std::shared_ptr<Transport> transport)
    : options_(std::move(options)), transport_(std::move(transport)) {
  if (options_.cache_dir) cache_.emplace(*options_.cache_dir);
  switch (options_.kind) {
    case BackendKind::replay:
      if (!cache_)
        throw GatewayError(GatewayError::Kind::config, "replay backend requires a cache directory");
      break;
    case BackendKind::live:
      if (!transport_) transport_ = HttpTransport::from_environment();
      break;
    case BackendKind::mock:
      break;
  }
  if (options_.max_in_flight == 0) options_.max_in_flight = 1;
}

std::string Gateway::complete(const PromptRequest& request) {
  request.validate();
  const std::string key = cache_key(request);

  if (options_.kind == BackendKind::replay) {
    auto hit = cache_->get(key);
    if (!hit) throw GatewayError(GatewayError::Kind::cache_miss, "cache miss for key " + key);
    ++cache_hits_;
    return hit->raw_response;
  }

  if (cache_) {
    if (auto hit = cache_->get(key)) {
      ++cache_hits_;
      return hit->raw_response;
    }
  }

  std::string raw;
  if (options_.kind == BackendKind::mock) {
    raw = mock_response(request, options_.seed);
  } else {
    auto delay = options_.retry.base_delay;
    for (int attempt = 0;; ++attempt) {
      try {
        ++network_calls_;
        raw = transport_->send(request);
        break;
      } catch (const TransientError& e) {
        if (attempt >= options_.retry.max_retries) {
          throw GatewayError(GatewayError::Kind::network,
                             fmt::format("request failed after {} attempts: {}", attempt + 1,
                                         e.what()));
        }
        std::this_thread::sleep_for(delay);
        delay = std::chrono::milliseconds(
            static_cast<long long>(static_cast<double>(delay.count()) * options_.retry.multiplier));
      }
    }
  }

  if (cache_) cache_->put({key, request, raw, utc_timestamp()});
  return raw;
}

void Gateway::for_each_bounded(std::size_t n, const std::function<void(std::size_t)>& fn) const {
  if (n == 0) return;
  const std::size_t workers = std::min(options_.max_in_flight, n);
  std::vector<std::exception_ptr> errors(n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace modlab::llm
