#pragma once

// Completion gateway: one request type, three interchangeable backends
// (live HTTP, deterministic mock, cache replay) and a content-addressed
// response cache shared by all of them.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "modlab/error.hpp"

namespace modlab::llm {

enum class SchemaTag { whow, eslmod, quality };
enum class BackendKind { live, mock, replay };

std::string_view to_string(SchemaTag tag);
std::string_view to_string(BackendKind kind);
SchemaTag schema_tag_from_string(std::string_view s);
BackendKind backend_kind_from_string(std::string_view s);

struct Decoding {
  double temperature = 0.0;
  int max_tokens = 1024;
  bool operator==(const Decoding&) const = default;
};

struct PromptRequest {
  std::string prompt_text;
  Decoding decoding;
  std::string model_id;
  SchemaTag schema_tag = SchemaTag::whow;

  /// Throws ConfigError on empty prompt or temperature outside [0, 2].
  void validate() const;
  bool operator==(const PromptRequest&) const = default;
};

nlohmann::json to_json(const PromptRequest& request);
PromptRequest request_from_json(const nlohmann::json& doc);

/// Canonical decoding string, e.g. "max_tokens=1024;temperature=0".
std::string canonical_decoding(const Decoding& decoding);

/// 64-hex-digit SHA-256 over model id, prompt text and canonical decoding,
/// each length-prefixed so distinct triples never share a preimage.
std::string cache_key(const PromptRequest& request);

struct CacheEntry {
  std::string key;
  PromptRequest request;
  std::string raw_response;
  std::string created_at;  // ISO-8601 UTC
};

/// `<dir>/<first two hex digits>/<key>.json`, written via temp file + rename.
class ResponseCache {
 public:
  explicit ResponseCache(std::filesystem::path dir);

  std::optional<CacheEntry> get(const std::string& key) const;
  void put(const CacheEntry& entry) const;
  std::filesystem::path path_for(const std::string& key) const;
  const std::filesystem::path& dir() const { return dir_; }
  bool empty() const;

 private:
  std::filesystem::path dir_;
};

class GatewayError : public Error {
 public:
  enum class Kind { network, cache_miss, credentials, http, config };
  GatewayError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Raised by transports for failures worth retrying (timeouts, 429, 5xx).
class TransientError : public Error {
 public:
  using Error::Error;
};

/// Network leg of the live backend.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual std::string send(const PromptRequest& request) = 0;
};

/// OpenAI-style chat-completions transport. Base URL and key come from
/// MODLAB_API_BASE / MODLAB_API_KEY unless given explicitly.
class HttpTransport : public Transport {
 public:
  HttpTransport(std::string base_url, std::string api_key,
                std::chrono::seconds timeout = std::chrono::seconds(120));
  static std::unique_ptr<HttpTransport> from_environment();

  std::string send(const PromptRequest& request) override;

 private:
  std::string base_url_;
  std::string api_key_;
  std::chrono::seconds timeout_;
};

struct RetryPolicy {
  int max_retries = 3;
  std::chrono::milliseconds base_delay{500};
  double multiplier = 2.0;
};

struct GatewayOptions {
  BackendKind kind = BackendKind::mock;
  std::optional<std::filesystem::path> cache_dir;
  std::uint64_t seed = 0;
  RetryPolicy retry;
  std::size_t max_in_flight = 4;
};

/// Deterministic schema-valid synthetic answer for `request`.
std::string mock_response(const PromptRequest& request, std::uint64_t seed);

class Gateway {
 public:
  /// For live backends without an explicit transport, one is built from the
  /// environment; missing credentials raise GatewayError(credentials).
  explicit Gateway(GatewayOptions options, std::shared_ptr<Transport> transport = nullptr);

  /// Returns the raw completion text. Live: cache first, then up to
  /// `max_retries` retries with exponential backoff, cached before return.
  /// Replay: cache hit or GatewayError(cache_miss). Mock: synthetic answer.
  std::string complete(const PromptRequest& request);

  /// Runs `fn(i)` for i in [0, n) with at most `max_in_flight` concurrent
  /// calls. The first exception (by index) is rethrown after all finish.
  void for_each_bounded(std::size_t n, const std::function<void(std::size_t)>& fn) const;

  const GatewayOptions& options() const { return options_; }
  std::size_t network_calls() const { return network_calls_.load(); }
  std::size_t cache_hits() const { return cache_hits_.load(); }

 private:
  GatewayOptions options_;
  std::shared_ptr<Transport> transport_;
  std::optional<ResponseCache> cache_;
  std::atomic<std::size_t> network_calls_{0};
  std::atomic<std::size_t> cache_hits_{0};
};

}  // namespace modlab::llm
