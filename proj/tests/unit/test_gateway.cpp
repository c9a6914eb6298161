#include <atomic>
#include <mutex>
#include <thread>

#include "doctest.h"
#include "fixtures.hpp"
#include "modlab/hashing.hpp"
#include "modlab/llm/gateway.hpp"
#include "modlab/llm/prompts.hpp"
#include "modlab/llm/response_parser.hpp"

using namespace modlab;
using namespace modlab::llm;

namespace {

PromptRequest request(std::string text = "Label this sentence.") {
  PromptRequest r;
  r.prompt_text = std::move(text);
  r.model_id = "test-model";
  r.schema_tag = SchemaTag::whow;
  return r;
}

class ScriptedTransport : public Transport {
 public:
  explicit ScriptedTransport(int transient_failures) : failures_(transient_failures) {}
  std::string send(const PromptRequest&) override {
    ++calls;
    if (failures_-- > 0) throw TransientError("HTTP 503");
    return R"j({"answer": "ok"})j";
  }
  std::atomic<int> calls{0};

 private:
  int failures_;
};

GatewayOptions live_options(const std::filesystem::path& cache) {
  GatewayOptions o;
  o.kind = BackendKind::live;
  o.cache_dir = cache;
  o.retry.base_delay = std::chrono::milliseconds(1);
  return o;
}

}  // namespace

TEST_CASE("sha256 matches known vectors") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("cache key depends on model, prompt and decoding") {
  const PromptRequest base = request();
  const std::string k = cache_key(base);
  CHECK(k.size() == 64);
  CHECK(cache_key(base) == k);
  auto other = base;
  other.model_id = "other";
  CHECK(cache_key(other) != k);
  other = base;
  other.prompt_text += " ";
  CHECK(cache_key(other) != k);
  other = base;
  other.decoding.temperature = 0.5;
  CHECK(cache_key(other) != k);
  other = base;
  other.schema_tag = SchemaTag::quality;
  CHECK(cache_key(other) == k);

  // Length prefixes keep boundaries unambiguous.
  PromptRequest a = request("bc"), b = request("c");
  a.model_id = "a";
  b.model_id = "ab";
  CHECK(cache_key(a) != cache_key(b));
}

TEST_CASE("request validation") {
  auto r = request();
  CHECK_NOTHROW(r.validate());
  r.decoding.temperature = 2.5;
  CHECK_THROWS_AS(r.validate(), ConfigError);
  r = request("");
  CHECK_THROWS_AS(r.validate(), ConfigError);
  CHECK(request_from_json(to_json(request())) == request());
}

TEST_CASE("response cache stores entries under a two-digit shard") {
  const auto dir = testing::temp_dir("cache_roundtrip");
  ResponseCache cache(dir);
  CHECK(cache.empty());
  const auto r = request();
  const auto key = cache_key(r);
  cache.put({key, r, "raw text", "2025-01-01T00:00:00Z"});
  CHECK(cache.path_for(key).parent_path().filename() == key.substr(0, 2));
  const auto hit = cache.get(key);
  REQUIRE(hit);
  CHECK(hit->raw_response == "raw text");
  CHECK(hit->request == r);
  CHECK_FALSE(cache.get(std::string(64, '0')));
  CHECK_FALSE(cache.empty());
}

TEST_CASE("replay backend fails on a miss and never touches a transport") {
  const auto dir = testing::temp_dir("replay_miss");
  GatewayOptions o;
  o.kind = BackendKind::replay;
  o.cache_dir = dir;
  auto transport = std::make_shared<ScriptedTransport>(0);
  Gateway g(o, transport);
  try {
    g.complete(request());
    FAIL("expected a cache miss");
  } catch (const GatewayError& e) {
    CHECK(e.kind() == GatewayError::Kind::cache_miss);
  }
  CHECK(transport->calls == 0);

  GatewayOptions no_cache;
  no_cache.kind = BackendKind::replay;
  CHECK_THROWS_AS(Gateway{no_cache}, GatewayError);
}

TEST_CASE("live backend retries transient errors then caches") {
  const auto dir = testing::temp_dir("live_retry");
  auto transport = std::make_shared<ScriptedTransport>(2);
  Gateway g(live_options(dir), transport);
  CHECK(g.complete(request()) == R"j({"answer": "ok"})j");
  CHECK(transport->calls == 3);
  CHECK(g.complete(request()) == R"j({"answer": "ok"})j");
  CHECK(transport->calls == 3);
  CHECK(g.cache_hits() == 1);

  GatewayOptions replay;
  replay.kind = BackendKind::replay;
  replay.cache_dir = dir;
  Gateway r(replay);
  CHECK(r.complete(request()) == R"j({"answer": "ok"})j");
}

TEST_CASE("live backend gives up after max retries") {
  const auto dir = testing::temp_dir("live_giveup");
  auto transport = std::make_shared<ScriptedTransport>(100);
  auto o = live_options(dir);
  o.retry.max_retries = 2;
  Gateway g(o, transport);
  try {
    g.complete(request());
    FAIL("expected a network error");
  } catch (const GatewayError& e) {
    CHECK(e.kind() == GatewayError::Kind::network);
  }
  CHECK(transport->calls == 3);
  CHECK(ResponseCache(dir).empty());
}

TEST_CASE("mock backend is deterministic and schema-valid") {
  const auto session = testing::make_session("s", true, 3, 2);
  const auto refs = corpus::moderator_sentences(session);
  Gateway g(GatewayOptions{});
  for (const auto& ref : refs) {
    PromptRequest w = request(build_whow_prompt(session, ref));
    CHECK(mock_response(w, 7) == mock_response(w, 7));
    CHECK_NOTHROW(parse_whow_answer(g.complete(w)));
    PromptRequest e = request(build_eslmod_prompt(session, ref, eslmod_taxonomy()));
    e.schema_tag = SchemaTag::eslmod;
    CHECK_NOTHROW(parse_eslmod_answer(g.complete(e)));
  }
  PromptRequest q = request(build_quality_prompt(session, std::nullopt, "p1"));
  q.schema_tag = SchemaTag::quality;
  const auto label = parse_quality_answer(g.complete(q));
  CHECK(label.overall >= 1);
  CHECK(label.overall <= 5);
}

TEST_CASE("for_each_bounded respects the in-flight limit and rethrows the first error") {
  GatewayOptions o;
  o.max_in_flight = 3;
  Gateway g(o);
  std::atomic<int> active{0}, peak{0};
  std::mutex m;
  std::vector<int> seen;
  g.for_each_bounded(40, [&](std::size_t i) {
    const int now = ++active;
    int p = peak.load();
    while (now > p && !peak.compare_exchange_weak(p, now)) {
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(1));
    {
      std::lock_guard lock(m);
      seen.push_back(static_cast<int>(i));
    }
    --active;
  });
  CHECK(seen.size() == 40);
  CHECK(peak.load() <= 3);

  try {
    g.for_each_bounded(10, [](std::size_t i) {
      if (i == 4 || i == 7) throw DataError("item " + std::to_string(i));
    });
    FAIL("expected an error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()) == "item 4");
  }
}
