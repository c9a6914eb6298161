#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "modlab/error.hpp"
#include "modlab/llm/prompts.hpp"

using namespace modlab;
using namespace modlab::llm;

namespace {

const corpus::Session& sample_session() {
  static const corpus::Corpus c = corpus::load_corpus({testing::source_dir() / "data" / "sample_corpus"});
  return *corpus::find_session(c, "stress_mod_01");
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

std::string between(const std::string& text, const std::string& open, const std::string& close) {
  const auto b = text.find(open);
  REQUIRE(b != std::string::npos);
  const auto e = text.find(close, b + open.size());
  REQUIRE(e != std::string::npos);
  return text.substr(b + open.size(), e - b - open.size());
}

}  // namespace

TEST_CASE("target speaker options list the roster after unknown and everyone") {
  CHECK(target_speaker_options(sample_session()) ==
        std::vector<std::string>{"0 (Unknown)", "1 (Everyone)", "2 (Lin)", "3 (Wei)", "4 (Yan)", "5 (Hao)"});
}

TEST_CASE("context window holds at most five prior and two post utterances") {
  const corpus::SentenceRef ref{"stress_mod_01", "s2", 6, 1};
  const std::string p = build_whow_prompt(sample_session(), ref);
  const std::string prior = between(p, "utterances prior):\n", "Target sentence:");
  const std::string post = between(p, "after the target):\n", "Please answer");
  CHECK(count(prior, ": ") == 5);
  CHECK(prior.find("Mm-hmm.") != std::string::npos);
  CHECK(prior.find("For me it is the exams.") == std::string::npos);
  CHECK(count(post, ": ") == 2);
  CHECK(post.find("In my company the deadline is very tight.") != std::string::npos);

  const std::string narrow = build_whow_prompt(sample_session(), ref, ContextWindow{1, 0});
  CHECK(count(between(narrow, "utterances prior):\n", "Target sentence:"), ": ") == 1);
  CHECK(count(between(narrow, "after the target):\n", "Please answer"), ": ") == 0);
}

TEST_CASE("opening sentence has no prior context") {
  const std::string p = build_whow_prompt(sample_session(), {"stress_mod_01", "s1", 0, 0});
  CHECK(between(p, "utterances prior):\n", "Target sentence:") == "\n");
}

TEST_CASE("prompts reject non-moderator targets and incomplete taxonomies") {
  CHECK_THROWS_AS(build_whow_prompt(sample_session(), {"stress_mod_01", "s2", 1, 0}), DataError);
  auto strategies = eslmod_taxonomy().strategies();
  strategies[3].examples.clear();
  const TaxonomyRegistry broken(strategies);
  try {
    build_eslmod_prompt(sample_session(), {"stress_mod_01", "s2", 0, 0}, broken);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("incomplete taxonomy") != std::string::npos);
  }
}

TEST_CASE("ESLMOD prompt enumerates every strategy in option order") {
  const std::string p = build_eslmod_prompt(sample_session(), {"stress_mod_01", "s2", 4, 0}, eslmod_taxonomy());
  const auto& t = eslmod_taxonomy();
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto& s = t.strategies()[i];
    CHECK(p.find(std::to_string(i) + " (" + std::string(s.label_for_prompt()) + ")") != std::string::npos);
    CHECK(p.find(s.definition) != std::string::npos);
    CHECK(p.find(s.examples.front()) != std::string::npos);
  }
  CHECK(p.find("\"5 (Hao)\"") != std::string::npos);
}

TEST_CASE("quality prompt covers one scope and truncates long transcripts") {
  const auto& s = sample_session();
  const std::string seg = build_quality_prompt(s, std::string("s2"), "p1");
  CHECK(seg.find("For me it is the exams.") != std::string::npos);
  CHECK(seg.find("Hi, I am Lin.") == std::string::npos);
  CHECK(seg.find("speaker id \"p1\"") != std::string::npos);
  CHECK_THROWS_AS(build_quality_prompt(s, std::string("s2"), "mod_missing"), DataError);
  CHECK_THROWS_AS(build_quality_prompt(s, std::string("nope"), "p1"), DataError);

  const std::string cut = build_quality_prompt(s, std::nullopt, "p1", QualityPromptOptions{60});
  CHECK(cut.find("utterances omitted") != std::string::npos);
  CHECK(cut.find("Hello everyone, welcome to today's discussion.") != std::string::npos);
  const std::string full = build_quality_prompt(s, std::nullopt, "p1");
  CHECK(full.find("utterances omitted") == std::string::npos);
}
