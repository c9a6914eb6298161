#include <fstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "modlab/corpus.hpp"
#include "modlab/error.hpp"

using namespace modlab;
using namespace modlab::corpus;
using nlohmann::json;

namespace {

json minimal_session() {
  return json::parse(R"j({
    "session_id": "s1", "source": "volunteer", "topic": "Stress", "moderated": true,
    "speakers": [
      {"id": "m", "display_name": "Emma", "role": "moderator"},
      {"id": "a", "display_name": "Lin", "role": "participant", "global_id": "g_lin"}
    ],
    "segments": [
      {"segment_id": "g1", "utterances": [
        {"speaker_id": "m", "sentences": ["Hello everyone.", "How are you?"]},
        {"speaker_id": "a", "sentences": ["I am fine, thanks."]}
      ]}
    ]
  })j");
}

std::string validation_message(const json& doc) {
  try {
    parse_session(doc, "f.json");
  } catch (const ValidationError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("tokenize splits on unicode whitespace") {
  CHECK(tokenize("  I  think\tso.\n") == std::vector<std::string>{"I", "think", "so."});
  CHECK(tokenize("a b　c") == std::vector<std::string>{"a", "b", "c"});
  CHECK(tokenize("   ").empty());
}

TEST_CASE("split_sentences breaks after terminal punctuation") {
  CHECK(split_sentences("Hi there. How are you? Great!") ==
        std::vector<std::string>{"Hi there.", "How are you?", "Great!"});
  CHECK(split_sentences("Version 3.5 works") == std::vector<std::string>{"Version 3.5 works"});
}

TEST_CASE("parse_session reads a valid document") {
  const Session s = parse_session(minimal_session(), "f.json");
  CHECK(s.session_id == "s1");
  CHECK(s.source == Source::volunteer);
  CHECK(s.moderated);
  REQUIRE(s.moderator() != nullptr);
  CHECK(s.moderator()->id == "m");
  CHECK(s.find_speaker("a")->identity() == "g_lin");
  CHECK(s.segments.at(0).utterances.at(0).token_count == 5);
  const auto refs = moderator_sentences(s);
  REQUIRE(refs.size() == 2);
  CHECK(refs[1].sentence_idx == 1);
}

TEST_CASE("parse_session reports the failing path") {
  SUBCASE("missing field") {
    json doc = minimal_session();
    doc.erase("topic");
    const auto msg = validation_message(doc);
    CHECK(msg.find("f.json") != std::string::npos);
    CHECK(msg.find("$.topic") != std::string::npos);
  }
  SUBCASE("unresolved speaker") {
    json doc = minimal_session();
    doc["segments"][0]["utterances"][1]["speaker_id"] = "zz";
    const auto msg = validation_message(doc);
    CHECK(msg.find("$.segments[0].utterances[1].speaker_id") != std::string::npos);
    CHECK(msg.find("'s1'") != std::string::npos);
  }
  SUBCASE("duplicate segment id") {
    json doc = minimal_session();
    doc["segments"].push_back(doc["segments"][0]);
    CHECK(validation_message(doc).find("duplicate segment_id") != std::string::npos);
  }
  SUBCASE("moderated flag without moderator") {
    json doc = minimal_session();
    doc["speakers"][0]["role"] = "participant";
    CHECK(validation_message(doc).find("no moderator") != std::string::npos);
  }
  SUBCASE("moderated session with silent moderator") {
    json doc = minimal_session();
    doc["segments"][0]["utterances"].erase(0);
    CHECK(validation_message(doc).find("zero moderator sentences") != std::string::npos);
  }
  SUBCASE("blank sentence") {
    json doc = minimal_session();
    doc["segments"][0]["utterances"][1]["sentences"][0] = "   ";
    CHECK(validation_message(doc).find("empty sentence") != std::string::npos);
  }
  SUBCASE("bad source") {
    json doc = minimal_session();
    doc["source"] = "podcast";
    CHECK(validation_message(doc).find("$.source") != std::string::npos);
  }
}

TEST_CASE("load_corpus rejects duplicate session ids") {
  const auto dir = testing::temp_dir("corpus_dup");
  for (const char* name : {"a.json", "b.json"}) std::ofstream(dir / name) << minimal_session().dump();
  CHECK_THROWS_AS(load_corpus({dir}), ValidationError);
}

TEST_CASE("sample corpus loads and round-trips through JSON") {
  const Corpus c = load_corpus({testing::source_dir() / "data" / "sample_corpus"});
  REQUIRE(c.size() == 2);
  CHECK(corpus_from_json(to_json(c)) == c);
  CHECK(moderator_sentences(c).size() == 40);
}

TEST_CASE("corpus_stats counts unique speakers by identity") {
  const Corpus c = load_corpus({testing::source_dir() / "data" / "sample_corpus"});
  const CorpusStats st = corpus_stats(c);
  CHECK(st.totals.sessions == 2);
  CHECK(st.totals.speaker_slots == 9);
  CHECK(st.totals.unique_speakers == 7);
  CHECK(st.totals.moderator_sentences == 40);
  std::size_t sentences = 0, tokens = 0;
  for (const auto& s : c)
    for (const auto& g : s.segments)
      for (const auto& u : g.utterances) {
        sentences += u.sentences.size();
        tokens += u.token_count;
      }
  CHECK(st.totals.sentences == sentences);
  CHECK(st.totals.tokens == tokens);
  const std::string csv = stats_csv(st);
  CHECK(csv.find("total") != std::string::npos);
}
