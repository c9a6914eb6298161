#include "fixtures.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <map>
#include <numeric>

#include "modlab/llm/gateway.hpp"
#include "modlab/llm/prompts.hpp"
#include "modlab/llm/response_parser.hpp"

#ifndef MODLAB_SOURCE_DIR
#define MODLAB_SOURCE_DIR "."
#endif
#ifndef MODLAB_CLI_PATH
#define MODLAB_CLI_PATH "modlab"
#endif

namespace modlab::testing {

std::vector<annotation::WhowAnnotation> matrix_fixture(
    const std::array<std::array<std::size_t, 6>, 3>& cells, const std::array<std::size_t, 6>& act_totals) {
  std::vector<annotation::WhowAnnotation> out;
  for (std::size_t a = 0; a < 6; ++a) {
    std::vector<annotation::WhowAnnotation> col(act_totals[a]);
    for (std::size_t i = 0; i < col.size(); ++i) {
      col[i].location = {"fixture", fmt::format("act{}", a), i, 0};
      col[i].dialogue_act = kDialogueActs[a];
      col[i].reason = "The moderator asks a question.";
    }
    for (std::size_t m = 0; m < 3; ++m) {
      std::vector<std::size_t> order(col.size());
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return col[x].motives.size() < col[y].motives.size();
      });
      if (cells[m][a] > col.size()) throw std::logic_error("cell count exceeds act total");
      for (std::size_t j = 0; j < cells[m][a]; ++j) col[order[j]].motives.push_back(kMotives[m]);
    }
    out.insert(out.end(), col.begin(), col.end());
  }
  return out;
}

std::vector<annotation::EslmodAnnotation> frequency_fixture() {
  std::vector<annotation::EslmodAnnotation> out;
  std::size_t i = 0;
  for (const auto& f : kReferenceFrequencies)
    for (std::size_t n = 0; n < f.count; ++n, ++i) {
      annotation::EslmodAnnotation a;
      a.location = {"fixture", "seg", i, 0};
      a.strategy_id = f.strategy_id;
      out.push_back(a);
    }
  return out;
}

std::vector<annotation::WhowAnnotation> reason_fixture(Cell cell, const std::vector<std::size_t>& sizes) {
  static const std::vector<std::string> kPhrases = {
      "shares personal opinion viewpoint",     "provides factual information statistics",
      "agrees echoes similar thought",         "thanks participant warmly",
      "recounts childhood memory anecdote",
  };
  std::vector<annotation::WhowAnnotation> out;
  std::size_t i = 0;
  for (std::size_t g = 0; g < sizes.size(); ++g)
    for (std::size_t n = 0; n < sizes[g]; ++n, ++i) {
      annotation::WhowAnnotation a;
      a.location = {"fixture", "seg", i, 0};
      a.motives = {cell.motive};
      a.dialogue_act = cell.act;
      a.reason = "The moderator " + kPhrases.at(g) + ".";
      out.push_back(a);
    }
  return out;
}

std::vector<discovery::ClusterRun> reference_runs() {
  using M = Motive;
  using A = DialogueAct;
  struct Shape {
    Cell cell;
    std::vector<std::size_t> sizes;
  };
  const std::vector<Shape> shapes = {
      {{M::informational, A::probing}, {420, 260, 150}},
      {{M::informational, A::supplement}, {823, 292, 82}},
      {{M::social, A::supplement}, {213, 74, 52, 50}},
      {{M::social, A::utility}, {250, 58}},
  };
  std::vector<discovery::ClusterRun> runs;
  for (const auto& s : shapes) {
    discovery::ClusterRun r;
    r.source_cell = s.cell;
    r.k = s.sizes.size();
    r.cluster_sizes = s.sizes;
    r.coherence = 0.5;
    for (std::size_t c = 0; c < r.k; ++c) {
      r.assignments.insert(r.assignments.end(), s.sizes[c], c);
      r.cluster_coherence.push_back(0.5);
      r.top_keywords.push_back({"k1", "k2", "k3", "k4", "k5"});
    }
    runs.push_back(std::move(r));
  }
  return runs;
}

corpus::Session make_session(const std::string& id, bool moderated, std::size_t participants,
                             std::size_t segments, std::size_t moderator_sentences_per_segment) {
  corpus::Session s;
  s.session_id = id;
  s.source = corpus::Source::volunteer;
  s.topic = "Stress";
  s.moderated = moderated;
  if (moderated) s.speakers.push_back({"m", "Emma", corpus::Role::moderator, "English", std::nullopt});
  for (std::size_t p = 1; p <= participants; ++p)
    s.speakers.push_back({fmt::format("p{}", p), fmt::format("Student{}", p), corpus::Role::participant,
                          "Chinese", std::nullopt});
  for (std::size_t g = 0; g < segments; ++g) {
    corpus::Segment seg;
    seg.segment_id = fmt::format("seg{}", g + 1);
    if (moderated) {
      corpus::Utterance u{"m", {}, 0};
      for (std::size_t k = 0; k < moderator_sentences_per_segment; ++k)
        u.sentences.push_back(fmt::format("Moderator sentence {} of segment {}.", k + 1, g + 1));
      u.token_count = 5 * u.sentences.size();
      seg.utterances.push_back(u);
    }
    for (std::size_t p = 1; p <= participants; ++p) {
      corpus::Utterance u{fmt::format("p{}", p), {fmt::format("I think point number {} matters.", p)}, 5};
      seg.utterances.push_back(u);
    }
    s.segments.push_back(std::move(seg));
  }
  return s;
}

double adjusted_rand_index(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::map<std::pair<std::size_t, std::size_t>, double> n;
  std::map<std::size_t, double> rows, cols;
  for (std::size_t i = 0; i < a.size(); ++i) {
    n[{a[i], b[i]}] += 1;
    rows[a[i]] += 1;
    cols[b[i]] += 1;
  }
  auto c2 = [](double x) { return x * (x - 1) / 2; };
  double index = 0, sa = 0, sb = 0;
  for (const auto& [_, v] : n) index += c2(v);
  for (const auto& [_, v] : rows) sa += c2(v);
  for (const auto& [_, v] : cols) sb += c2(v);
  const double expected = sa * sb / c2(static_cast<double>(a.size()));
  const double max_index = (sa + sb) / 2;
  if (max_index == expected) return 1.0;
  return (index - expected) / (max_index - expected);
}

std::filesystem::path source_dir() { return MODLAB_SOURCE_DIR; }
std::filesystem::path cli_path() { return MODLAB_CLI_PATH; }

std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("modlab_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

ReplayFixture load_replay_fixture() {
  const auto dir = source_dir() / "tests" / "fixtures" / "replay";
  ReplayFixture f;
  f.corpus = corpus::load_corpus({dir / "corpus"});
  f.quality = quality::read_quality_jsonl(dir / "quality.jsonl");
  f.eslmod = annotation::read_eslmod_jsonl(dir / "eslmod.jsonl");
  return f;
}

void build_replay_cache(const ReplayFixture& fixture, const std::filesystem::path& dir,
                        const std::string& model_id) {
  const llm::ResponseCache cache(dir);
  auto store = [&](std::string prompt, llm::SchemaTag tag, std::string answer) {
    llm::PromptRequest req;
    req.prompt_text = std::move(prompt);
    req.model_id = model_id;
    req.schema_tag = tag;
    cache.put({llm::cache_key(req), req, std::move(answer), "2025-01-01T00:00:00Z"});
  };
  for (const auto& r : fixture.quality) {
    const auto* session = corpus::find_session(fixture.corpus, r.session_id);
    llm::QualityLabel label{r.overall, r.topic_management, r.tone_appropriateness,
                            r.conversation_opening, r.conversation_closing, r.rationale};
    store(llm::build_quality_prompt(*session, r.segment_id, r.speaker_id), llm::SchemaTag::quality,
          llm::serialize_answer(label));
  }
  for (const auto& a : fixture.eslmod) {
    const auto* session = corpus::find_session(fixture.corpus, a.location.session_id);
    llm::EslmodLabel label{a.strategy_id, a.target_speaker, a.reason};
    store(llm::build_eslmod_prompt(*session, a.location, eslmod_taxonomy()), llm::SchemaTag::eslmod,
          llm::serialize_answer(label));
  }
}

}  // namespace modlab::testing
