// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "modlab/analysis/effects.hpp"
#include "modlab/analysis/report.hpp"
#include "modlab/analysis/stats.hpp"
#include "modlab/annotation.hpp"
#include "modlab/discovery/clustering.hpp"
#include "modlab/io.hpp"
#include "modlab/llm/prompts.hpp"
#include "modlab/pipeline.hpp"
#include "modlab/quality.hpp"

using namespace modlab;
namespace fs = std::filesystem;

namespace {

/// Collects failed checks for one criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    ++total_;
    if (!ok) failures_.push_back(what);
  }
  bool ok() const { return failures_.empty(); }
  std::string summary() const {
    if (failures_.empty()) return fmt::format("{} checks", total_);
    std::string s = fmt::format("{} of {} checks failed: {}", failures_.size(), total_, failures_.front());
    for (std::size_t i = 1; i < std::min<std::size_t>(failures_.size(), 4); ++i) s += "; " + failures_[i];
    return s;
  }

 private:
  std::size_t total_ = 0;
  std::vector<std::string> failures_;
};

// --- printed tables ----------------------------------------------------------

struct Printed {
  double p;
  std::size_t n;
};

// Joint motive x act table as printed: probability (count).
const Printed kPrintedCells[3][6] = {
    {{0.26, 838}, {0.01, 17}, {0.00, 11}, {0.09, 290}, {0.37, 1223}, {0.01, 22}},
    {{0.01, 37}, {0.00, 2}, {0.04, 119}, {0.00, 6}, {0.01, 35}, {0.01, 19}},
    {{0.02, 68}, {0.00, 3}, {0.00, 10}, {0.02, 80}, {0.12, 401}, {0.10, 315}},
};
const Printed kPrintedMotiveTotals[3] = {{0.73, 2401}, {0.07, 218}, {0.27, 877}};
const Printed kPrintedActTotals[6] = {{0.26, 856}, {0.01, 19}, {0.04, 124}, {0.10, 342}, {0.46, 1527}, {0.13, 416}};

struct PrintedComparison {
  quality::Metric metric;
  double moderated, non_moderated;
  bool significant;
};

const PrintedComparison kPrintedComparison[] = {
    {quality::Metric::overall, 4.14, 3.41, true},
    {quality::Metric::topic_management, 4.03, 2.42, true},
    {quality::Metric::tone, 3.48, 2.68, false},
    {quality::Metric::opening, 4.25, 2.19, true},
    {quality::Metric::closing, 4.62, 2.07, true},
};

struct PrintedEffect {
  const char* strategy_id;
  double difference;
  bool starred;
};

const PrintedEffect kPrintedEffects[] = {
    {"echoing", 0.51, true},
    {"backchanneling", 0.77, false},
    {"experience_sharing", 0.12, false},
    {"coordinative_instruction", 0.17, false},
    {"social_utility", 0.07, false},
    {"acknowledgement", 0.09, false},
    {"information_probing", -1.23, false},
    {"informational_interpretation", -0.33, false},
    {"information_sharing", -0.54, false},
    {"opinion_sharing", -0.68, true},
};

// --- criteria ----------------------------------------------------------------

Check ac1() {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  const auto anns = testing::matrix_fixture();
  const auto m = annotation::joint_matrix(anns);
  const std::string csv = annotation::joint_matrix_csv(m);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (Motive mo : kMotives) {
    const auto i = static_cast<std::size_t>(mo);
    for (DialogueAct a : kDialogueActs) {
      const auto j = static_cast<std::size_t>(a);
      const auto& want = kPrintedCells[i][j];
      c.expect(m.count(mo, a) == want.n, fmt::format("count {}: {} != {}", cell_title({mo, a}), m.count(mo, a), want.n));
      c.expect(std::abs(m.probability(mo, a) - want.p) <= 0.005,
               fmt::format("probability {}: {:.4f} vs {:.2f}", cell_title({mo, a}), m.probability(mo, a), want.p));
    }
    c.expect(m.motive_total(mo) == kPrintedMotiveTotals[i].n, fmt::format("motive total {}", motive_title(mo)));
    c.expect(std::abs(m.motive_probability(mo) - kPrintedMotiveTotals[i].p) <= 0.005,
             fmt::format("motive probability {}", motive_title(mo)));
  }
  for (DialogueAct a : kDialogueActs) {
    const auto j = static_cast<std::size_t>(a);
    c.expect(m.act_totals[j] == kPrintedActTotals[j].n, fmt::format("act total {}", act_title(a)));
    c.expect(std::abs(m.act_probability(a) - kPrintedActTotals[j].p) <= 0.005,
             fmt::format("act probability {}", act_title(a)));
  }
  c.expect(m.total == 3284, fmt::format("total {}", m.total));
  c.expect(csv.find("0.26 (838)") != std::string::npos, "csv cell 0.26 (838)");
  c.expect(csv.find("0.73 (2401)") != std::string::npos, "csv row total 0.73 (2401)");
  c.expect(seconds < 1.0, fmt::format("runtime {:.3f} s", seconds));
  return c;
}

Check ac2() {
  Check c;
  const auto p = annotation::select_prominent(annotation::joint_matrix(testing::matrix_fixture()));
  using M = Motive;
  using A = DialogueAct;
  const std::set<Cell> expand = {{M::informational, A::probing},
                                 {M::informational, A::supplement},
                                 {M::social, A::supplement},
                                 {M::social, A::utility}};
  const std::set<Cell> keep = {{M::informational, A::interpretation}, {M::coordinative, A::instruction}};
  c.expect(p.expand == expand, fmt::format("expand has {} cells", p.expand.size()));
  c.expect(p.keep == keep, fmt::format("keep has {} cells", p.keep.size()));
  c.expect(p.drop.size() == 12, fmt::format("drop has {} cells", p.drop.size()));
  for (const Cell& cell : p.drop)
    c.expect(!expand.count(cell) && !keep.count(cell), "drop overlaps " + cell_title(cell));
  return c;
}

Check ac3() {
  Check c;
  const auto t = analysis::strategy_frequencies(testing::frequency_fixture());
  c.expect(t.total == 3284, fmt::format("total {}", t.total));
  for (const auto& want : testing::kReferenceFrequencies) {
    const auto it = std::find_if(t.rows.begin(), t.rows.end(),
                                 [&](const analysis::FrequencyRow& r) { return r.strategy_id == want.strategy_id; });
    if (it == t.rows.end()) {
      c.expect(false, std::string("missing ") + want.strategy_id);
      continue;
    }
    c.expect(std::abs(it->percent - want.percent) <= 0.1 + 1e-9,
             fmt::format("{}: {:.2f}% vs {:.1f}%", want.strategy_id, it->percent, want.percent));
  }
  return c;
}

Check ac4() {
  Check c;
  std::mt19937_64 rng(4);
  for (int rep = 0; rep < 1000; ++rep) {
    const std::size_t n = 2 + rng() % 7;
    corpus::Session s;
    s.session_id = "s";
    s.moderated = true;
    s.speakers.push_back({"m", "M", corpus::Role::moderator, std::nullopt, std::nullopt});
    corpus::Segment seg;
    seg.segment_id = "g";
    std::vector<quality::SpeakerQualityScores> records;
    std::vector<std::pair<double, double>> oracle_terms;  // tokens, score
    seg.utterances.push_back({"m", {"Hello."}, 1 + rng() % 50});
    for (std::size_t i = 0; i < n; ++i) {
      const std::string id = "p" + std::to_string(i);
      s.speakers.push_back({id, id, corpus::Role::participant, std::nullopt, std::nullopt});
      const std::size_t tokens = 1 + rng() % 300;
      const int score = 1 + static_cast<int>(rng() % 5);
      // Split a speaker's tokens across up to three utterances.
      const std::size_t parts = 1 + rng() % 3;
      for (std::size_t k = 0; k < parts; ++k)
        seg.utterances.push_back({id, {"Words."}, tokens / parts + (k == 0 ? tokens % parts : 0)});
      records.push_back({"s", std::string("g"), id, score, score, score, score, score});
      oracle_terms.emplace_back(static_cast<double>(tokens), score);
    }
    double total = 0, q = 0;
    for (const auto& [t, _] : oracle_terms) total += t;
    for (const auto& [t, v] : oracle_terms) q += t / total * v;
    s.segments = {seg};
    const double got = analysis::segment_quality(s, s.segments[0], records).Q;
    c.expect(std::abs(got - q) < 1e-9, fmt::format("case {}: {} vs {}", rep, got, q));

    // Symmetry: utterance order does not matter.
    auto shuffled = s;
    std::shuffle(shuffled.segments[0].utterances.begin(), shuffled.segments[0].utterances.end(), rng);
    c.expect(std::abs(analysis::segment_quality(shuffled, shuffled.segments[0], records).Q - got) < 1e-9,
             fmt::format("case {}: symmetry", rep));

    // Fixed point: equal scores give that score back.
    auto flat = records;
    const int v = 1 + static_cast<int>(rng() % 5);
    for (auto& r : flat) r.overall = v;
    c.expect(analysis::segment_quality(s, s.segments[0], flat).Q == v, fmt::format("case {}: fixed point", rep));
  }
  return c;
}

Check ac5() {
  Check c;
  using analysis::welch_t;
  const auto r = welch_t({1, 2, 3, 4, 5}, {2, 3, 4, 5, 6}, 2);
  c.expect(std::abs(r.t + 1.0) < 1e-12, fmt::format("t = {}", r.t));
  c.expect(std::abs(r.df - 8.0) < 1e-12, fmt::format("df = {}", r.df));
  c.expect(std::abs(r.p - 0.3466) <= 5e-4, fmt::format("p = {:.5f}", r.p));

  const std::vector<double> a = {1, 2, 3, 4}, b = {4, 3, 2, 1, 2.5, 2.5};
  c.expect(welch_t(a, b, 2).p == 1.0, "t = 0 two-tailed p");
  c.expect(welch_t(a, b, 1).p == 0.5, "t = 0 one-tailed p");

  std::mt19937_64 rng(2);
  std::normal_distribution<double> z(0, 1);
  std::vector<double> x(100), y(100);
  for (auto& v : x) v = 2.0 + z(rng);
  for (auto& v : y) v = z(rng);
  const double power_p = welch_t(x, y, 2).p;
  c.expect(power_p < 0.001, fmt::format("2 sigma shift p = {}", power_p));

  using analysis::krippendorff_alpha;
  c.expect(krippendorff_alpha({{"a", "a"}, {"b", "b"}, {"c", "c"}, {"a", "a"}}) == 1.0, "perfect agreement");
  analysis::RatingMatrix uniform(1000);
  for (auto& u : uniform) u = {std::string(1, 'a' + rng() % 4), std::string(1, 'a' + rng() % 4)};
  const double ua = krippendorff_alpha(uniform);
  c.expect(std::abs(ua) < 0.05, fmt::format("uniform alpha = {}", ua));
  // (a,a) (a,b) (b,b) (b,b): D_o = 2/8, D_e = 30/56, alpha = 8/15.
  const double hand = krippendorff_alpha({{"a", "a"}, {"a", "b"}, {"b", "b"}, {"b", "b"}});
  c.expect(std::abs(hand - 8.0 / 15.0) < 1e-9, fmt::format("hand alpha = {}", hand));
  return c;
}

struct Synthetic {
  std::vector<analysis::SegmentQuality> segments;
  std::vector<annotation::EslmodAnnotation> annotations;
};

Synthetic injected(double effect, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0, 0.3);
  Synthetic s;
  for (int i = 0; i < 100; ++i) {
    const bool with = i < 50;
    analysis::SegmentQuality q;
    q.session_id = "syn";
    q.segment_id = "g" + std::to_string(i);
    q.Q = 3.0 + (with ? effect : 0.0) + noise(rng);
    s.segments.push_back(q);
    annotation::EslmodAnnotation a;
    a.location = {"syn", q.segment_id, 0, 0};
    a.strategy_id = with ? "echoing" : "information_probing";
    s.annotations.push_back(a);
  }
  return s;
}

const analysis::StrategyEffect* find_effect(const std::vector<analysis::StrategyEffect>& effects,
                                            const std::string& id) {
  for (const auto& e : effects)
    if (e.strategy_id == id) return &e;
  return nullptr;
}

Check ac6() {
  Check c;
  const auto s = injected(1.0, 6);
  const auto effects = analysis::strategy_effects(s.segments, s.annotations);
  const auto* e = find_effect(effects, "echoing");
  c.expect(e && e->n_with == 50 && e->n_without == 50, "50 segments per side");
  if (e && e->delta && e->p_value) {
    c.expect(*e->delta >= 0.8 && *e->delta <= 1.2, fmt::format("delta = {:.3f}", *e->delta));
    c.expect(*e->p_value < 0.05, fmt::format("p = {}", *e->p_value));
  } else {
    c.expect(false, "no estimate for the injected strategy");
  }
  auto false_positives = [](std::uint64_t first, std::uint64_t n) {
    std::size_t hits = 0;
    for (std::uint64_t seed = first; seed < first + n; ++seed) {
      const auto null = injected(0.0, seed);
      const auto* e = find_effect(analysis::strategy_effects(null.segments, null.annotations), "echoing");
      if (e && e->p_value && *e->p_value < 0.05) ++hits;
    }
    return hits;
  };
  const auto seeded = false_positives(0, 20);
  c.expect(seeded <= 2, fmt::format("{} of 20 null replications significant", seeded));
  const auto wide = false_positives(1000, 2000);
  c.expect(wide <= 200, fmt::format("{} of 2000 null replications significant", wide));
  return c;
}

std::string jsonl_text(const std::vector<quality::SpeakerQualityScores>& rows, const fs::path& path) {
  quality::write_quality_jsonl(path, rows);
  return io::read_text(path);
}

Check ac7() {
  Check c;
  const auto fx = testing::load_replay_fixture();
  const fs::path dir = testing::temp_dir("acceptance_replay");
  testing::build_replay_cache(fx, dir / "cache");

  struct Replayed {
    std::vector<quality::SpeakerQualityScores> records;
    std::vector<annotation::EslmodAnnotation> eslmod;
  };
  auto replay = [&]() {
    llm::GatewayOptions o;
    o.kind = llm::BackendKind::replay;
    o.cache_dir = dir / "cache";
    llm::Gateway g(o);
    Replayed r;
    for (auto gran : {quality::Granularity::session, quality::Granularity::segment}) {
      auto run = quality::score_all(fx.corpus, gran, g);
      if (!run.failures.empty()) throw Error("replay scoring failure: " + run.failures.front().error);
      // Only the scopes recorded in the sidecar are part of the fixture.
      for (auto& s : run.scores) r.records.push_back(std::move(s));
    }
    auto ann = annotation::annotate_eslmod(fx.corpus, eslmod_taxonomy(), g);
    r.eslmod = std::move(ann.annotations);
    return r;
  };
  const Replayed first = replay();
  const Replayed second = replay();

  c.expect(first.records.size() == fx.quality.size(),
           fmt::format("{} replayed quality records vs {} in sidecar", first.records.size(), fx.quality.size()));
  c.expect(first.eslmod.size() == fx.eslmod.size(),
           fmt::format("{} replayed strategy labels vs {} in sidecar", first.eslmod.size(), fx.eslmod.size()));
  c.expect(jsonl_text(first.records, dir / "a.jsonl") == jsonl_text(second.records, dir / "b.jsonl"),
           "quality sidecars differ between replays");
  annotation::write_eslmod_jsonl(dir / "a_eslmod.jsonl", first.eslmod);
  annotation::write_eslmod_jsonl(dir / "b_eslmod.jsonl", second.eslmod);
  c.expect(io::read_text(dir / "a_eslmod.jsonl") == io::read_text(dir / "b_eslmod.jsonl"),
           "strategy sidecars differ between replays");

  const auto cmp = analysis::compare_conditions(first.records, fx.corpus, analysis::Pairing::all);
  for (const auto& want : kPrintedComparison) {
    const auto it = std::find_if(cmp.rows.begin(), cmp.rows.end(),
                                 [&](const analysis::ComparisonRow& r) { return r.metric == want.metric; });
    if (it == cmp.rows.end()) {
      c.expect(false, fmt::format("missing {}", quality::to_string(want.metric)));
      continue;
    }
    c.expect(std::abs(it->mean_moderated - want.moderated) <= 0.005,
             fmt::format("{} moderated mean {:.3f} vs {:.2f}", quality::to_string(want.metric), it->mean_moderated,
                         want.moderated));
    c.expect(std::abs(it->mean_non_moderated - want.non_moderated) <= 0.005,
             fmt::format("{} non-moderated mean {:.3f} vs {:.2f}", quality::to_string(want.metric),
                         it->mean_non_moderated, want.non_moderated));
    c.expect(it->significant == want.significant,
             fmt::format("{} significance {} (p = {})", quality::to_string(want.metric), it->significant,
                         it->p_one_tailed ? fmt::format("{:.4f}", *it->p_one_tailed) : "NA"));
  }

  const auto segs = analysis::segment_qualities(fx.corpus, first.records);
  const auto effects = analysis::strategy_effects(segs.segments, first.eslmod);
  for (const auto& want : kPrintedEffects) {
    const auto* e = find_effect(effects, want.strategy_id);
    if (!e || !e->delta || !e->p_value) {
      c.expect(false, fmt::format("no estimate for {}", want.strategy_id));
      continue;
    }
    c.expect((*e->delta > 0) == (want.difference > 0),
             fmt::format("{} sign: {:.3f} vs {:.2f}", want.strategy_id, *e->delta, want.difference));
    c.expect((*e->p_value < 0.05) == want.starred,
             fmt::format("{} star: p = {:.4f}", want.strategy_id, *e->p_value));
  }
  return c;
}

std::map<std::string, std::string> tree_contents(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) out[fs::relative(e.path(), root).generic_string()] = io::read_text(e.path());
  return out;
}

Check ac8() {
  Check c;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::mt19937_64 rng(1000 + seed);
    std::normal_distribution<double> z(0, 1);
    discovery::Vectors v;
    std::vector<std::size_t> truth;
    for (std::size_t b = 0; b < 2; ++b)
      for (int i = 0; i < 60; ++i) {
        discovery::Vector x(4);
        for (auto& xi : x) xi = z(rng);
        x[0] += b ? 10.0 : 0.0;
        x[1] += b ? 10.0 : 0.0;  // centres 10 * sqrt(2) sigma apart
        v.push_back(x);
        truth.push_back(b);
      }
    const auto r = discovery::cluster_kmeans(v, 2, seed);
    const double ari = testing::adjusted_rand_index(r.assignments, truth);
    c.expect(ari == 1.0, fmt::format("seed {}: ARI {}", seed, ari));
  }

  std::vector<std::map<std::string, std::string>> trees;
  for (const char* name : {"acceptance_discover_a", "acceptance_discover_b"}) {
    pipeline::RunConfig cfg;
    cfg.corpus_paths = {testing::source_dir() / "data" / "sample_corpus"};
    cfg.out = testing::temp_dir(name);
    cfg.min_docs = 6;
    std::ostringstream log;
    for (auto s : {pipeline::Stage::ingest, pipeline::Stage::annotate_whow, pipeline::Stage::discover})
      pipeline::run_stage(s, cfg, log);
    trees.push_back(tree_contents(cfg.out / "discovery"));
    c.expect(log.str().find("clustered") != std::string::npos, "discover clustered no cell");
  }
  c.expect(!trees[0].empty() && trees[0] == trees[1], "discover outputs differ between runs");
  return c;
}

Check ac9() {
  Check c;
  std::vector<std::string> manifests;
  for (const char* name : {"acceptance_smoke_a", "acceptance_smoke_b"}) {
    pipeline::RunConfig cfg;
    cfg.corpus_paths = {testing::source_dir() / "data" / "sample_corpus"};
    cfg.out = testing::temp_dir(name);
    std::ostringstream log, err;
    const auto start = std::chrono::steady_clock::now();
    const int code = pipeline::run_stage_status(pipeline::Stage::all, cfg, log, err);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.expect(code == pipeline::kExitOk, fmt::format("exit {}: {}", code, err.str()));
    c.expect(seconds < 60.0, fmt::format("runtime {:.1f} s", seconds));
    if (code != pipeline::kExitOk) return c;
    const std::string report = io::read_text(cfg.out / "report" / "report.md");
    for (const auto& title : analysis::kReportSections)
      c.expect(report.find("\n## " + std::string(title) + "\n") != std::string::npos,
               "missing section " + std::string(title));
    manifests.push_back(io::read_text(cfg.out / "run_manifest.json"));
  }
  c.expect(manifests.size() == 2 && manifests[0] == manifests[1], "manifests differ between runs");
  return c;
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

std::string between(const std::string& text, const std::string& open, const std::string& close) {
  const auto b = text.find(open);
  if (b == std::string::npos) return {};
  const auto e = text.find(close, b + open.size());
  if (e == std::string::npos) return {};
  return text.substr(b + open.size(), e - b - open.size());
}

void golden(Check& c, const std::string& prompt, const fs::path& path) {
  if (std::getenv("MODLAB_UPDATE_GOLDEN")) io::write_text_atomic(path, prompt);
  if (!fs::exists(path)) {
    c.expect(false, "missing golden file " + path.filename().string());
    return;
  }
  c.expect(io::read_text(path) == prompt, path.filename().string() + " differs from the generated prompt");
}

Check ac10() {
  Check c;
  const auto corpus = corpus::load_corpus({testing::source_dir() / "data" / "sample_corpus"});
  const auto& session = *corpus::find_session(corpus, "stress_mod_01");
  const corpus::SentenceRef ref{"stress_mod_01", "s2", 6, 1};
  const std::string whow = llm::build_whow_prompt(session, ref);
  const std::string eslmod = llm::build_eslmod_prompt(session, ref, eslmod_taxonomy());
  const fs::path dir = testing::source_dir() / "tests" / "golden";
  golden(c, whow, dir / "whow_prompt.txt");
  golden(c, eslmod, dir / "eslmod_prompt.txt");

  const auto roster = llm::target_speaker_options(session);
  for (const auto* p : {&whow, &eslmod}) {
    const std::string& text = *p;
    const std::string kind = p == &whow ? "whow" : "eslmod";
    c.expect(text.find("Your role is an annotator") != std::string::npos, kind + ": role");
    c.expect(text.find("The topic is \"" + session.topic + "\"") != std::string::npos, kind + ": topic");
    const std::string prior = between(text, "utterances prior):\n", "Target sentence:");
    const std::string post = between(text, "after the target):\n", "Please answer");
    c.expect(count(prior, "(moderator): ") + count(prior, "(participant): ") == 5, kind + ": five prior lines");
    c.expect(count(post, "(moderator): ") + count(post, "(participant): ") == 2, kind + ": two post lines");
    c.expect(text.find("Target sentence:\n\nEmma (moderator): " + session.segments[1].utterances[6].sentences[1]) !=
                 std::string::npos,
             kind + ": target sentence");
    const std::string instruction = text.substr(text.find("Please answer only for the target sentence with the JSON format:"));
    for (const auto& option : roster)
      c.expect(instruction.find("\"" + option + "\"") != std::string::npos, kind + ": roster option " + option);
  }
  auto defined_with_examples = [&](std::string_view definition) {
    const auto pos = whow.find(std::string(definition));
    return pos != std::string::npos && whow.compare(pos + definition.size(), 12, "\nexamples: \"") == 0;
  };
  for (Motive m : kMotives)
    c.expect(defined_with_examples(motive_definition(m)), "whow: motive " + std::string(motive_title(m)));
  for (DialogueAct a : kDialogueActs)
    c.expect(defined_with_examples(act_definition(a)), "whow: act " + std::string(act_title(a)));
  for (const auto& s : eslmod_taxonomy().strategies()) {
    c.expect(eslmod.find(s.definition) != std::string::npos, "eslmod: definition of " + s.id);
    for (const auto& ex : s.examples) c.expect(eslmod.find(ex) != std::string::npos, "eslmod: example of " + s.id);
  }
  return c;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Check()>>> criteria = {
      {"AC1 joint matrix reproduction", ac1},
      {"AC2 prominence partition", ac2},
      {"AC3 strategy frequency reproduction", ac3},
      {"AC4 segment quality oracle", ac4},
      {"AC5 statistics correctness", ac5},
      {"AC6 effect recovery", ac6},
      {"AC7 replay of reference aggregates", ac7},
      {"AC8 clustering determinism", ac8},
      {"AC9 pipeline smoke run", ac9},
      {"AC10 prompt fidelity", ac10},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    std::string line;
    bool ok = false;
    try {
      const Check c = run();
      ok = c.ok();
      line = c.summary();
    } catch (const std::exception& e) {
      line = std::string("exception: ") + e.what();
    }
    if (!ok) ++failed;
    std::cout << (ok ? "PASS " : "FAIL ") << name << " (" << line << ")" << std::endl;
  }
  std::cout << fmt::format("{} of {} criteria passed", criteria.size() - failed, criteria.size()) << std::endl;
  return failed == 0 ? 0 : 1;
}
