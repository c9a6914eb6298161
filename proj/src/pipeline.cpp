#include "modlab/pipeline.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "modlab/analysis/effects.hpp"
#include "modlab/analysis/report.hpp"
#include "modlab/analysis/serialize.hpp"
#include "modlab/analysis/stats.hpp"
#include "modlab/discovery/subtopics.hpp"
#include "modlab/error.hpp"
#include "modlab/hashing.hpp"
#include "modlab/io.hpp"
#include "modlab/taxonomy.hpp"

namespace modlab::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::pair<Stage, std::string_view> kStageNames[] = {
    {Stage::ingest, "ingest"},
    {Stage::annotate_whow, "annotate-whow"},
    {Stage::discover, "discover"},
    {Stage::build_taxonomy, "build-taxonomy"},
    {Stage::annotate_eslmod, "annotate-eslmod"},
    {Stage::score_quality, "score-quality"},
    {Stage::analyze, "analyze"},
    {Stage::report, "report"},
    {Stage::all, "all"},
};

// Output layout, relative to the output directory.
const fs::path kCorpus = "corpus/corpus.json";
const fs::path kStats = "corpus/stats.csv";
const fs::path kWhow = "annotations/whow.jsonl";
const fs::path kWhowQuality = "annotations/whow_quality.json";
const fs::path kMatrix = "discovery/matrix.json";
const fs::path kMatrixCsv = "discovery/joint_matrix.csv";
const fs::path kProminence = "discovery/prominence.json";
const fs::path kRuns = "discovery/runs.json";
const fs::path kBestRuns = "discovery/best_runs.json";
const fs::path kClusterReport = "discovery/cluster_report.csv";
const fs::path kDiscoverySummary = "discovery/summary.json";
const fs::path kTaxonomy = "taxonomy/taxonomy.json";
const fs::path kTaxonomySummary = "taxonomy/summary.json";
const fs::path kTaxonomyReport = "taxonomy/cluster_report.csv";
const fs::path kEslmod = "annotations/eslmod.jsonl";
const fs::path kEslmodQuality = "annotations/eslmod_quality.json";
const fs::path kQuality = "quality/quality.jsonl";
const fs::path kQualitySummary = "quality/summary.json";
const fs::path kResults = "analysis/results.json";
const fs::path kSegmentQuality = "analysis/segment_quality.jsonl";
const fs::path kReportDir = "report";
const fs::path kManifest = "run_manifest.json";

/// Files a stage read and wrote; paths inside the output directory are
/// relative to it, external inputs are kept as given.
struct StageRecord {
  std::vector<fs::path> inputs;
  std::vector<fs::path> outputs;
};

std::string display_path(const fs::path& p) { return p.lexically_normal().generic_string(); }

void write_json(const fs::path& path, const json& doc) { io::write_text_atomic(path, doc.dump(2) + "\n"); }

json read_json(const fs::path& path) {
  try {
    return json::parse(io::read_text(path));
  } catch (const json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

class Context {
 public:
  Context(const RunConfig& config, std::ostream& log) : config_(config), log_(log) {}

  fs::path at(const fs::path& rel) const { return config_.out / rel; }
  bool has(const fs::path& rel) const { return fs::exists(at(rel)); }

  /// Path of a required input; PrerequisiteError names the producing stage.
  fs::path need(const fs::path& rel, Stage producer) {
    if (!has(rel))
      throw PrerequisiteError(fmt::format("missing {}; run the '{}' stage first", display_path(at(rel)),
                                          to_string(producer)),
                              std::string(to_string(producer)));
    record_.inputs.push_back(rel);
    return at(rel);
  }
  std::optional<fs::path> want(const fs::path& rel) {
    if (!has(rel)) return std::nullopt;
    record_.inputs.push_back(rel);
    return at(rel);
  }
  fs::path produce(const fs::path& rel) {
    record_.outputs.push_back(rel);
    return at(rel);
  }
  void external_input(const fs::path& p) { external_.push_back(p); }

  const RunConfig& config() const { return config_; }
  std::ostream& log() { return log_; }

  void commit(Stage stage) const;
  void reset() {
    record_ = {};
    external_.clear();
  }

 private:
  const RunConfig& config_;
  std::ostream& log_;
  StageRecord record_;
  std::vector<fs::path> external_;
};

json config_summary(const RunConfig& c) {
  return {{"backend", llm::to_string(c.backend)},
          {"model_id", c.model_id},
          {"seed", c.seed},
          {"k_range", {c.k_min, c.k_max}},
          {"thresholds", {{"low", c.threshold_low}, {"high", c.threshold_high}}},
          {"granularity", quality::to_string(c.granularity)},
          {"motive_counting", annotation::to_string(c.counting)},
          {"embedder", c.embedder},
          {"reducer", {{"kind", c.reducer}, {"n_neighbors", c.n_neighbors}, {"min_dist", c.min_dist}}},
          {"min_docs", c.min_docs},
          {"decisions", c.decisions ? json(c.decisions->filename().generic_string()) : json("bundled")}};
}

void Context::commit(Stage stage) const {
  const fs::path manifest_path = at(kManifest);
  json manifest = fs::exists(manifest_path) ? read_json(manifest_path) : json::object();
  manifest["config"] = config_summary(config_);
  json inputs = json::object(), outputs = json::object();
  for (const auto& p : external_) {
    const fs::path shown = p.is_absolute() ? p.lexically_proximate(fs::current_path()) : p;
    inputs[display_path(shown)] = sha256_file(p);
  }
  for (const auto& rel : record_.inputs) inputs[display_path(rel)] = sha256_file(at(rel));
  for (const auto& rel : record_.outputs) outputs[display_path(rel)] = sha256_file(at(rel));
  manifest["stages"][std::string(to_string(stage))] = {{"inputs", inputs}, {"outputs", outputs}};
  write_json(manifest_path, manifest);
}

corpus::Corpus load_ingested(Context& ctx) {
  return corpus::corpus_from_json(read_json(ctx.need(kCorpus, Stage::ingest)));
}

llm::Gateway make_gateway(const RunConfig& c) {
  llm::GatewayOptions o;
  o.kind = c.backend;
  o.seed = c.seed;
  o.max_in_flight = c.max_in_flight;
  if (c.cache_dir)
    o.cache_dir = c.cache_dir;
  else if (c.backend != llm::BackendKind::mock)
    o.cache_dir = c.out / "cache";
  return llm::Gateway(o);
}

// --- stages ------------------------------------------------------------------

void ingest(Context& ctx) {
  const auto& c = ctx.config();
  if (c.corpus_paths.empty()) throw ConfigError("ingest needs at least one corpus path");
  for (const auto& p : c.corpus_paths) {
    if (fs::is_directory(p)) {
      std::vector<fs::path> files;
      for (const auto& e : fs::directory_iterator(p))
        if (e.path().extension() == ".json") files.push_back(e.path());
      std::sort(files.begin(), files.end());
      for (const auto& f : files) ctx.external_input(f);
    } else if (fs::exists(p)) {
      ctx.external_input(p);
    }
  }
  const corpus::Corpus corpus = corpus::load_corpus(c.corpus_paths);
  write_json(ctx.produce(kCorpus), corpus::to_json(corpus));
  const auto stats = corpus::corpus_stats(corpus);
  io::write_text_atomic(ctx.produce(kStats), corpus::stats_csv(stats));
  ctx.log() << fmt::format("ingest: {} sessions, {} moderator sentences\n", corpus.size(),
                           stats.totals.moderator_sentences);
}

annotation::AnnotationOptions annotation_options(const RunConfig& c) {
  annotation::AnnotationOptions o;
  o.model_id = c.model_id;
  return o;
}

void annotate_whow(Context& ctx) {
  const auto corpus = load_ingested(ctx);
  auto gateway = make_gateway(ctx.config());
  const auto run = annotation::annotate_whow(corpus, gateway, annotation_options(ctx.config()));
  annotation::write_whow_jsonl(ctx.produce(kWhow), run.annotations);
  write_json(ctx.produce(kWhowQuality), annotation::to_json(run.quality));
  ctx.log() << fmt::format("annotate-whow: {} of {} sentences annotated\n", run.quality.annotated,
                           run.quality.attempted);
}

std::string cell_file(Cell c) {
  std::string s = to_string(c);
  std::replace(s.begin(), s.end(), '/', '_');
  return s;
}

json doc_json(const discovery::ReasonDoc& d) {
  json j = {{"session_id", d.source_location.session_id},
            {"segment_id", d.source_location.segment_id},
            {"utterance_idx", d.source_location.utterance_idx},
            {"sentence_idx", d.source_location.sentence_idx},
            {"cell", to_string(d.source_cell)},
            {"reason", d.original_reason},
            {"reduced_phrase", d.reduced_phrase},
            {"tokens", d.tokens}};
  if (d.fallback_phrase) j["fallback_phrase"] = *d.fallback_phrase;
  return j;
}

std::unique_ptr<discovery::Embedder> make_embedder(const RunConfig& c) {
  if (c.embedder == "term-frequency" || c.embedder == "tf")
    return std::make_unique<discovery::TermFrequencyEmbedder>();
  if (c.embedder == "http") return discovery::HttpEmbedder::from_environment(c.embedding_model);
  throw ConfigError("unknown embedder '" + c.embedder + "'");
}

void discover(Context& ctx) {
  const auto& c = ctx.config();
  const auto corpus = load_ingested(ctx);
  const auto annotations = annotation::read_whow_jsonl(ctx.need(kWhow, Stage::annotate_whow));

  const auto matrix = annotation::joint_matrix(annotations, c.counting);
  write_json(ctx.produce(kMatrix), analysis::to_json(matrix));
  io::write_text_atomic(ctx.produce(kMatrixCsv), annotation::joint_matrix_csv(matrix));
  const auto partition = annotation::select_prominent(matrix, c.threshold_low, c.threshold_high);
  write_json(ctx.produce(kProminence), annotation::to_json(partition));

  const auto curated = discovery::curate_stopwords(corpus);
  const std::set<std::string> stopwords(curated.begin(), curated.end());
  std::unique_ptr<discovery::ParseProvider> provider;
  if (c.parse_command) provider = std::make_unique<discovery::CommandParseProvider>(*c.parse_command);
  auto embedder = make_embedder(c);

  discovery::SubtopicOptions options;
  options.k_min = c.k_min;
  options.k_max = c.k_max;
  options.seeds = {c.seed};
  discovery::ReducerParams reducer;
  reducer.kind = discovery::reducer_kind_from_string(c.reducer);
  reducer.n_neighbors = c.n_neighbors;
  reducer.min_dist = c.min_dist;
  options.reducers = {reducer};
  options.min_docs = c.min_docs;

  json all_runs = json::array(), best_runs = json::array(), summary = json::object();
  std::vector<discovery::ClusterRun> best;
  for (const Cell& cell : partition.expand) {
    const auto docs = discovery::build_reason_docs(annotations, cell, stopwords, c.counting, provider.get());
    std::vector<json> lines;
    for (const auto& d : docs) lines.push_back(doc_json(d));
    io::write_jsonl(ctx.produce(fs::path("discovery/docs") / (cell_file(cell) + ".jsonl")), lines);
    json entry = {{"documents", docs.size()}};
    try {
      auto result = discovery::propose_subtopics(cell, docs, *embedder, options);
      for (const auto& r : result.runs) all_runs.push_back(discovery::to_json(r));
      best_runs.push_back(discovery::to_json(result.best));
      best.push_back(result.best);
      entry["status"] = "clustered";
      entry["best_k"] = result.best.k;
    } catch (const DataError& e) {
      entry["status"] = "skipped";
      entry["reason"] = e.what();
    }
    summary[to_string(cell)] = entry;
    ctx.log() << fmt::format("discover: {} -> {}\n", cell_title(cell), entry["status"].get<std::string>());
  }
  write_json(ctx.produce(kRuns), all_runs);
  write_json(ctx.produce(kBestRuns), best_runs);
  io::write_text_atomic(ctx.produce(kClusterReport), discovery::cluster_report_csv(best));
  write_json(ctx.produce(kDiscoverySummary), {{"embedder", embedder->name()}, {"cells", summary}});
}

void build_taxonomy(Context& ctx) {
  const auto& c = ctx.config();
  json summary;
  TaxonomyRegistry registry;
  if (!c.decisions) {
    registry = eslmod_taxonomy();
    summary = {{"source", "bundled"}, {"warnings", json::array()}};
  } else {
    if (!fs::exists(*c.decisions)) throw ConfigError("decisions file not found: " + c.decisions->string());
    ctx.external_input(*c.decisions);
    const auto decisions = discovery::load_decisions(*c.decisions);
    std::vector<discovery::ClusterRun> runs;
    for (const auto& j : read_json(ctx.need(kBestRuns, Stage::discover))) runs.push_back(discovery::cluster_run_from_json(j));
    auto result = discovery::finalize_taxonomy(runs, decisions);
    registry = std::move(result.registry);
    summary = {{"source", "decisions"}, {"warnings", result.warnings}};
    io::write_text_atomic(ctx.produce(kTaxonomyReport), discovery::cluster_report_csv(runs, decisions));
    for (const auto& w : result.warnings) ctx.log() << "build-taxonomy: warning: " << w << "\n";
  }
  write_json(ctx.produce(kTaxonomy), registry.to_json());
  write_json(ctx.produce(kTaxonomySummary), summary);
  ctx.log() << fmt::format("build-taxonomy: {} strategies\n", registry.size());
}

TaxonomyRegistry load_taxonomy(Context& ctx) {
  return TaxonomyRegistry::from_json(read_json(ctx.need(kTaxonomy, Stage::build_taxonomy)));
}

void annotate_eslmod(Context& ctx) {
  const auto corpus = load_ingested(ctx);
  const auto taxonomy = load_taxonomy(ctx);
  auto gateway = make_gateway(ctx.config());
  const auto run = annotation::annotate_eslmod(corpus, taxonomy, gateway, annotation_options(ctx.config()));
  annotation::write_eslmod_jsonl(ctx.produce(kEslmod), run.annotations);
  write_json(ctx.produce(kEslmodQuality), annotation::to_json(run.quality));
  ctx.log() << fmt::format("annotate-eslmod: {} of {} sentences annotated\n", run.quality.annotated,
                           run.quality.attempted);
}

void score_quality(Context& ctx) {
  const auto corpus = load_ingested(ctx);
  auto gateway = make_gateway(ctx.config());
  quality::QualityOptions options;
  options.model_id = ctx.config().model_id;
  const auto run = quality::score_all(corpus, ctx.config().granularity, gateway, options);
  quality::write_quality_jsonl(ctx.produce(kQuality), run.scores);
  json summary = quality::to_json(run);
  summary["granularity"] = quality::to_string(ctx.config().granularity);
  write_json(ctx.produce(kQualitySummary), summary);
  ctx.log() << fmt::format("score-quality: {} records, {} failures\n", run.scores.size(), run.failures.size());
}

void analyze(Context& ctx) {
  const auto& c = ctx.config();
  const auto corpus = load_ingested(ctx);
  const auto taxonomy = load_taxonomy(ctx);
  const auto eslmod = annotation::read_eslmod_jsonl(ctx.need(kEslmod, Stage::annotate_eslmod));
  const auto records = quality::read_quality_jsonl(ctx.need(kQuality, Stage::score_quality));

  json results = json::object();
  json notes = json::array();
  try {
    results["frequencies"] = analysis::to_json(analysis::strategy_frequencies(eslmod, taxonomy));
  } catch (const DataError& e) {
    notes.push_back(std::string("frequencies: ") + e.what());
  }
  analysis::ComparisonOptions copt;
  copt.source = c.comparison_source;
  for (auto pairing : {analysis::Pairing::all, analysis::Pairing::by_topic, analysis::Pairing::by_speaker}) {
    const std::string key = "comparison_" + std::string(analysis::to_string(pairing));
    try {
      results[key] = analysis::to_json(analysis::compare_conditions(records, corpus, pairing, copt));
    } catch (const DataError& e) {
      notes.push_back(key + ": " + e.what());
    }
  }
  const auto seg = analysis::segment_qualities(corpus, records, true);
  std::vector<json> seg_lines;
  for (const auto& s : seg.segments) seg_lines.push_back(analysis::to_json(s));
  io::write_jsonl(ctx.produce(kSegmentQuality), seg_lines);
  for (const auto& e : seg.excluded) notes.push_back("segment excluded: " + e);
  if (!seg.segments.empty()) {
    json effects = json::array();
    for (const auto& e : analysis::strategy_effects(seg.segments, eslmod, taxonomy)) effects.push_back(analysis::to_json(e));
    results["strategy_effects"] = effects;
  } else {
    notes.push_back("strategy_effects: no scorable segments");
  }
  if (c.ratings) {
    ctx.external_input(*c.ratings);
    try {
      results["agreement_alpha"] = analysis::krippendorff_alpha(read_ratings_csv(*c.ratings));
    } catch (const DataError& e) {
      notes.push_back(std::string("agreement: ") + e.what());
    }
  }
  results["notes"] = notes;
  write_json(ctx.produce(kResults), results);
  ctx.log() << fmt::format("analyze: {} scored segments, {} notes\n", seg.segments.size(), notes.size());
}

void report(Context& ctx) {
  const auto corpus = load_ingested(ctx);
  const json results = read_json(ctx.need(kResults, Stage::analyze));
  analysis::ReportInputs in;
  in.stats = corpus::corpus_stats(corpus);
  if (auto p = ctx.want(kMatrix)) in.matrix = analysis::joint_matrix_from_json(read_json(*p));
  if (auto p = ctx.want(kProminence)) in.prominence = annotation::prominence_from_json(read_json(*p));
  if (results.contains("frequencies")) in.frequencies = analysis::frequency_table_from_json(results["frequencies"]);
  if (results.contains("comparison_all")) in.comparison = analysis::comparison_from_json(results["comparison_all"]);
  if (results.contains("comparison_by_topic"))
    in.topic_comparison = analysis::comparison_from_json(results["comparison_by_topic"]);
  if (results.contains("comparison_by_speaker"))
    in.speaker_comparison = analysis::comparison_from_json(results["comparison_by_speaker"]);
  if (results.contains("strategy_effects")) {
    std::vector<analysis::StrategyEffect> effects;
    for (const auto& e : results["strategy_effects"]) effects.push_back(analysis::strategy_effect_from_json(e));
    in.effects = std::move(effects);
  }
  if (results.contains("agreement_alpha")) in.agreement_alpha = results["agreement_alpha"].get<double>();
  const auto bundle = analysis::render_report(in);
  analysis::write_report(bundle, ctx.at(kReportDir));
  ctx.produce(kReportDir / "report.md");
  for (const auto& [name, _] : bundle.tables) ctx.produce(kReportDir / "tables" / name);
  ctx.log() << fmt::format("report: {}\n", display_path(ctx.at(kReportDir / "report.md")));
}

void run_one(Stage stage, Context& ctx) {
  ctx.reset();
  switch (stage) {
    case Stage::ingest: ingest(ctx); break;
    case Stage::annotate_whow: annotate_whow(ctx); break;
    case Stage::discover: discover(ctx); break;
    case Stage::build_taxonomy: build_taxonomy(ctx); break;
    case Stage::annotate_eslmod: annotate_eslmod(ctx); break;
    case Stage::score_quality: score_quality(ctx); break;
    case Stage::analyze: analyze(ctx); break;
    case Stage::report: report(ctx); break;
    case Stage::all: return;
  }
  ctx.commit(stage);
}

}  // namespace

std::string_view to_string(Stage s) {
  for (const auto& [stage, name] : kStageNames)
    if (stage == s) return name;
  return "all";
}

Stage stage_from_string(std::string_view s) {
  for (const auto& [stage, name] : kStageNames)
    if (name == s) return stage;
  throw ConfigError("unknown stage '" + std::string(s) + "'");
}

void RunConfig::validate() const {
  if (!(threshold_low < threshold_high))
    throw ConfigError(fmt::format("threshold low ({}) must be below high ({})", threshold_low, threshold_high));
  if (threshold_low < 0 || threshold_high > 1) throw ConfigError("thresholds must lie in [0, 1]");
  if (k_min < 2 || k_max > 5 || k_min > k_max)
    throw ConfigError(fmt::format("k range [{}, {}] must lie within [2, 5]", k_min, k_max));
  if (min_docs < 2) throw ConfigError("min_docs must be at least 2");
  if (out.empty()) throw ConfigError("output directory is empty");
}

void apply_config_json(RunConfig& c, const json& doc) {
  if (!doc.is_object()) throw ConfigError("config: expected a JSON object");
  for (const auto& [key, v] : doc.items()) {
    try {
      if (key == "corpus") {
        c.corpus_paths.clear();
        if (v.is_string()) c.corpus_paths.emplace_back(v.get<std::string>());
        else for (const auto& p : v) c.corpus_paths.emplace_back(p.get<std::string>());
      } else if (key == "cache_dir") c.cache_dir = v.get<std::string>();
      else if (key == "backend") c.backend = llm::backend_kind_from_string(v.get<std::string>());
      else if (key == "model") c.model_id = v.get<std::string>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "k_min") c.k_min = v.get<std::size_t>();
      else if (key == "k_max") c.k_max = v.get<std::size_t>();
      else if (key == "threshold_low") c.threshold_low = v.get<double>();
      else if (key == "threshold_high") c.threshold_high = v.get<double>();
      else if (key == "granularity") c.granularity = quality::granularity_from_string(v.get<std::string>());
      else if (key == "decisions") c.decisions = v.get<std::string>();
      else if (key == "out") c.out = v.get<std::string>();
      else if (key == "motive_counting") c.counting = annotation::motive_counting_from_string(v.get<std::string>());
      else if (key == "embedder") c.embedder = v.get<std::string>();
      else if (key == "embedding_model") c.embedding_model = v.get<std::string>();
      else if (key == "reducer") c.reducer = v.get<std::string>();
      else if (key == "n_neighbors") c.n_neighbors = v.get<std::size_t>();
      else if (key == "min_dist") c.min_dist = v.get<double>();
      else if (key == "min_docs") c.min_docs = v.get<std::size_t>();
      else if (key == "parse_command") c.parse_command = v.get<std::string>();
      else if (key == "max_in_flight") c.max_in_flight = v.get<std::size_t>();
      else if (key == "ratings") c.ratings = v.get<std::string>();
      else if (key == "comparison_source") {
        if (v.is_null() || v.get<std::string>() == "any") c.comparison_source.reset();
        else c.comparison_source = corpus::parse_source(v.get<std::string>());
      } else throw ConfigError("unknown config key '" + key + "'");
    } catch (const json::exception& e) {
      throw ConfigError("config key '" + key + "': " + e.what());
    }
  }
}

void run_stage(Stage stage, const RunConfig& config, std::ostream& log) {
  config.validate();
  Context ctx(config, log);
  if (stage != Stage::all) {
    run_one(stage, ctx);
    return;
  }
  for (const auto& [s, _] : kStageNames)
    if (s != Stage::all) run_one(s, ctx);
}

int run_stage_status(Stage stage, const RunConfig& config, std::ostream& log, std::ostream& err) {
  try {
    run_stage(stage, config, log);
    return kExitOk;
  } catch (const PrerequisiteError& e) {
    err << "error: " << e.what() << "\n";
    return kExitPrerequisite;
  } catch (const llm::GatewayError& e) {
    err << "backend error: " << e.what() << "\n";
    return kExitBackend;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}

std::vector<std::vector<std::optional<std::string>>> read_ratings_csv(const fs::path& path) {
  std::istringstream in(io::read_text(path));
  std::map<std::string, std::size_t> units, raters;
  std::vector<std::tuple<std::size_t, std::size_t, std::string>> cells;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string part; std::getline(ss, part, ',');) f.push_back(part);
    if (f.size() != 3) throw ValidationError(fmt::format("{}:{}: expected unit,rater,label", path.string(), n));
    if (n == 1 && f[0] == "unit") continue;
    const auto u = units.emplace(f[0], units.size()).first->second;
    const auto r = raters.emplace(f[1], raters.size()).first->second;
    cells.emplace_back(u, r, f[2]);
  }
  std::vector<std::vector<std::optional<std::string>>> m(units.size(),
                                                          std::vector<std::optional<std::string>>(raters.size()));
  for (auto& [u, r, label] : cells) m[u][r] = label;
  return m;
}

}  // namespace modlab::pipeline
