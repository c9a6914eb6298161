#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "modlab/error.hpp"
#include "modlab/io.hpp"
#include "modlab/pipeline.hpp"

namespace {

struct Flags {
  std::optional<std::string> config;
  std::vector<std::string> corpus;
  std::optional<std::string> cache_dir, backend, model, granularity, decisions, out, counting, embedder, reducer,
      parse_command, ratings, comparison_source;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> k_min, k_max, min_docs, max_in_flight;
  std::optional<double> low, high;
};

void add_flags(CLI::App& app, Flags& f) {
  app.add_option("--config", f.config, "JSON config file; flags override its keys");
  app.add_option("--corpus,corpus", f.corpus, "Session files or directories (ingest)");
  app.add_option("--cache-dir", f.cache_dir, "Response cache directory");
  app.add_option("--backend", f.backend, "live | mock | replay");
  app.add_option("--model", f.model, "Model id sent to the backend");
  app.add_option("--seed", f.seed, "Seed for mock answers and clustering");
  app.add_option("--k-min", f.k_min, "Smallest cluster count");
  app.add_option("--k-max", f.k_max, "Largest cluster count");
  app.add_option("--threshold-low", f.low, "Cells below this probability are dropped");
  app.add_option("--threshold-high", f.high, "Cells at or above this probability are expanded");
  app.add_option("--granularity", f.granularity, "session | segment");
  app.add_option("--decisions", f.decisions, "Cluster decisions JSON for build-taxonomy");
  app.add_option("--out", f.out, "Output directory");
  app.add_option("--motive-counting", f.counting, "all_listed | first_listed");
  app.add_option("--embedder", f.embedder, "term-frequency | http");
  app.add_option("--reducer", f.reducer, "umap | pca | identity");
  app.add_option("--min-docs", f.min_docs, "Minimum documents per cell for clustering");
  app.add_option("--parse-command", f.parse_command, "Shell command that reduces a rationale to a phrase");
  app.add_option("--ratings", f.ratings, "Human ratings CSV (unit,rater,label) for agreement");
  app.add_option("--max-in-flight", f.max_in_flight, "Concurrent backend requests");
  app.add_option("--comparison-source", f.comparison_source, "club | volunteer | any");
}

modlab::pipeline::RunConfig build_config(const Flags& f) {
  using namespace modlab;
  pipeline::RunConfig c;
  if (f.config) pipeline::apply_config_json(c, nlohmann::json::parse(io::read_text(*f.config)));
  nlohmann::json o = nlohmann::json::object();
  if (!f.corpus.empty()) o["corpus"] = f.corpus;
  if (f.cache_dir) o["cache_dir"] = *f.cache_dir;
  if (f.backend) o["backend"] = *f.backend;
  if (f.model) o["model"] = *f.model;
  if (f.seed) o["seed"] = *f.seed;
  if (f.k_min) o["k_min"] = *f.k_min;
  if (f.k_max) o["k_max"] = *f.k_max;
  if (f.low) o["threshold_low"] = *f.low;
  if (f.high) o["threshold_high"] = *f.high;
  if (f.granularity) o["granularity"] = *f.granularity;
  if (f.decisions) o["decisions"] = *f.decisions;
  if (f.out) o["out"] = *f.out;
  if (f.counting) o["motive_counting"] = *f.counting;
  if (f.embedder) o["embedder"] = *f.embedder;
  if (f.reducer) o["reducer"] = *f.reducer;
  if (f.min_docs) o["min_docs"] = *f.min_docs;
  if (f.parse_command) o["parse_command"] = *f.parse_command;
  if (f.ratings) o["ratings"] = *f.ratings;
  if (f.max_in_flight) o["max_in_flight"] = *f.max_in_flight;
  if (f.comparison_source) o["comparison_source"] = *f.comparison_source;
  pipeline::apply_config_json(c, o);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace modlab;
  CLI::App app{"Moderation strategy analysis pipeline"};
  app.require_subcommand(1);
  Flags flags;
  std::optional<pipeline::Stage> chosen;
  const pipeline::Stage stages[] = {
      pipeline::Stage::ingest,          pipeline::Stage::annotate_whow, pipeline::Stage::discover,
      pipeline::Stage::build_taxonomy,  pipeline::Stage::annotate_eslmod, pipeline::Stage::score_quality,
      pipeline::Stage::analyze,         pipeline::Stage::report,        pipeline::Stage::all};
  const char* descriptions[] = {"Validate session files and write the corpus and its statistics",
                                "Label moderator sentences with motives, dialogue act and target",
                                "Build the joint matrix and cluster rationales of prominent cells",
                                "Turn cluster decisions into a strategy taxonomy",
                                "Label moderator sentences with taxonomy strategies",
                                "Score dialogue quality per non-moderator speaker",
                                "Run frequency, comparison and strategy effect analyses",
                                "Render the markdown report and CSV tables",
                                "Run every stage in order"};
  for (std::size_t i = 0; i < std::size(stages); ++i) {
    const auto stage = stages[i];
    auto* sub = app.add_subcommand(std::string(pipeline::to_string(stage)), descriptions[i]);
    add_flags(*sub, flags);
    sub->callback([&chosen, stage] { chosen = stage; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : pipeline::kExitValidation;
  }
  pipeline::RunConfig config;
  try {
    config = build_config(flags);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return pipeline::kExitValidation;
  }
  return pipeline::run_stage_status(*chosen, config, std::cout, std::cerr);
}
