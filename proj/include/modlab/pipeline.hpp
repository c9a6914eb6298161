#pragma once

// File-based pipeline stages. Each stage reads the outputs of earlier
// stages from the output directory, writes its own, and records input and
// output hashes in run_manifest.json.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "modlab/annotation.hpp"
#include "modlab/llm/gateway.hpp"
#include "modlab/quality.hpp"

namespace modlab::pipeline {

enum class Stage {
  ingest,
  annotate_whow,
  discover,
  build_taxonomy,
  annotate_eslmod,
  score_quality,
  analyze,
  report,
  all,
};

std::string_view to_string(Stage s);  // CLI spelling, e.g. "annotate-whow"
Stage stage_from_string(std::string_view s);

struct RunConfig {
  std::vector<std::filesystem::path> corpus_paths;
  std::optional<std::filesystem::path> cache_dir;
  llm::BackendKind backend = llm::BackendKind::mock;
  std::string model_id = "gpt-4o";
  std::uint64_t seed = 42;
  std::size_t k_min = 2;
  std::size_t k_max = 5;
  double threshold_low = 0.025;
  double threshold_high = 0.095;
  quality::Granularity granularity = quality::Granularity::segment;
  std::optional<std::filesystem::path> decisions;
  std::filesystem::path out = "out";

  annotation::MotiveCounting counting = annotation::MotiveCounting::all_listed;
  std::string embedder = "term-frequency";  // or "http"
  std::string embedding_model = "text-embedding-3-small";
  std::string reducer = "umap";
  std::size_t n_neighbors = 10;
  double min_dist = 0.1;
  std::size_t min_docs = 20;
  std::optional<std::string> parse_command;
  std::size_t max_in_flight = 4;
  std::optional<std::filesystem::path> ratings;  // CSV unit,rater,label
  std::optional<corpus::Source> comparison_source = corpus::Source::volunteer;

  /// Throws ConfigError on low >= high or a k range outside [2, 5].
  void validate() const;
};

/// Applies keys of a JSON config document onto `config`. Unknown keys are
/// a ConfigError.
void apply_config_json(RunConfig& config, const nlohmann::json& doc);

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitPrerequisite = 2;
inline constexpr int kExitBackend = 3;

/// Runs one stage (or every stage for Stage::all). Throws
/// PrerequisiteError when an input produced by an earlier stage is missing.
void run_stage(Stage stage, const RunConfig& config, std::ostream& log);

/// run_stage with errors mapped to exit codes and reported on `err`.
int run_stage_status(Stage stage, const RunConfig& config, std::ostream& log, std::ostream& err);

/// Reads ratings as CSV rows "unit,rater,label" (header optional).
std::vector<std::vector<std::optional<std::string>>> read_ratings_csv(const std::filesystem::path& path);

}  // namespace modlab::pipeline
