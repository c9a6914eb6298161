#pragma once

// Per-cell sub-topic search over annotation rationales and the application
// of human merge/expand decisions that turns the chosen runs into a
// strategy taxonomy.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "modlab/annotation.hpp"
#include "modlab/discovery/clustering.hpp"
#include "modlab/discovery/embedding.hpp"
#include "modlab/discovery/text.hpp"
#include "modlab/taxonomy.hpp"

namespace modlab::discovery {

struct ReasonDoc {
  corpus::SentenceRef source_location;
  std::string original_reason;
  std::string reduced_phrase;
  Cell source_cell;
  std::vector<std::string> tokens;  // reduced phrase minus stopwords
  /// Rule-based phrase, kept when a parse provider produced a different one.
  std::optional<std::string> fallback_phrase;
};

/// Documents for one cell. Membership follows the matrix counting mode:
/// any listed motive, or only the first. Annotations without a reason are
/// skipped.
std::vector<ReasonDoc> build_reason_docs(const std::vector<annotation::WhowAnnotation>& annotations,
                                         Cell cell, const std::set<std::string>& stopwords,
                                         annotation::MotiveCounting mode,
                                         ParseProvider* provider = nullptr);

struct ClusterRun {
  Cell source_cell;
  std::size_t k = 0;
  ReducerParams reducer;
  std::uint64_t seed = 0;
  std::vector<std::size_t> assignments;  // doc -> cluster, clusters ordered by size
  Vectors centroids;
  std::optional<double> coherence;
  std::vector<std::optional<double>> cluster_coherence;
  std::vector<std::vector<std::string>> top_keywords;  // 5 per cluster
  std::vector<std::size_t> cluster_sizes;
  bool degenerate = false;  // k exceeded the distinct embeddings
};

nlohmann::json to_json(const ClusterRun& run);
ClusterRun cluster_run_from_json(const nlohmann::json& j);

struct SubtopicOptions {
  std::size_t k_min = 2;
  std::size_t k_max = 5;
  std::vector<std::uint64_t> seeds = {42};
  std::vector<ReducerParams> reducers = {ReducerParams{}};
  std::size_t n_init = 10;
  std::size_t min_docs = 20;
  std::size_t display_keywords = 5;
  std::size_t coherence_keywords = 10;
  std::size_t window = 10;
};

struct SubtopicResult {
  ClusterRun best;
  std::vector<ClusterRun> runs;
};

/// Embeds the documents, then for every reducer, seed and k in range
/// reduces, clusters and scores. The best run maximises coherence; ties go
/// to the smaller k, then to the earlier run. Throws DataError
/// ("insufficient data for clustering") below `min_docs` documents.
SubtopicResult propose_subtopics(Cell cell, const std::vector<ReasonDoc>& docs, Embedder& embedder,
                                 const SubtopicOptions& options = {});

// --- decisions ---------------------------------------------------------------

struct ClusterDecision {
  Cell cell;
  std::optional<std::size_t> cluster_index;  // absent for pass-through cells
  std::string decision;  // expand | merge | extend | keep | merge_to
  std::string label;
  std::optional<std::string> merge_to;
  std::string definition;
  std::vector<std::string> examples;
  std::optional<std::string> prompt_label;
  std::vector<std::string> aliases;
  bool operator==(const ClusterDecision&) const = default;
};

nlohmann::json to_json(const std::vector<ClusterDecision>& decisions);

/// Accepts a JSON array of decisions or {"decisions": [...]}.
std::vector<ClusterDecision> parse_decisions(const nlohmann::json& doc);
std::vector<ClusterDecision> load_decisions(const std::filesystem::path& path);

/// Decisions that rebuild the ten-strategy ESL moderation taxonomy from
/// runs with the reference cluster sizes.
const std::vector<ClusterDecision>& reference_decisions();

struct FinalizeResult {
  TaxonomyRegistry registry;
  std::vector<std::string> warnings;
};

/// Applies decisions to the chosen run of each cell. Every cluster of every
/// run needs exactly one decision; strategies appear in order of first
/// mention. Throws ConfigError on unknown cells or clusters, missing
/// decisions, duplicate labels, or a strategy without a definition.
FinalizeResult finalize_taxonomy(const std::vector<ClusterRun>& runs,
                                 const std::vector<ClusterDecision>& decisions);

/// Cluster report: hyper-parameters, coherence, top keywords, size and,
/// when decisions are given, the decision and refined label per cluster.
std::string cluster_report_csv(const std::vector<ClusterRun>& runs,
                               const std::vector<ClusterDecision>& decisions = {});

}  // namespace modlab::discovery
