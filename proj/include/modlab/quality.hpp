#pragma once

// Per-speaker dialogue quality: an overall score and four macro features,
// each an integer from 1 to 5, for a whole session or a single segment.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "modlab/corpus.hpp"
#include "modlab/llm/gateway.hpp"
#include "modlab/llm/prompts.hpp"

namespace modlab::quality {

enum class Granularity { session, segment };

std::string_view to_string(Granularity g);
Granularity granularity_from_string(std::string_view s);

enum class Metric { overall, topic_management, tone, opening, closing };

inline constexpr Metric kMetrics[] = {Metric::overall, Metric::topic_management, Metric::tone,
                                      Metric::opening, Metric::closing};

std::string_view to_string(Metric m);       // "overall", "topic_management", ...
std::string_view metric_title(Metric m);    // "Overall", "Topic Management", ...
Metric metric_from_string(std::string_view s);

struct SpeakerQualityScores {
  std::string session_id;
  std::optional<std::string> segment_id;  // nullopt for session scope
  std::string speaker_id;
  int overall = 0;
  int topic_management = 0;
  int tone_appropriateness = 0;
  int conversation_opening = 0;
  int conversation_closing = 0;
  std::string rationale;
  std::string model_id;
  std::string prompt_hash;

  int score(Metric m) const;
  /// Throws ValidationError unless every score lies in [1, 5].
  void validate() const;
  bool operator==(const SpeakerQualityScores&) const = default;
};

struct QualityOptions {
  std::string model_id = "gpt-4o";
  llm::Decoding decoding;
  llm::QualityPromptOptions prompt;
};

/// Scores one speaker. Throws DataError when the speaker is absent or
/// silent in scope, llm::ParseError when the answer stays invalid after the
/// repair prompt, and GatewayError on backend failure.
SpeakerQualityScores score_speaker(const corpus::Session& session,
                                   const std::optional<std::string>& segment_id,
                                   std::string_view speaker_id, llm::Gateway& gateway,
                                   const QualityOptions& options = {});

struct ScoringFailure {
  std::string session_id;
  std::optional<std::string> segment_id;
  std::string speaker_id;
  std::string error;
};

struct ScoringRun {
  std::vector<SpeakerQualityScores> scores;  // corpus order
  std::vector<ScoringFailure> failures;
  std::size_t attempted = 0;
};

/// One record per non-moderator speaker with at least one utterance in each
/// scope. Parse and data failures are collected; backend failures propagate.
ScoringRun score_all(const corpus::Corpus& corpus, Granularity granularity, llm::Gateway& gateway,
                     const QualityOptions& options = {});

nlohmann::json to_json(const SpeakerQualityScores& s);
SpeakerQualityScores quality_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ScoringRun& run);  // summary without the scores

/// Throws ValidationError on duplicate (scope, speaker) records.
void write_quality_jsonl(const std::filesystem::path& path,
                         const std::vector<SpeakerQualityScores>& rows);
std::vector<SpeakerQualityScores> read_quality_jsonl(const std::filesystem::path& path);

}  // namespace modlab::quality
