#pragma once

// Strategy frequencies, token-weighted segment quality, moderated versus
// non-moderated comparisons and per-strategy effects on segment quality.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "modlab/analysis/stats.hpp"
#include "modlab/annotation.hpp"
#include "modlab/corpus.hpp"
#include "modlab/quality.hpp"
#include "modlab/taxonomy.hpp"

namespace modlab::analysis {

// --- frequencies -------------------------------------------------------------

struct FrequencyRow {
  std::string strategy_id;
  std::string name;
  std::size_t count = 0;
  double percent = 0;
};

struct FrequencyTable {
  std::vector<FrequencyRow> rows;  // count descending, taxonomy order on ties
  std::size_t total = 0;
};

/// Throws DataError on empty input or on a strategy id missing from the
/// taxonomy.
FrequencyTable strategy_frequencies(const std::vector<annotation::EslmodAnnotation>& annotations,
                                    const TaxonomyRegistry& taxonomy = eslmod_taxonomy());

std::string frequencies_csv(const FrequencyTable& table);

// --- segment quality ---------------------------------------------------------

struct SpeakerContribution {
  std::string speaker_id;
  double q = 0;
  std::size_t tokens = 0;
  double weight = 0;
};

struct SegmentQuality {
  std::string session_id;
  std::string segment_id;
  double Q = 0;
  std::vector<SpeakerContribution> contributors;
};

struct SpeakerInput {
  std::string speaker_id;
  std::optional<double> q;
  std::size_t tokens = 0;
  bool moderator = false;
};

/// Q = sum_i (t_i / sum_j t_j) q_i over non-moderators with a score and
/// tokens > 0. Throws DataError("unscorable segment") if none qualify.
SegmentQuality weighted_quality(std::string session_id, std::string segment_id,
                                const std::vector<SpeakerInput>& speakers);

/// Tokens per speaker id within a segment.
std::map<std::string, std::size_t> speaker_tokens(const corpus::Segment& segment);

/// Q for one segment. A speaker's q is their record for this segment, or
/// their session record when no segment record exists.
SegmentQuality segment_quality(const corpus::Session& session, const corpus::Segment& segment,
                               const std::vector<quality::SpeakerQualityScores>& records,
                               quality::Metric metric = quality::Metric::overall);

struct SegmentQualityRun {
  std::vector<SegmentQuality> segments;
  std::vector<std::string> excluded;  // "session/segment: reason"
};

/// Q for every segment of the moderated sessions (or of all sessions).
SegmentQualityRun segment_qualities(const corpus::Corpus& corpus,
                                    const std::vector<quality::SpeakerQualityScores>& records,
                                    bool moderated_only = true,
                                    quality::Metric metric = quality::Metric::overall);

// --- condition comparisons ---------------------------------------------------

enum class Pairing { all, by_topic, by_speaker };

std::string_view to_string(Pairing p);
Pairing pairing_from_string(std::string_view s);

struct ComparisonRow {
  quality::Metric metric = quality::Metric::overall;
  double mean_moderated = 0;
  double mean_non_moderated = 0;
  std::optional<double> t;
  std::optional<double> df;
  std::optional<double> p_one_tailed;  // alternative: moderated > non-moderated
  bool significant = false;            // p_one_tailed < alpha
  std::size_t n_moderated = 0;
  std::size_t n_non_moderated = 0;
};

struct TopicDelta {
  std::string topic;
  quality::Metric metric = quality::Metric::overall;
  double mean_moderated = 0;
  double mean_non_moderated = 0;
  double delta = 0;
};

struct ComparisonOptions {
  /// Sessions outside this source are ignored; nullopt keeps every session.
  std::optional<corpus::Source> source = corpus::Source::volunteer;
  Variance variance = Variance::welch;
  double alpha = 0.05;
};

struct ComparisonResult {
  Pairing pairing = Pairing::all;
  std::vector<ComparisonRow> rows;  // one per metric
  std::vector<TopicDelta> topic_deltas;  // by_topic only, topic then metric order
};

/// Units are sessions (all, by_topic) or speakers present in both
/// conditions (by_speaker). A session's value is the mean over its scored
/// non-moderator speakers. Throws DataError when a condition is empty.
ComparisonResult compare_conditions(const std::vector<quality::SpeakerQualityScores>& records,
                                    const corpus::Corpus& corpus, Pairing pairing,
                                    const ComparisonOptions& options = {});

std::string comparisons_csv(const std::vector<ComparisonResult>& results);
std::string topic_deltas_csv(const ComparisonResult& result);

// --- strategy effects --------------------------------------------------------

struct StrategyEffect {
  std::string strategy_id;
  std::string name;
  std::optional<double> mean_with;
  std::optional<double> mean_without;
  std::optional<double> delta;
  std::optional<double> t_stat;
  std::optional<double> df;
  std::optional<double> p_value;  // two-tailed
  std::size_t n_with = 0;
  std::size_t n_without = 0;
  bool flagged = false;
  std::string note;
};

/// A segment is "with m" when at least one moderator sentence in it carries
/// strategy m. Rows sort by mean_with descending; rows without a mean go
/// last. Strategies present or absent in fewer than two segments, or with
/// zero variance, are flagged with a null p.
std::vector<StrategyEffect> strategy_effects(const std::vector<SegmentQuality>& segments,
                                             const std::vector<annotation::EslmodAnnotation>& annotations,
                                             const TaxonomyRegistry& taxonomy = eslmod_taxonomy(),
                                             Variance variance = Variance::welch);

std::string strategy_effects_csv(const std::vector<StrategyEffect>& effects);

}  // namespace modlab::analysis
