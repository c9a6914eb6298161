#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "modlab/analysis/effects.hpp"
#include "modlab/annotation.hpp"
#include "modlab/corpus.hpp"

namespace modlab::analysis {

inline constexpr std::array<std::string_view, 7> kReportSections = {
    "Corpus statistics",
    "Motive and dialogue act distribution",
    "Dialogue quality by condition",
    "Strategy frequencies",
    "Quality difference by topic",
    "Dialogue quality controlling for speakers",
    "Strategy effects on segment quality",
};

struct ReportInputs {
  std::optional<corpus::CorpusStats> stats;
  std::optional<annotation::JointMatrix> matrix;
  std::optional<annotation::ProminencePartition> prominence;
  std::optional<ComparisonResult> comparison;          // Pairing::all
  std::optional<FrequencyTable> frequencies;
  std::optional<ComparisonResult> topic_comparison;    // Pairing::by_topic
  std::optional<ComparisonResult> speaker_comparison;  // Pairing::by_speaker
  std::optional<std::vector<StrategyEffect>> effects;
  std::optional<double> agreement_alpha;
};

struct ReportBundle {
  std::string markdown;
  std::map<std::string, std::string> tables;  // file name -> CSV text
};

/// Markdown with one section per available result plus CSV tables. Numbers
/// carry two decimals; significant results are bold with an asterisk.
/// Throws DataError when no result is available.
ReportBundle render_report(const ReportInputs& inputs);

/// Writes report.md and tables/*.csv under `dir`.
void write_report(const ReportBundle& bundle, const std::filesystem::path& dir);

}  // namespace modlab::analysis
