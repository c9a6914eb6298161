#pragma once

// Per-sentence moderator annotation under the WHoW and ESLMOD label sets,
// the motive x dialogue-act matrix, and the prominence partition of its
// cells.

#include <array>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "modlab/corpus.hpp"
#include "modlab/llm/gateway.hpp"
#include "modlab/llm/prompts.hpp"
#include "modlab/llm/response_parser.hpp"
#include "modlab/schema.hpp"
#include "modlab/taxonomy.hpp"

namespace modlab::annotation {

using corpus::SentenceRef;

struct WhowAnnotation {
  SentenceRef location;
  std::vector<Motive> motives;
  DialogueAct dialogue_act = DialogueAct::utility;
  std::string target_speaker;
  std::string reason;
  std::string model_id;
  std::string prompt_hash;
  bool operator==(const WhowAnnotation&) const = default;
};

struct EslmodAnnotation {
  SentenceRef location;
  std::string strategy_id;
  std::string target_speaker;
  std::string reason;
  std::string model_id;
  std::string prompt_hash;
  bool operator==(const EslmodAnnotation&) const = default;
};

/// A sentence whose answer could not be parsed even after the repair prompt.
struct Unannotated {
  SentenceRef location;
  std::string error;
  std::string raw_response;
};

struct DataQualityReport {
  std::string schema;
  std::size_t attempted = 0;
  std::size_t annotated = 0;
  std::size_t repaired = 0;  // parsed only after the repair prompt
  std::vector<Unannotated> failures;
};

nlohmann::json to_json(const DataQualityReport& report);

struct AnnotationOptions {
  std::string model_id = "gpt-4o";
  llm::Decoding decoding;
  llm::ContextWindow window;
};

template <typename A>
struct AnnotationRun {
  std::vector<A> annotations;  // in location order
  DataQualityReport quality;
};

/// Outcome of one completion + parse, with at most one repair prompt.
struct ParsedCompletion {
  std::optional<llm::ParsedAnswer> answer;
  bool repaired = false;
  std::string error;
  std::string raw_response;
};

ParsedCompletion complete_and_parse(llm::Gateway& gateway, const llm::PromptRequest& request,
                                    const TaxonomyRegistry& taxonomy = eslmod_taxonomy());

AnnotationRun<WhowAnnotation> annotate_whow(const corpus::Corpus& corpus, llm::Gateway& gateway,
                                            const AnnotationOptions& options = {});

AnnotationRun<EslmodAnnotation> annotate_eslmod(const corpus::Corpus& corpus,
                                                const TaxonomyRegistry& taxonomy,
                                                llm::Gateway& gateway,
                                                const AnnotationOptions& options = {});

// --- sidecars ----------------------------------------------------------------

nlohmann::json to_json(const WhowAnnotation& a);
nlohmann::json to_json(const EslmodAnnotation& a);
WhowAnnotation whow_from_json(const nlohmann::json& j);
EslmodAnnotation eslmod_from_json(const nlohmann::json& j);

void write_whow_jsonl(const std::filesystem::path& path, const std::vector<WhowAnnotation>& rows);
void write_eslmod_jsonl(const std::filesystem::path& path,
                        const std::vector<EslmodAnnotation>& rows);
std::vector<WhowAnnotation> read_whow_jsonl(const std::filesystem::path& path);
std::vector<EslmodAnnotation> read_eslmod_jsonl(const std::filesystem::path& path);

// --- matrix ------------------------------------------------------------------

enum class MotiveCounting {
  all_listed,    // every listed motive contributes to its row
  first_listed,  // only the first listed motive counts
};

std::string_view to_string(MotiveCounting mode);
MotiveCounting motive_counting_from_string(std::string_view s);

struct JointMatrix {
  MotiveCounting mode = MotiveCounting::all_listed;
  std::array<std::array<std::size_t, 6>, 3> counts{};
  std::array<std::size_t, 6> act_totals{};  // sentences per act
  std::size_t total = 0;                    // annotated sentences

  std::size_t count(Motive m, DialogueAct a) const;
  double probability(Motive m, DialogueAct a) const;
  std::size_t motive_total(Motive m) const;
  double motive_probability(Motive m) const;
  double act_probability(DialogueAct a) const;
  /// P(act | motive); 0 for an empty row.
  double conditional(Motive m, DialogueAct a) const;
};

/// Throws DataError("no annotations") on empty input.
JointMatrix joint_matrix(const std::vector<WhowAnnotation>& annotations,
                         MotiveCounting mode = MotiveCounting::all_listed);

/// Rows per motive plus a total row; cells rendered "0.26 (838)".
std::string joint_matrix_csv(const JointMatrix& matrix);

struct ProminencePartition {
  std::set<Cell> expand;
  std::set<Cell> keep;
  std::set<Cell> drop;
  double low = 0.025;
  double high = 0.095;
};

/// p < low -> drop, p >= high -> expand, otherwise keep.
/// Throws ConfigError when low >= high.
ProminencePartition select_prominent(const JointMatrix& matrix, double low = 0.025,
                                     double high = 0.095);

nlohmann::json to_json(const ProminencePartition& partition);
ProminencePartition prominence_from_json(const nlohmann::json& j);

}  // namespace modlab::annotation
