#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "modlab/error.hpp"
#include "modlab/llm/gateway.hpp"
#include "modlab/schema.hpp"
#include "modlab/taxonomy.hpp"

namespace modlab::llm {

struct WhowLabel {
  std::vector<Motive> motives;  // in the order the model listed them
  DialogueAct dialogue_act = DialogueAct::utility;
  std::string target_speaker;
  std::string reason;
  bool operator==(const WhowLabel&) const = default;
};

struct EslmodLabel {
  std::string strategy_id;
  std::string target_speaker;
  std::string reason;
  bool operator==(const EslmodLabel&) const = default;
};

struct QualityLabel {
  int overall = 0;
  int topic_management = 0;
  int tone_appropriateness = 0;
  int conversation_opening = 0;
  int conversation_closing = 0;
  std::string rationale;
  bool operator==(const QualityLabel&) const = default;
};

using ParsedAnswer = std::variant<WhowLabel, EslmodLabel, QualityLabel>;

class ParseError : public Error {
 public:
  enum class Kind { no_json, missing_field, unknown_label, out_of_range };
  ParseError(Kind kind, const std::string& what, std::string raw)
      : Error(what), kind_(kind), raw_(std::move(raw)) {}
  Kind kind() const noexcept { return kind_; }
  /// The unmodified backend text, kept for audit.
  const std::string& raw() const noexcept { return raw_; }

 private:
  Kind kind_;
  std::string raw_;
};

/// Text of the first balanced, parseable JSON object in `raw`.
std::optional<std::string> extract_first_json_object(std::string_view raw);

/// "3 (Joe Smith)" -> "Joe Smith"; plain names pass through trimmed.
std::string strip_option_prefix(std::string_view option);

ParsedAnswer parse_annotation_response(std::string_view raw, SchemaTag tag,
                                       const TaxonomyRegistry& taxonomy = eslmod_taxonomy());

WhowLabel parse_whow_answer(std::string_view raw);
EslmodLabel parse_eslmod_answer(std::string_view raw,
                                const TaxonomyRegistry& taxonomy = eslmod_taxonomy());
QualityLabel parse_quality_answer(std::string_view raw);

/// Answers rendered in the JSON shape the prompts request.
std::string serialize_answer(const WhowLabel& label);
std::string serialize_answer(const EslmodLabel& label,
                             const TaxonomyRegistry& taxonomy = eslmod_taxonomy());
std::string serialize_answer(const QualityLabel& label);

}  // namespace modlab::llm
