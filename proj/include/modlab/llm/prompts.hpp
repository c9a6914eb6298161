#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "modlab/corpus.hpp"
#include "modlab/taxonomy.hpp"

namespace modlab::llm {

struct ContextWindow {
  std::size_t prior = 5;  // utterances before the target
  std::size_t post = 2;   // utterances after the target
};

/// Appended to a prompt when the first answer was not valid JSON.
inline constexpr std::string_view kJsonRepairInstruction =
    "\n\nYour previous answer could not be parsed. Respond with valid JSON only, "
    "with no other text.";

/// Target-speaker options in prompt order: "0 (Unknown)", "1 (Everyone)",
/// then one entry per participant in roster order.
std::vector<std::string> target_speaker_options(const corpus::Session& session);

/// Annotation prompt for one moderator sentence under the WHoW schema.
/// Throws DataError when the sentence is not the moderator's.
std::string build_whow_prompt(const corpus::Session& session, const corpus::SentenceRef& target,
                              ContextWindow window = {});

/// Same layout as the WHoW prompt with the strategy taxonomy as label set.
/// Throws ConfigError("incomplete taxonomy") if a strategy lacks a
/// definition or examples.
std::string build_eslmod_prompt(const corpus::Session& session, const corpus::SentenceRef& target,
                                const TaxonomyRegistry& taxonomy, ContextWindow window = {});

struct QualityPromptOptions {
  /// Transcript budget in whitespace tokens. Longer scopes keep the first two
  /// utterances plus the longest suffix that fits.
  std::size_t max_transcript_tokens = 8000;
};

/// Per-speaker dialogue-quality prompt over a whole session
/// (`segment_id == nullopt`) or one segment. Throws DataError when the
/// speaker has no utterance in scope.
std::string build_quality_prompt(const corpus::Session& session,
                                 const std::optional<std::string>& segment_id,
                                 std::string_view speaker_id, QualityPromptOptions options = {});

}  // namespace modlab::llm
