#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "modlab/schema.hpp"

namespace modlab {

enum class StrategyDecision { expand, merge, keep, extend };

std::string_view to_string(StrategyDecision d);
StrategyDecision decision_from_string(std::string_view s);

struct Strategy {
  std::string id;    // snake_case slug of `name`
  std::string name;  // display name
  std::string definition;
  std::vector<Cell> source_cells;
  StrategyDecision decision = StrategyDecision::expand;
  std::vector<std::string> examples;
  /// Label used in the annotation prompt's option list; defaults to `name`.
  std::optional<std::string> prompt_label;
  /// Alternative spellings accepted when parsing model answers.
  std::vector<std::string> aliases;

  std::string_view label_for_prompt() const { return prompt_label ? *prompt_label : name; }
  bool operator==(const Strategy&) const = default;
};

/// Ordered set of strategies; the order fixes the prompt option indices.
class TaxonomyRegistry {
 public:
  TaxonomyRegistry() = default;
  explicit TaxonomyRegistry(std::vector<Strategy> strategies);  // throws on duplicate ids

  const std::vector<Strategy>& strategies() const { return strategies_; }
  std::size_t size() const { return strategies_.size(); }
  bool empty() const { return strategies_.empty(); }

  const Strategy* find(std::string_view id) const;
  /// Index of a strategy id, or nullopt.
  std::optional<std::size_t> index_of(std::string_view id) const;
  /// Resolves a free-text label ("Information Interpretation", "echoing",
  /// "1 (Information Probing)") to a strategy id.
  std::optional<std::string> resolve_label(std::string_view label) const;

  nlohmann::json to_json() const;
  static TaxonomyRegistry from_json(const nlohmann::json& doc);

  bool operator==(const TaxonomyRegistry&) const = default;

 private:
  std::vector<Strategy> strategies_;
};

/// Lowercased slug: "Information Probing" -> "information_probing".
std::string slugify(std::string_view name);

/// The ten-strategy ESL moderation taxonomy with definitions, source cells
/// and examples, in prompt option order.
const TaxonomyRegistry& eslmod_taxonomy();

}  // namespace modlab
