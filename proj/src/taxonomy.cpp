#include "modlab/taxonomy.hpp"

#include <cctype>
#include <set>

#include "modlab/error.hpp"

namespace modlab {

using nlohmann::json;

std::string_view to_string(StrategyDecision d) {
  switch (d) {
    case StrategyDecision::expand: return "expand";
    case StrategyDecision::merge: return "merge";
    case StrategyDecision::keep: return "keep";
    case StrategyDecision::extend: return "extend";
  }
  return "?";
}

StrategyDecision decision_from_string(std::string_view s) {
  if (s == "expand") return StrategyDecision::expand;
  if (s == "merge") return StrategyDecision::merge;
  if (s == "keep") return StrategyDecision::keep;
  if (s == "extend") return StrategyDecision::extend;
  throw ConfigError("unknown decision '" + std::string(s) + "'");
}

std::string slugify(std::string_view name) {
  std::string out;
  bool pending_sep = false;
  for (char c : name) {
    const auto uc = static_cast<unsigned char>(c);
    if (std::isalnum(uc)) {
      if (pending_sep && !out.empty()) out.push_back('_');
      out.push_back(static_cast<char>(std::tolower(uc)));
      pending_sep = false;
    } else {
      pending_sep = true;
    }
  }
  return out;
}

namespace {

std::string label_key(std::string_view s) {
  std::string out;
  for (char c : s) {
    const auto uc = static_cast<unsigned char>(c);
    if (std::isalpha(uc)) out.push_back(static_cast<char>(std::tolower(uc)));
  }
  return out;
}

// "3 (Echoing)" -> "Echoing"; other strings are returned unchanged.
std::string_view strip_option_index(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  const std::size_t digits = i;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
  if (i == digits) return s;
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  if (i < s.size() && s[i] == '(') {
    const auto close = s.rfind(')');
    if (close != std::string_view::npos && close > i) return s.substr(i + 1, close - i - 1);
  }
  return s;
}

}  // namespace

TaxonomyRegistry::TaxonomyRegistry(std::vector<Strategy> strategies)
    : strategies_(std::move(strategies)) {
  std::set<std::string> ids;
  for (const auto& s : strategies_) {
    if (s.id.empty()) throw ConfigError("strategy '" + s.name + "' has an empty id");
    if (!ids.insert(s.id).second) throw ConfigError("duplicate strategy id '" + s.id + "'");
  }
}

const Strategy* TaxonomyRegistry::find(std::string_view id) const {
  for (const auto& s : strategies_)
    if (s.id == id) return &s;
  return nullptr;
}

std::optional<std::size_t> TaxonomyRegistry::index_of(std::string_view id) const {
  for (std::size_t i = 0; i < strategies_.size(); ++i)
    if (strategies_[i].id == id) return i;
  return std::nullopt;
}

std::optional<std::string> TaxonomyRegistry::resolve_label(std::string_view label) const {
  const std::string key = label_key(strip_option_index(label));
  if (key.empty()) return std::nullopt;
  for (const auto& s : strategies_) {
    if (label_key(s.id) == key || label_key(s.name) == key ||
        label_key(s.label_for_prompt()) == key)
      return s.id;
    for (const auto& alias : s.aliases)
      if (label_key(alias) == key) return s.id;
  }
  return std::nullopt;
}

json TaxonomyRegistry::to_json() const {
  json list = json::array();
  for (const auto& s : strategies_) {
    json cells = json::array();
    for (const auto& c : s.source_cells) cells.push_back(modlab::to_string(c));
    json j = {{"id", s.id},
              {"name", s.name},
              {"definition", s.definition},
              {"source_cells", std::move(cells)},
              {"decision", modlab::to_string(s.decision)},
              {"examples", s.examples}};
    if (s.prompt_label) j["prompt_label"] = *s.prompt_label;
    if (!s.aliases.empty()) j["aliases"] = s.aliases;
    list.push_back(std::move(j));
  }
  return {{"strategies", std::move(list)}};
}

TaxonomyRegistry TaxonomyRegistry::from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("strategies") || !doc["strategies"].is_array())
    throw ConfigError("taxonomy: expected {\"strategies\": [...]}");
  std::vector<Strategy> out;
  try {
    for (const auto& j : doc["strategies"]) {
      Strategy s;
      s.name = j.at("name").get<std::string>();
      s.id = j.contains("id") ? j["id"].get<std::string>() : slugify(s.name);
      s.definition = j.value("definition", std::string{});
      for (const auto& c : j.value("source_cells", json::array()))
        s.source_cells.push_back(cell_from_string(c.get<std::string>()));
      s.decision = decision_from_string(j.value("decision", std::string("expand")));
      s.examples = j.value("examples", std::vector<std::string>{});
      if (j.contains("prompt_label")) s.prompt_label = j["prompt_label"].get<std::string>();
      s.aliases = j.value("aliases", std::vector<std::string>{});
      out.push_back(std::move(s));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("taxonomy: ") + e.what());
  }
  return TaxonomyRegistry(std::move(out));
}

const TaxonomyRegistry& eslmod_taxonomy() {
  using M = Motive;
  using A = DialogueAct;
  using D = StrategyDecision;
  static const TaxonomyRegistry kRegistry{{
      {"information_probing",
       "Information Probing",
       "Prompting participants to share thoughts, opinions, knowledge or experiences.",
       {{M::informational, A::probing}},
       D::merge,
       {"Anyone else who wants to share their thoughts or opinions about what the purpose of a "
        "relationship is for them?",
        "Related to stress. And how do you manage in such situations?",
        "Yeah. How about you, Chantelle?", "Do you agree with this statement?"},
       std::nullopt,
       {}},
      {"opinion_sharing",
       "Opinion Sharing",
       "Express personal views, beliefs, or subjective opinions related to the topic.",
       {{M::informational, A::supplement}},
       D::expand,
       {"For me, managing stress is all about maintaining a good work-life balance.",
        "To me, sharing housework equally is a sign of respect and partnership in a "
        "relationship.",
        "I believe that having diverse perspectives in a team leads to more creative "
        "solutions."},
       std::nullopt,
       {}},
      {"information_sharing",
       "Information Sharing",
       "Provide factual, contextual content or knowledge to inform or orient others.",
       {{M::informational, A::supplement}},
       D::expand,
       {"Today's topic is related to the recent trends in the job market.",
        "Research shows that group discussions can improve second language acquisition by "
        "increasing practice opportunities.",
        "You can find free online courses on platforms like Coursera or edX to learn new "
        "skills."},
       std::nullopt,
       {}},
      {"echoing",
       "Echoing",
       "Reinforce or support a prior statement by sharing similar views and thoughts.",
       {{M::informational, A::supplement}, {M::social, A::supplement}},
       D::merge,
       {"Yeah, my friend had a similar experience when he was in the US, as he struggled to "
        "find a job.",
        "I can relate to that feeling of being overwhelmed when learning a new language. I have "
        "been through it too.",
        "I completely agree, my friend also struggled with finding a balance between work and "
        "family responsibilities."},
       std::nullopt,
       {}},
      {"experience_sharing",
       "Experience Sharing",
       "Share a personal experience or anecdote.",
       {{M::social, A::supplement}},
       D::expand,
       {"There was a time when I had to make a tough decision about changing my career path, it "
        "was such a challenging moment for me.",
        "Once, during my university days, I stayed up all night preparing for a group project "
        "because I wanted everything to be perfect."},
       std::nullopt,
       {}},
      {"acknowledgement",
       "Acknowledgement",
       "Recognize, validate, or show appreciation for another participant's contribution, "
       "insight, or effort.",
       {{M::social, A::supplement}},
       D::merge,
       {"That is a very interesting insight.",
        "Great point, and I think it really ties back to what we were discussing earlier.",
        "I appreciate you bringing this up, it's a really valuable perspective.",
        "Thanks for sharing that example, it really helped clarify the idea."},
       std::nullopt,
       {"Acknowledgment"}},
      {"backchanneling",
       "Backchanneling",
       "Brief verbal or non-verbal responses for indicating active listening, understanding, or "
       "agreement.",
       {{M::social, A::utility}},
       D::extend,
       {"Yeah.", "Hmm.", "Okay.", "Uh-huh.", "Right.", "I see.", "Mhm."},
       std::nullopt,
       {"Backchannelling"}},
      {"social_utility",
       "Social Utility",
       "Use polite or respectful phrases to show courtesy.",
       {{M::social, A::utility}},
       D::expand,
       {"Goodbye!", "Thank you!", "Please, go ahead!", "Excuse me.", "I appreciate your time."},
       std::nullopt,
       {}},
      {"informational_interpretation",
       "Informational Interpretation",
       "Interpret, clarify, reframe, summarize, paraphrase, or make connections to earlier "
       "conversation content.",
       {{M::informational, A::interpretation}},
       D::keep,
       {"If I understand correctly, you're suggesting that online courses are beneficial "
        "because they provide flexibility.",
        "To summarize, the main takeaway here is that building relationships in the workplace "
        "helps reduce stress.",
        "In other words, you're arguing that peer feedback plays a critical role in language "
        "learning success."},
       std::string("Information Interpretation"),
       {"Information Interpretation"}},
      {"coordinative_instruction",
       "Coordinative Instruction",
       "Explicitly command, influence, or halt the immediate behavior of the recipients for "
       "coordinating the process of the session.",
       {{M::coordinative, A::instruction}},
       D::keep,
       {"Can we wrap up this discussion and move on to the next point?",
        "I'd like everyone to think about this question and share your thoughts one by one.",
        "Now everyone is here, let's start the session.",
        "Please turn off your microphone when you are not speaking."},
       std::string("Coordination Instruction"),
       {"Coordination Instruction"}},
  }};
  return kRegistry;
}

}  // namespace modlab
