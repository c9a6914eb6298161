#include "modlab/llm/response_parser.hpp"

#include <fmt/format.h>

#include <cctype>
#include <cmath>
#include <initializer_list>

namespace modlab::llm {

using nlohmann::json;

std::optional<std::string> extract_first_json_object(std::string_view raw) {
  for (std::size_t start = raw.find('{'); start != std::string_view::npos;
       start = raw.find('{', start + 1)) {
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    for (std::size_t i = start; i < raw.size(); ++i) {
      const char c = raw[i];
      if (in_string) {
        if (escaped) escaped = false;
        else if (c == '\\') escaped = true;
        else if (c == '"') in_string = false;
        continue;
      }
      if (c == '"') in_string = true;
      else if (c == '{') ++depth;
      else if (c == '}' && --depth == 0) {
        std::string candidate(raw.substr(start, i - start + 1));
        if (json::accept(candidate)) return candidate;
        break;
      }
    }
  }
  return std::nullopt;
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

json parse_object(std::string_view raw) {
  auto text = extract_first_json_object(raw);
  if (!text) throw ParseError(ParseError::Kind::no_json, "no JSON object found", std::string(raw));
  return json::parse(*text);
}

const json* find_any(const json& obj, std::initializer_list<const char*> keys) {
  for (const char* k : keys) {
    auto it = obj.find(k);
    if (it != obj.end() && !it->is_null()) return &*it;
  }
  return nullptr;
}

std::string as_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string out;
    for (const auto& item : v) {
      if (!out.empty()) out += ", ";
      out += as_text(item);
    }
    return out;
  }
  return v.dump();
}

std::optional<Motive> parse_motive(std::string_view text) {
  std::string key = lower(trim(text));
  const std::string suffix = " motive";
  if (key.size() > suffix.size() && key.compare(key.size() - suffix.size(), suffix.size(), suffix) == 0)
    key.resize(key.size() - suffix.size());
  return motive_from_string(trim(key));
}

std::optional<DialogueAct> parse_act(std::string_view text) {
  std::string key = lower(strip_option_prefix(text));
  if (key.rfind("all ", 0) == 0) key = key.substr(4);
  return act_from_string(trim(key));
}

int parse_score(const json& v, const char* field, std::string_view raw) {
  double value = 0;
  if (v.is_number()) {
    value = v.get<double>();
  } else if (v.is_string()) {
    const std::string s = trim(v.get<std::string>());
    try {
      std::size_t used = 0;
      value = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
    } catch (const std::exception&) {
      throw ParseError(ParseError::Kind::out_of_range,
                       fmt::format("{}: '{}' is not an integer score", field, s), std::string(raw));
    }
  } else {
    throw ParseError(ParseError::Kind::out_of_range, fmt::format("{}: expected a number", field),
                     std::string(raw));
  }
  if (value != std::floor(value) || value < 1 || value > 5)
    throw ParseError(ParseError::Kind::out_of_range,
                     fmt::format("{}: score {} outside the integer range 1-5", field, value),
                     std::string(raw));
  return static_cast<int>(value);
}

}  // namespace

std::string strip_option_prefix(std::string_view option) {
  const std::string t = trim(option);
  std::size_t i = 0;
  while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ++i;
  if (i == 0) return t;
  std::size_t j = i;
  while (j < t.size() && t[j] == ' ') ++j;
  if (j < t.size() && t[j] == '(' && t.back() == ')') return trim(t.substr(j + 1, t.size() - j - 2));
  return t;
}

WhowLabel parse_whow_answer(std::string_view raw) {
  const json obj = parse_object(raw);
  const std::string raw_s(raw);
  WhowLabel out;

  if (const json* m = find_any(obj, {"motives", "motive"})) {
    std::vector<json> items;
    if (m->is_array()) items.assign(m->begin(), m->end());
    else items.push_back(*m);
    for (const auto& item : items) {
      const std::string text = as_text(item);
      const std::string key = lower(trim(text));
      if (key.empty() || key == "none") continue;
      auto motive = parse_motive(text);
      if (!motive)
        throw ParseError(ParseError::Kind::unknown_label, "unknown motive '" + text + "'", raw_s);
      out.motives.push_back(*motive);
    }
  }

  const json* act = find_any(obj, {"dialogue act", "dialogue_act", "dialogueAct"});
  if (!act) throw ParseError(ParseError::Kind::missing_field, "missing 'dialogue act'", raw_s);
  auto parsed_act = parse_act(as_text(*act));
  if (!parsed_act)
    throw ParseError(ParseError::Kind::unknown_label,
                     "unknown dialogue act '" + as_text(*act) + "'", raw_s);
  out.dialogue_act = *parsed_act;

  const json* target = find_any(obj, {"target speaker(s)", "target speaker", "target_speaker"});
  if (!target) throw ParseError(ParseError::Kind::missing_field, "missing 'target speaker(s)'", raw_s);
  out.target_speaker = strip_option_prefix(as_text(*target));

  if (const json* reason = find_any(obj, {"reason"})) out.reason = as_text(*reason);
  return out;
}

EslmodLabel parse_eslmod_answer(std::string_view raw, const TaxonomyRegistry& taxonomy) {
  const json obj = parse_object(raw);
  const std::string raw_s(raw);
  EslmodLabel out;

  const json* act = find_any(obj, {"dialogue act", "dialogue_act", "strategy"});
  if (!act) throw ParseError(ParseError::Kind::missing_field, "missing 'dialogue act'", raw_s);
  const std::string label = as_text(*act);
  auto id = taxonomy.resolve_label(label);
  if (!id) {
    // A bare option number ("3") indexes the prompt's option list.
    const std::string t = trim(label);
    if (!t.empty() && t.find_first_not_of("0123456789") == std::string::npos) {
      const auto idx = static_cast<std::size_t>(std::stoul(t));
      if (idx < taxonomy.size()) id = taxonomy.strategies()[idx].id;
    }
  }
  if (!id) throw ParseError(ParseError::Kind::unknown_label, "unknown strategy '" + label + "'", raw_s);
  out.strategy_id = *id;

  const json* target = find_any(obj, {"target speaker(s)", "target speaker", "target_speaker"});
  if (!target) throw ParseError(ParseError::Kind::missing_field, "missing 'target speaker(s)'", raw_s);
  out.target_speaker = strip_option_prefix(as_text(*target));
  if (const json* reason = find_any(obj, {"reason"})) out.reason = as_text(*reason);
  return out;
}

QualityLabel parse_quality_answer(std::string_view raw) {
  const json obj = parse_object(raw);
  const std::string raw_s(raw);
  auto score = [&](std::initializer_list<const char*> keys, const char* field) {
    const json* v = find_any(obj, keys);
    if (!v) throw ParseError(ParseError::Kind::missing_field, fmt::format("missing '{}'", field), raw_s);
    return parse_score(*v, field, raw);
  };
  QualityLabel out;
  out.overall = score({"overall", "overall_quality", "score"}, "overall");
  out.topic_management = score({"topic_management", "topic management"}, "topic_management");
  out.tone_appropriateness =
      score({"tone_appropriateness", "tone appropriateness", "tone"}, "tone_appropriateness");
  out.conversation_opening =
      score({"conversation_opening", "conversation opening", "opening"}, "conversation_opening");
  out.conversation_closing =
      score({"conversation_closing", "conversation closing", "closing"}, "conversation_closing");
  if (const json* r = find_any(obj, {"rationale", "reason"})) out.rationale = as_text(*r);
  return out;
}

ParsedAnswer parse_annotation_response(std::string_view raw, SchemaTag tag,
                                       const TaxonomyRegistry& taxonomy) {
  switch (tag) {
    case SchemaTag::whow: return parse_whow_answer(raw);
    case SchemaTag::eslmod: return parse_eslmod_answer(raw, taxonomy);
    case SchemaTag::quality: return parse_quality_answer(raw);
  }
  throw ConfigError("unknown schema tag");
}

std::string serialize_answer(const WhowLabel& label) {
  json motives = json::array();
  for (Motive m : label.motives) motives.push_back(std::string(to_string(m)) + " motive");
  const json doc = {{"motives", std::move(motives)},
                    {"dialogue act", act_prompt_label(label.dialogue_act)},
                    {"target speaker(s)", "0 (" + label.target_speaker + ")"},
                    {"reason", label.reason}};
  return doc.dump();
}

std::string serialize_answer(const EslmodLabel& label, const TaxonomyRegistry& taxonomy) {
  const auto idx = taxonomy.index_of(label.strategy_id);
  if (!idx) throw ConfigError("strategy '" + label.strategy_id + "' not in taxonomy");
  const auto& s = taxonomy.strategies()[*idx];
  const json doc = {{"dialogue act", fmt::format("{} ({})", *idx, s.label_for_prompt())},
                    {"target speaker(s)", "0 (" + label.target_speaker + ")"},
                    {"reason", label.reason}};
  return doc.dump();
}

std::string serialize_answer(const QualityLabel& label) {
  const json doc = {{"overall", label.overall},
                    {"topic_management", label.topic_management},
                    {"tone_appropriateness", label.tone_appropriateness},
                    {"conversation_opening", label.conversation_opening},
                    {"conversation_closing", label.conversation_closing},
                    {"rationale", label.rationale}};
  return doc.dump();
}

}  // namespace modlab::llm
