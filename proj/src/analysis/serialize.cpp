#include "modlab/analysis/serialize.hpp"

namespace modlab::analysis {

using nlohmann::json;

namespace {

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> opt_from(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<double>();
}

}  // namespace

json to_json(const FrequencyTable& t) {
  json rows = json::array();
  for (const auto& r : t.rows)
    rows.push_back({{"strategy", r.strategy_id}, {"name", r.name}, {"count", r.count}, {"percent", r.percent}});
  return {{"total", t.total}, {"rows", rows}};
}

FrequencyTable frequency_table_from_json(const json& j) {
  FrequencyTable t;
  t.total = j.at("total").get<std::size_t>();
  for (const auto& r : j.at("rows"))
    t.rows.push_back({r.at("strategy").get<std::string>(), r.at("name").get<std::string>(),
                      r.at("count").get<std::size_t>(), r.at("percent").get<double>()});
  return t;
}

json to_json(const ComparisonResult& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"metric", quality::to_string(row.metric)},
                    {"mean_moderated", row.mean_moderated},
                    {"mean_non_moderated", row.mean_non_moderated},
                    {"t", opt(row.t)},
                    {"df", opt(row.df)},
                    {"p_one_tailed", opt(row.p_one_tailed)},
                    {"significant", row.significant},
                    {"n_moderated", row.n_moderated},
                    {"n_non_moderated", row.n_non_moderated}});
  json deltas = json::array();
  for (const auto& d : r.topic_deltas)
    deltas.push_back({{"topic", d.topic},
                      {"metric", quality::to_string(d.metric)},
                      {"mean_moderated", d.mean_moderated},
                      {"mean_non_moderated", d.mean_non_moderated},
                      {"delta", d.delta}});
  return {{"pairing", to_string(r.pairing)}, {"rows", rows}, {"topic_deltas", deltas}};
}

ComparisonResult comparison_from_json(const json& j) {
  ComparisonResult r;
  r.pairing = pairing_from_string(j.at("pairing").get<std::string>());
  for (const auto& row : j.at("rows")) {
    ComparisonRow c;
    c.metric = quality::metric_from_string(row.at("metric").get<std::string>());
    c.mean_moderated = row.at("mean_moderated").get<double>();
    c.mean_non_moderated = row.at("mean_non_moderated").get<double>();
    c.t = opt_from(row, "t");
    c.df = opt_from(row, "df");
    c.p_one_tailed = opt_from(row, "p_one_tailed");
    c.significant = row.at("significant").get<bool>();
    c.n_moderated = row.at("n_moderated").get<std::size_t>();
    c.n_non_moderated = row.at("n_non_moderated").get<std::size_t>();
    r.rows.push_back(c);
  }
  for (const auto& d : j.value("topic_deltas", json::array()))
    r.topic_deltas.push_back({d.at("topic").get<std::string>(),
                              quality::metric_from_string(d.at("metric").get<std::string>()),
                              d.at("mean_moderated").get<double>(), d.at("mean_non_moderated").get<double>(),
                              d.at("delta").get<double>()});
  return r;
}

json to_json(const StrategyEffect& e) {
  return {{"strategy", e.strategy_id},   {"name", e.name},       {"mean_with", opt(e.mean_with)},
          {"mean_without", opt(e.mean_without)}, {"delta", opt(e.delta)}, {"t", opt(e.t_stat)},
          {"df", opt(e.df)},             {"p_value", opt(e.p_value)}, {"n_with", e.n_with},
          {"n_without", e.n_without},    {"flagged", e.flagged}, {"note", e.note}};
}

StrategyEffect strategy_effect_from_json(const json& j) {
  StrategyEffect e;
  e.strategy_id = j.at("strategy").get<std::string>();
  e.name = j.at("name").get<std::string>();
  e.mean_with = opt_from(j, "mean_with");
  e.mean_without = opt_from(j, "mean_without");
  e.delta = opt_from(j, "delta");
  e.t_stat = opt_from(j, "t");
  e.df = opt_from(j, "df");
  e.p_value = opt_from(j, "p_value");
  e.n_with = j.at("n_with").get<std::size_t>();
  e.n_without = j.at("n_without").get<std::size_t>();
  e.flagged = j.value("flagged", false);
  e.note = j.value("note", std::string{});
  return e;
}

json to_json(const SegmentQuality& q) {
  json contributors = json::array();
  for (const auto& c : q.contributors)
    contributors.push_back({{"speaker_id", c.speaker_id}, {"q", c.q}, {"tokens", c.tokens}, {"weight", c.weight}});
  return {{"session_id", q.session_id}, {"segment_id", q.segment_id}, {"Q", q.Q}, {"contributors", contributors}};
}

SegmentQuality segment_quality_from_json(const json& j) {
  SegmentQuality q;
  q.session_id = j.at("session_id").get<std::string>();
  q.segment_id = j.at("segment_id").get<std::string>();
  q.Q = j.at("Q").get<double>();
  for (const auto& c : j.at("contributors"))
    q.contributors.push_back({c.at("speaker_id").get<std::string>(), c.at("q").get<double>(),
                              c.at("tokens").get<std::size_t>(), c.at("weight").get<double>()});
  return q;
}

json to_json(const annotation::JointMatrix& m) {
  return {{"mode", annotation::to_string(m.mode)},
          {"counts", m.counts},
          {"act_totals", m.act_totals},
          {"total", m.total}};
}

annotation::JointMatrix joint_matrix_from_json(const json& j) {
  annotation::JointMatrix m;
  m.mode = annotation::motive_counting_from_string(j.at("mode").get<std::string>());
  m.counts = j.at("counts").get<decltype(m.counts)>();
  m.act_totals = j.at("act_totals").get<decltype(m.act_totals)>();
  m.total = j.at("total").get<std::size_t>();
  return m;
}

}  // namespace modlab::analysis
