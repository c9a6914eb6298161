#include "modlab/analysis/effects.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "modlab/error.hpp"

namespace modlab::analysis {

using quality::Metric;
using quality::SpeakerQualityScores;

namespace {

std::string fmt_opt(const std::optional<double>& v, int digits = 4) {
  return v ? fmt::format("{:.{}f}", *v, digits) : std::string("NA");
}

}  // namespace

// --- frequencies -------------------------------------------------------------

FrequencyTable strategy_frequencies(const std::vector<annotation::EslmodAnnotation>& annotations,
                                    const TaxonomyRegistry& taxonomy) {
  if (annotations.empty()) throw DataError("strategy frequencies: no annotations");
  std::vector<std::size_t> counts(taxonomy.size(), 0);
  for (const auto& a : annotations) {
    const auto idx = taxonomy.index_of(a.strategy_id);
    if (!idx) throw DataError("strategy frequencies: unknown strategy '" + a.strategy_id + "'");
    ++counts[*idx];
  }
  FrequencyTable table;
  table.total = annotations.size();
  for (std::size_t i = 0; i < taxonomy.size(); ++i) {
    const auto& s = taxonomy.strategies()[i];
    table.rows.push_back({s.id, s.name, counts[i],
                          100.0 * static_cast<double>(counts[i]) / static_cast<double>(table.total)});
  }
  std::stable_sort(table.rows.begin(), table.rows.end(),
                   [](const FrequencyRow& a, const FrequencyRow& b) { return a.count > b.count; });
  return table;
}

std::string frequencies_csv(const FrequencyTable& table) {
  std::string out = "strategy,name,count,percent\n";
  for (const auto& r : table.rows) out += fmt::format("{},{},{},{:.1f}\n", r.strategy_id, r.name, r.count, r.percent);
  out += fmt::format("total,Total,{},100.0\n", table.total);
  return out;
}

// --- segment quality ---------------------------------------------------------

SegmentQuality weighted_quality(std::string session_id, std::string segment_id,
                                const std::vector<SpeakerInput>& speakers) {
  SegmentQuality out;
  out.session_id = std::move(session_id);
  out.segment_id = std::move(segment_id);
  double total = 0;
  for (const auto& s : speakers)
    if (!s.moderator && s.q && s.tokens > 0) {
      out.contributors.push_back({s.speaker_id, *s.q, s.tokens, 0});
      total += static_cast<double>(s.tokens);
    }
  if (out.contributors.empty())
    throw DataError(fmt::format("unscorable segment {}/{}: no non-moderator speaker has both a score and tokens",
                                out.session_id, out.segment_id));
  double lo = out.contributors.front().q, hi = lo;
  for (auto& c : out.contributors) {
    c.weight = static_cast<double>(c.tokens) / total;
    out.Q += c.weight * c.q;
    lo = std::min(lo, c.q);
    hi = std::max(hi, c.q);
  }
  out.Q = std::clamp(out.Q, lo, hi);
  return out;
}

std::map<std::string, std::size_t> speaker_tokens(const corpus::Segment& segment) {
  std::map<std::string, std::size_t> out;
  for (const auto& u : segment.utterances) out[u.speaker_id] += u.token_count;
  return out;
}

SegmentQuality segment_quality(const corpus::Session& session, const corpus::Segment& segment,
                               const std::vector<SpeakerQualityScores>& records, Metric metric) {
  std::map<std::string, double> by_segment, by_session;
  for (const auto& r : records) {
    if (r.session_id != session.session_id) continue;
    if (!r.segment_id)
      by_session[r.speaker_id] = r.score(metric);
    else if (*r.segment_id == segment.segment_id)
      by_segment[r.speaker_id] = r.score(metric);
  }
  std::vector<SpeakerInput> inputs;
  for (const auto& [speaker, tokens] : speaker_tokens(segment)) {
    SpeakerInput in{speaker, std::nullopt, tokens, session.is_moderator(speaker)};
    if (auto it = by_segment.find(speaker); it != by_segment.end())
      in.q = it->second;
    else if (auto it2 = by_session.find(speaker); it2 != by_session.end())
      in.q = it2->second;
    inputs.push_back(std::move(in));
  }
  return weighted_quality(session.session_id, segment.segment_id, inputs);
}

SegmentQualityRun segment_qualities(const corpus::Corpus& corpus, const std::vector<SpeakerQualityScores>& records,
                                    bool moderated_only, Metric metric) {
  SegmentQualityRun run;
  for (const auto& session : corpus) {
    if (moderated_only && !session.moderated) continue;
    for (const auto& seg : session.segments) {
      try {
        run.segments.push_back(segment_quality(session, seg, records, metric));
      } catch (const DataError& e) {
        run.excluded.push_back(e.what());
      }
    }
  }
  return run;
}

// --- condition comparisons ---------------------------------------------------

std::string_view to_string(Pairing p) {
  switch (p) {
    case Pairing::all: return "all";
    case Pairing::by_topic: return "by_topic";
    case Pairing::by_speaker: return "by_speaker";
  }
  return "all";
}

Pairing pairing_from_string(std::string_view s) {
  if (s == "all") return Pairing::all;
  if (s == "by_topic") return Pairing::by_topic;
  if (s == "by_speaker") return Pairing::by_speaker;
  throw ConfigError("unknown pairing '" + std::string(s) + "'");
}

namespace {

/// Per-speaker score in a session: the session record, else the mean of the
/// speaker's segment records.
std::map<std::string, double> speaker_values(const corpus::Session& session,
                                             const std::vector<SpeakerQualityScores>& records, Metric metric) {
  std::map<std::string, double> whole;
  std::map<std::string, std::vector<double>> parts;
  for (const auto& r : records) {
    if (r.session_id != session.session_id || session.is_moderator(r.speaker_id)) continue;
    if (!session.find_speaker(r.speaker_id)) continue;
    if (r.segment_id)
      parts[r.speaker_id].push_back(r.score(metric));
    else
      whole[r.speaker_id] = r.score(metric);
  }
  for (const auto& [speaker, xs] : parts)
    if (!whole.count(speaker)) whole[speaker] = mean(xs);
  return whole;
}

std::optional<double> session_value(const corpus::Session& session,
                                    const std::vector<SpeakerQualityScores>& records, Metric metric) {
  const auto values = speaker_values(session, records, metric);
  if (values.empty()) return std::nullopt;
  double s = 0;
  for (const auto& [_, v] : values) s += v;
  return s / static_cast<double>(values.size());
}

ComparisonRow compare_samples(Metric metric, const std::vector<double>& mod, const std::vector<double>& non,
                              const ComparisonOptions& options) {
  ComparisonRow row;
  row.metric = metric;
  row.mean_moderated = mean(mod);
  row.mean_non_moderated = mean(non);
  row.n_moderated = mod.size();
  row.n_non_moderated = non.size();
  try {
    const TTest t = welch_t(mod, non, 1, options.variance);
    row.t = t.t;
    row.df = t.df;
    row.p_one_tailed = t.p;
    row.significant = t.p < options.alpha;
  } catch (const DataError&) {
  }
  return row;
}

void require_both(std::size_t mod, std::size_t non, std::string_view what) {
  if (mod == 0 || non == 0)
    throw DataError(fmt::format("comparison: {} has {} moderated and {} non-moderated units", what, mod, non));
}

}  // namespace

ComparisonResult compare_conditions(const std::vector<SpeakerQualityScores>& records, const corpus::Corpus& corpus,
                                    Pairing pairing, const ComparisonOptions& options) {
  std::vector<const corpus::Session*> scope;
  for (const auto& s : corpus)
    if (!options.source || s.source == *options.source) scope.push_back(&s);

  ComparisonResult result;
  result.pairing = pairing;

  if (pairing == Pairing::by_topic) {
    std::map<std::string, std::pair<bool, bool>> topics;
    for (const auto* s : scope) (s->moderated ? topics[s->topic].first : topics[s->topic].second) = true;
    std::vector<const corpus::Session*> paired;
    for (const auto* s : scope)
      if (topics[s->topic].first && topics[s->topic].second) paired.push_back(s);
    scope = std::move(paired);
  }

  if (pairing == Pairing::by_speaker) {
    for (Metric m : quality::kMetrics) {
      std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> by_identity;
      for (const auto* s : scope)
        for (const auto& [speaker, v] : speaker_values(*s, records, m)) {
          auto& slot = by_identity[s->find_speaker(speaker)->identity()];
          (s->moderated ? slot.first : slot.second).push_back(v);
        }
      std::vector<double> mod, non;
      for (const auto& [_, pair] : by_identity)
        if (!pair.first.empty() && !pair.second.empty()) {
          mod.push_back(mean(pair.first));
          non.push_back(mean(pair.second));
        }
      require_both(mod.size(), non.size(), "speakers present in both conditions");
      result.rows.push_back(compare_samples(m, mod, non, options));
    }
    return result;
  }

  for (Metric m : quality::kMetrics) {
    std::vector<double> mod, non;
    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> by_topic;
    for (const auto* s : scope) {
      const auto v = session_value(*s, records, m);
      if (!v) continue;
      (s->moderated ? mod : non).push_back(*v);
      auto& slot = by_topic[s->topic];
      (s->moderated ? slot.first : slot.second).push_back(*v);
    }
    require_both(mod.size(), non.size(), "the session scope");
    result.rows.push_back(compare_samples(m, mod, non, options));
    if (pairing == Pairing::by_topic)
      for (const auto& [topic, pair] : by_topic) {
        if (pair.first.empty() || pair.second.empty()) continue;
        const double a = mean(pair.first), b = mean(pair.second);
        result.topic_deltas.push_back({topic, m, a, b, a - b});
      }
  }
  std::stable_sort(result.topic_deltas.begin(), result.topic_deltas.end(),
                   [](const TopicDelta& a, const TopicDelta& b) { return a.topic < b.topic; });
  return result;
}

std::string comparisons_csv(const std::vector<ComparisonResult>& results) {
  std::string out =
      "pairing,metric,mean_moderated,mean_non_moderated,t,df,p_one_tailed,significant,n_moderated,"
      "n_non_moderated\n";
  for (const auto& res : results)
    for (const auto& r : res.rows)
      out += fmt::format("{},{},{:.4f},{:.4f},{},{},{},{},{},{}\n", to_string(res.pairing), to_string(r.metric),
                         r.mean_moderated, r.mean_non_moderated, fmt_opt(r.t), fmt_opt(r.df),
                         fmt_opt(r.p_one_tailed), r.significant ? "true" : "false", r.n_moderated,
                         r.n_non_moderated);
  return out;
}

std::string topic_deltas_csv(const ComparisonResult& result) {
  std::string out = "topic,metric,mean_moderated,mean_non_moderated,delta,direction\n";
  for (const auto& d : result.topic_deltas)
    out += fmt::format("{},{},{:.4f},{:.4f},{:.4f},{}\n", d.topic, to_string(d.metric), d.mean_moderated,
                       d.mean_non_moderated, d.delta, d.delta > 0 ? "up" : d.delta < 0 ? "down" : "none");
  return out;
}

// --- strategy effects --------------------------------------------------------

std::vector<StrategyEffect> strategy_effects(const std::vector<SegmentQuality>& segments,
                                             const std::vector<annotation::EslmodAnnotation>& annotations,
                                             const TaxonomyRegistry& taxonomy, Variance variance) {
  std::map<std::pair<std::string, std::string>, std::set<std::string>> present;
  for (const auto& a : annotations) present[{a.location.session_id, a.location.segment_id}].insert(a.strategy_id);

  std::vector<StrategyEffect> out;
  for (const auto& s : taxonomy.strategies()) {
    StrategyEffect e;
    e.strategy_id = s.id;
    e.name = s.name;
    std::vector<double> with, without;
    for (const auto& seg : segments) {
      const auto it = present.find({seg.session_id, seg.segment_id});
      const bool has = it != present.end() && it->second.count(s.id);
      (has ? with : without).push_back(seg.Q);
    }
    e.n_with = with.size();
    e.n_without = without.size();
    if (!with.empty()) e.mean_with = mean(with);
    if (!without.empty()) e.mean_without = mean(without);
    if (e.mean_with && e.mean_without) e.delta = *e.mean_with - *e.mean_without;
    if (with.size() < 2 || without.size() < 2) {
      e.flagged = true;
      e.note = with.empty()      ? "strategy never present"
               : without.empty() ? "strategy present in every segment"
                                 : "fewer than two segments on one side";
    } else {
      try {
        const TTest t = welch_t(with, without, 2, variance);
        e.t_stat = t.t;
        e.df = t.df;
        e.p_value = t.p;
      } catch (const DataError& err) {
        e.flagged = true;
        e.note = err.what();
      }
    }
    out.push_back(std::move(e));
  }
  std::stable_sort(out.begin(), out.end(), [](const StrategyEffect& a, const StrategyEffect& b) {
    if (a.mean_with.has_value() != b.mean_with.has_value()) return a.mean_with.has_value();
    return a.mean_with && *a.mean_with > *b.mean_with;
  });
  return out;
}

std::string strategy_effects_csv(const std::vector<StrategyEffect>& effects) {
  std::string out = "strategy,name,mean_with,mean_without,delta,t,df,p_value,n_with,n_without,flagged,note\n";
  for (const auto& e : effects)
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},\"{}\"\n", e.strategy_id, e.name, fmt_opt(e.mean_with),
                       fmt_opt(e.mean_without), fmt_opt(e.delta), fmt_opt(e.t_stat), fmt_opt(e.df),
                       fmt_opt(e.p_value), e.n_with, e.n_without, e.flagged ? "true" : "false", e.note);
  return out;
}

}  // namespace modlab::analysis
