#include "modlab/quality.hpp"

#include <fmt/format.h>

#include <map>
#include <set>
#include <tuple>

#include "modlab/error.hpp"
#include "modlab/hashing.hpp"
#include "modlab/io.hpp"
#include "modlab/llm/response_parser.hpp"

namespace modlab::quality {

using nlohmann::json;

std::string_view to_string(Granularity g) { return g == Granularity::session ? "session" : "segment"; }

Granularity granularity_from_string(std::string_view s) {
  if (s == "session") return Granularity::session;
  if (s == "segment") return Granularity::segment;
  throw ConfigError("unknown granularity '" + std::string(s) + "'");
}

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::overall: return "overall";
    case Metric::topic_management: return "topic_management";
    case Metric::tone: return "tone_appropriateness";
    case Metric::opening: return "conversation_opening";
    case Metric::closing: return "conversation_closing";
  }
  return "overall";
}

std::string_view metric_title(Metric m) {
  switch (m) {
    case Metric::overall: return "Overall";
    case Metric::topic_management: return "Topic Management";
    case Metric::tone: return "Tone Appropriateness";
    case Metric::opening: return "Conversation Opening";
    case Metric::closing: return "Conversation Closing";
  }
  return "Overall";
}

Metric metric_from_string(std::string_view s) {
  for (Metric m : kMetrics)
    if (s == to_string(m)) return m;
  if (s == "tone") return Metric::tone;
  if (s == "opening") return Metric::opening;
  if (s == "closing") return Metric::closing;
  throw ConfigError("unknown metric '" + std::string(s) + "'");
}

int SpeakerQualityScores::score(Metric m) const {
  switch (m) {
    case Metric::overall: return overall;
    case Metric::topic_management: return topic_management;
    case Metric::tone: return tone_appropriateness;
    case Metric::opening: return conversation_opening;
    case Metric::closing: return conversation_closing;
  }
  return overall;
}

void SpeakerQualityScores::validate() const {
  for (Metric m : kMetrics) {
    const int v = score(m);
    if (v < 1 || v > 5)
      throw ValidationError(fmt::format("{} score {} for speaker {} in {} is outside [1, 5]", to_string(m), v,
                                        speaker_id, session_id));
  }
}

SpeakerQualityScores score_speaker(const corpus::Session& session,
                                   const std::optional<std::string>& segment_id,
                                   std::string_view speaker_id, llm::Gateway& gateway,
                                   const QualityOptions& options) {
  llm::PromptRequest req{llm::build_quality_prompt(session, segment_id, speaker_id, options.prompt),
                         options.decoding, options.model_id, llm::SchemaTag::quality};
  llm::QualityLabel label;
  try {
    label = llm::parse_quality_answer(gateway.complete(req));
  } catch (const llm::ParseError&) {
    llm::PromptRequest repair = req;
    repair.prompt_text += llm::kJsonRepairInstruction;
    label = llm::parse_quality_answer(gateway.complete(repair));
  }
  SpeakerQualityScores s;
  s.session_id = session.session_id;
  s.segment_id = segment_id;
  s.speaker_id = std::string(speaker_id);
  s.overall = label.overall;
  s.topic_management = label.topic_management;
  s.tone_appropriateness = label.tone_appropriateness;
  s.conversation_opening = label.conversation_opening;
  s.conversation_closing = label.conversation_closing;
  s.rationale = label.rationale;
  s.model_id = options.model_id;
  s.prompt_hash = sha256_hex(req.prompt_text);
  s.validate();
  return s;
}

namespace {

struct Job {
  const corpus::Session* session;
  std::optional<std::string> segment_id;
  std::string speaker_id;
};

void add_active(std::vector<Job>& jobs, const corpus::Session& session,
                const std::vector<const corpus::Segment*>& scope, std::optional<std::string> segment_id) {
  std::set<std::string> active;
  for (const auto* seg : scope)
    for (const auto& u : seg->utterances) active.insert(u.speaker_id);
  for (const auto& sp : session.speakers)
    if (sp.role != corpus::Role::moderator && active.count(sp.id))
      jobs.push_back({&session, segment_id, sp.id});
}

}  // namespace

ScoringRun score_all(const corpus::Corpus& corpus, Granularity granularity, llm::Gateway& gateway,
                     const QualityOptions& options) {
  std::vector<Job> jobs;
  for (const auto& session : corpus) {
    if (granularity == Granularity::session) {
      std::vector<const corpus::Segment*> all;
      for (const auto& seg : session.segments) all.push_back(&seg);
      add_active(jobs, session, all, std::nullopt);
    } else {
      for (const auto& seg : session.segments) add_active(jobs, session, {&seg}, seg.segment_id);
    }
  }

  std::vector<std::optional<SpeakerQualityScores>> results(jobs.size());
  std::vector<std::string> errors(jobs.size());
  gateway.for_each_bounded(jobs.size(), [&](std::size_t i) {
    try {
      results[i] = score_speaker(*jobs[i].session, jobs[i].segment_id, jobs[i].speaker_id, gateway, options);
    } catch (const llm::ParseError& e) {
      errors[i] = e.what();
    } catch (const DataError& e) {
      errors[i] = e.what();
    } catch (const ValidationError& e) {
      errors[i] = e.what();
    }
  });

  ScoringRun run;
  run.attempted = jobs.size();
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (results[i])
      run.scores.push_back(std::move(*results[i]));
    else
      run.failures.push_back({jobs[i].session->session_id, jobs[i].segment_id, jobs[i].speaker_id, errors[i]});
  }
  return run;
}

json to_json(const SpeakerQualityScores& s) {
  return {{"session_id", s.session_id},
          {"segment_id", s.segment_id ? json(*s.segment_id) : json(nullptr)},
          {"speaker_id", s.speaker_id},
          {"overall", s.overall},
          {"topic_management", s.topic_management},
          {"tone_appropriateness", s.tone_appropriateness},
          {"conversation_opening", s.conversation_opening},
          {"conversation_closing", s.conversation_closing},
          {"rationale", s.rationale},
          {"model_id", s.model_id},
          {"prompt_hash", s.prompt_hash}};
}

SpeakerQualityScores quality_from_json(const json& j) {
  SpeakerQualityScores s;
  s.session_id = j.at("session_id").get<std::string>();
  if (j.contains("segment_id") && !j["segment_id"].is_null()) s.segment_id = j["segment_id"].get<std::string>();
  s.speaker_id = j.at("speaker_id").get<std::string>();
  s.overall = j.at("overall").get<int>();
  s.topic_management = j.at("topic_management").get<int>();
  s.tone_appropriateness = j.at("tone_appropriateness").get<int>();
  s.conversation_opening = j.at("conversation_opening").get<int>();
  s.conversation_closing = j.at("conversation_closing").get<int>();
  s.rationale = j.value("rationale", std::string{});
  s.model_id = j.value("model_id", std::string{});
  s.prompt_hash = j.value("prompt_hash", std::string{});
  s.validate();
  return s;
}

json to_json(const ScoringRun& run) {
  json failures = json::array();
  for (const auto& f : run.failures)
    failures.push_back({{"session_id", f.session_id},
                        {"segment_id", f.segment_id ? json(*f.segment_id) : json(nullptr)},
                        {"speaker_id", f.speaker_id},
                        {"error", f.error}});
  return {{"attempted", run.attempted}, {"scored", run.scores.size()}, {"failures", failures}};
}

namespace {

void check_unique(const std::vector<SpeakerQualityScores>& rows, const std::string& origin) {
  std::set<std::tuple<std::string, std::string, bool, std::string>> seen;
  for (const auto& r : rows)
    if (!seen.insert({r.session_id, r.segment_id.value_or(""), r.segment_id.has_value(), r.speaker_id}).second)
      throw ValidationError(fmt::format("{}: duplicate quality record for speaker {} in {}{}", origin, r.speaker_id,
                                        r.session_id, r.segment_id ? "/" + *r.segment_id : ""));
}

}  // namespace

void write_quality_jsonl(const std::filesystem::path& path, const std::vector<SpeakerQualityScores>& rows) {
  check_unique(rows, path.string());
  std::vector<json> lines;
  for (const auto& r : rows) lines.push_back(to_json(r));
  io::write_jsonl(path, lines);
}

std::vector<SpeakerQualityScores> read_quality_jsonl(const std::filesystem::path& path) {
  std::vector<SpeakerQualityScores> out;
  io::read_jsonl(path, [&](const json& j) { out.push_back(quality_from_json(j)); });
  check_unique(out, path.string());
  return out;
}

}  // namespace modlab::quality
