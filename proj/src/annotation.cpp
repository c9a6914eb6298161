#include "modlab/annotation.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>

#include "modlab/error.hpp"
#include "modlab/hashing.hpp"
#include "modlab/io.hpp"

namespace modlab::annotation {

using nlohmann::json;
namespace fs = std::filesystem;

json to_json(const DataQualityReport& r) {
  json failures = json::array();
  for (const auto& f : r.failures)
    failures.push_back({{"session_id", f.location.session_id},
                        {"segment_id", f.location.segment_id},
                        {"utterance_idx", f.location.utterance_idx},
                        {"sentence_idx", f.location.sentence_idx},
                        {"error", f.error},
                        {"raw_response", f.raw_response}});
  return {{"schema", r.schema},
          {"attempted", r.attempted},
          {"annotated", r.annotated},
          {"repaired", r.repaired},
          {"unannotated", r.failures.size()},
          {"failures", std::move(failures)}};
}

ParsedCompletion complete_and_parse(llm::Gateway& gateway, const llm::PromptRequest& request,
                                    const TaxonomyRegistry& taxonomy) {
  ParsedCompletion out;
  out.raw_response = gateway.complete(request);
  try {
    out.answer = llm::parse_annotation_response(out.raw_response, request.schema_tag, taxonomy);
    return out;
  } catch (const llm::ParseError&) {
  }
  llm::PromptRequest repair = request;
  repair.prompt_text += llm::kJsonRepairInstruction;
  out.raw_response = gateway.complete(repair);
  try {
    out.answer = llm::parse_annotation_response(out.raw_response, request.schema_tag, taxonomy);
    out.repaired = true;
  } catch (const llm::ParseError& e) {
    out.error = e.what();
  }
  return out;
}

namespace {

template <typename A, typename Build, typename Convert>
AnnotationRun<A> annotate(const corpus::Corpus& corpus, llm::Gateway& gateway,
                          const AnnotationOptions& options, llm::SchemaTag tag,
                          const TaxonomyRegistry& taxonomy, Build build, Convert convert) {
  struct Job {
    const corpus::Session* session;
    SentenceRef ref;
  };
  std::vector<Job> jobs;
  for (const auto& session : corpus)
    for (auto& ref : corpus::moderator_sentences(session)) jobs.push_back({&session, std::move(ref)});

  std::vector<ParsedCompletion> results(jobs.size());
  std::vector<std::string> hashes(jobs.size());
  gateway.for_each_bounded(jobs.size(), [&](std::size_t i) {
    llm::PromptRequest req{build(*jobs[i].session, jobs[i].ref), options.decoding,
                           options.model_id, tag};
    hashes[i] = sha256_hex(req.prompt_text);
    results[i] = complete_and_parse(gateway, req, taxonomy);
  });

  AnnotationRun<A> run;
  run.quality.schema = std::string(llm::to_string(tag));
  run.quality.attempted = jobs.size();
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    auto& r = results[i];
    if (!r.answer) {
      run.quality.failures.push_back({jobs[i].ref, r.error, r.raw_response});
      continue;
    }
    ++run.quality.annotated;
    if (r.repaired) ++run.quality.repaired;
    A a = convert(*r.answer);
    a.location = jobs[i].ref;
    a.model_id = options.model_id;
    a.prompt_hash = hashes[i];
    run.annotations.push_back(std::move(a));
  }
  std::sort(run.annotations.begin(), run.annotations.end(),
            [](const A& x, const A& y) { return x.location < y.location; });
  return run;
}

}  // namespace

AnnotationRun<WhowAnnotation> annotate_whow(const corpus::Corpus& corpus, llm::Gateway& gateway,
                                            const AnnotationOptions& options) {
  return annotate<WhowAnnotation>(
      corpus, gateway, options, llm::SchemaTag::whow, eslmod_taxonomy(),
      [&](const corpus::Session& s, const SentenceRef& ref) {
        return llm::build_whow_prompt(s, ref, options.window);
      },
      [](const llm::ParsedAnswer& answer) {
        const auto& l = std::get<llm::WhowLabel>(answer);
        WhowAnnotation a;
        a.motives = l.motives;
        a.dialogue_act = l.dialogue_act;
        a.target_speaker = l.target_speaker;
        a.reason = l.reason;
        return a;
      });
}

AnnotationRun<EslmodAnnotation> annotate_eslmod(const corpus::Corpus& corpus,
                                                const TaxonomyRegistry& taxonomy,
                                                llm::Gateway& gateway,
                                                const AnnotationOptions& options) {
  return annotate<EslmodAnnotation>(
      corpus, gateway, options, llm::SchemaTag::eslmod, taxonomy,
      [&](const corpus::Session& s, const SentenceRef& ref) {
        return llm::build_eslmod_prompt(s, ref, taxonomy, options.window);
      },
      [](const llm::ParsedAnswer& answer) {
        const auto& l = std::get<llm::EslmodLabel>(answer);
        EslmodAnnotation a;
        a.strategy_id = l.strategy_id;
        a.target_speaker = l.target_speaker;
        a.reason = l.reason;
        return a;
      });
}

// --- sidecars ----------------------------------------------------------------

namespace {

json location_json(const SentenceRef& r) {
  return {{"session_id", r.session_id},
          {"segment_id", r.segment_id},
          {"utterance_idx", r.utterance_idx},
          {"sentence_idx", r.sentence_idx}};
}

SentenceRef location_from(const json& j) {
  return {j.at("session_id").get<std::string>(), j.at("segment_id").get<std::string>(),
          j.at("utterance_idx").get<std::size_t>(), j.at("sentence_idx").get<std::size_t>()};
}

void write_lines(const fs::path& path, const std::vector<json>& rows) { io::write_jsonl(path, rows); }

template <typename F>
auto read_lines(const fs::path& path, F convert) {
  std::vector<decltype(convert(json{}))> out;
  io::read_jsonl(path, [&](const json& j) { out.push_back(convert(j)); });
  return out;
}

}  // namespace

json to_json(const WhowAnnotation& a) {
  json j = location_json(a.location);
  json motives = json::array();
  for (Motive m : a.motives) motives.push_back(to_string(m));
  j["schema"] = "whow";
  j["motives"] = std::move(motives);
  j["dialogue_act"] = to_string(a.dialogue_act);
  j["target_speaker"] = a.target_speaker;
  j["reason"] = a.reason;
  j["model_id"] = a.model_id;
  j["prompt_hash"] = a.prompt_hash;
  return j;
}

json to_json(const EslmodAnnotation& a) {
  json j = location_json(a.location);
  j["schema"] = "eslmod";
  j["strategy"] = a.strategy_id;
  j["target_speaker"] = a.target_speaker;
  j["reason"] = a.reason;
  j["model_id"] = a.model_id;
  j["prompt_hash"] = a.prompt_hash;
  return j;
}

WhowAnnotation whow_from_json(const json& j) {
  WhowAnnotation a;
  a.location = location_from(j);
  for (const auto& m : j.at("motives")) {
    auto motive = motive_from_string(m.get<std::string>());
    if (!motive) throw ValidationError("unknown motive '" + m.get<std::string>() + "'");
    a.motives.push_back(*motive);
  }
  const auto act = act_from_string(j.at("dialogue_act").get<std::string>());
  if (!act) throw ValidationError("unknown dialogue act '" + j.at("dialogue_act").get<std::string>() + "'");
  a.dialogue_act = *act;
  a.target_speaker = j.value("target_speaker", std::string{});
  a.reason = j.value("reason", std::string{});
  a.model_id = j.value("model_id", std::string{});
  a.prompt_hash = j.value("prompt_hash", std::string{});
  return a;
}

EslmodAnnotation eslmod_from_json(const json& j) {
  EslmodAnnotation a;
  a.location = location_from(j);
  a.strategy_id = j.at("strategy").get<std::string>();
  a.target_speaker = j.value("target_speaker", std::string{});
  a.reason = j.value("reason", std::string{});
  a.model_id = j.value("model_id", std::string{});
  a.prompt_hash = j.value("prompt_hash", std::string{});
  return a;
}

void write_whow_jsonl(const fs::path& path, const std::vector<WhowAnnotation>& rows) {
  std::vector<json> lines;
  for (const auto& r : rows) lines.push_back(to_json(r));
  write_lines(path, lines);
}

void write_eslmod_jsonl(const fs::path& path, const std::vector<EslmodAnnotation>& rows) {
  std::vector<json> lines;
  for (const auto& r : rows) lines.push_back(to_json(r));
  write_lines(path, lines);
}

std::vector<WhowAnnotation> read_whow_jsonl(const fs::path& path) {
  return read_lines(path, whow_from_json);
}

std::vector<EslmodAnnotation> read_eslmod_jsonl(const fs::path& path) {
  return read_lines(path, eslmod_from_json);
}

// --- matrix ------------------------------------------------------------------

std::string_view to_string(MotiveCounting mode) {
  return mode == MotiveCounting::all_listed ? "all_listed" : "first_listed";
}

MotiveCounting motive_counting_from_string(std::string_view s) {
  if (s == "all_listed") return MotiveCounting::all_listed;
  if (s == "first_listed") return MotiveCounting::first_listed;
  throw ConfigError("unknown motive counting mode '" + std::string(s) + "'");
}

namespace {
std::size_t mi(Motive m) { return static_cast<std::size_t>(m); }
std::size_t ai(DialogueAct a) { return static_cast<std::size_t>(a); }
}  // namespace

std::size_t JointMatrix::count(Motive m, DialogueAct a) const { return counts[mi(m)][ai(a)]; }

double JointMatrix::probability(Motive m, DialogueAct a) const {
  return total ? static_cast<double>(count(m, a)) / static_cast<double>(total) : 0.0;
}

std::size_t JointMatrix::motive_total(Motive m) const {
  std::size_t s = 0;
  for (auto c : counts[mi(m)]) s += c;
  return s;
}

double JointMatrix::motive_probability(Motive m) const {
  return total ? static_cast<double>(motive_total(m)) / static_cast<double>(total) : 0.0;
}

double JointMatrix::act_probability(DialogueAct a) const {
  return total ? static_cast<double>(act_totals[ai(a)]) / static_cast<double>(total) : 0.0;
}

double JointMatrix::conditional(Motive m, DialogueAct a) const {
  const auto row = motive_total(m);
  return row ? static_cast<double>(count(m, a)) / static_cast<double>(row) : 0.0;
}

JointMatrix joint_matrix(const std::vector<WhowAnnotation>& annotations, MotiveCounting mode) {
  if (annotations.empty()) throw DataError("no annotations");
  JointMatrix jm;
  jm.mode = mode;
  jm.total = annotations.size();
  for (const auto& a : annotations) {
    ++jm.act_totals[ai(a.dialogue_act)];
    if (a.motives.empty()) continue;
    if (mode == MotiveCounting::first_listed) {
      ++jm.counts[mi(a.motives.front())][ai(a.dialogue_act)];
      continue;
    }
    std::array<bool, 3> seen{};
    for (Motive m : a.motives) {
      if (seen[mi(m)]) continue;
      seen[mi(m)] = true;
      ++jm.counts[mi(m)][ai(a.dialogue_act)];
    }
  }
  return jm;
}

std::string joint_matrix_csv(const JointMatrix& jm) {
  auto cell = [](double p, std::size_t n) { return fmt::format("{:.2f} ({})", p, n); };
  std::string out = "motive";
  for (DialogueAct a : kDialogueActs) out += fmt::format(",{}", to_string(a));
  out += ",total\n";
  for (Motive m : kMotives) {
    out += to_string(m);
    for (DialogueAct a : kDialogueActs) out += "," + cell(jm.probability(m, a), jm.count(m, a));
    out += "," + cell(jm.motive_probability(m), jm.motive_total(m)) + "\n";
  }
  out += "total";
  for (DialogueAct a : kDialogueActs) out += "," + cell(jm.act_probability(a), jm.act_totals[ai(a)]);
  out += "," + cell(1.0, jm.total) + "\n";
  return out;
}

ProminencePartition select_prominent(const JointMatrix& matrix, double low, double high) {
  if (!(low < high))
    throw ConfigError(fmt::format("threshold low ({}) must be below high ({})", low, high));
  ProminencePartition p;
  p.low = low;
  p.high = high;
  for (Motive m : kMotives)
    for (DialogueAct a : kDialogueActs) {
      const double prob = matrix.probability(m, a);
      const Cell c{m, a};
      if (prob < low) p.drop.insert(c);
      else if (prob >= high) p.expand.insert(c);
      else p.keep.insert(c);
    }
  return p;
}

json to_json(const ProminencePartition& p) {
  auto cells = [](const std::set<Cell>& s) {
    json arr = json::array();
    for (const auto& c : s) arr.push_back(to_string(c));
    return arr;
  };
  return {{"thresholds", {{"low", p.low}, {"high", p.high}}},
          {"expand", cells(p.expand)},
          {"keep", cells(p.keep)},
          {"drop", cells(p.drop)}};
}

ProminencePartition prominence_from_json(const json& j) {
  ProminencePartition p;
  p.low = j.at("thresholds").at("low").get<double>();
  p.high = j.at("thresholds").at("high").get<double>();
  for (const auto& c : j.at("expand")) p.expand.insert(cell_from_string(c.get<std::string>()));
  for (const auto& c : j.at("keep")) p.keep.insert(cell_from_string(c.get<std::string>()));
  for (const auto& c : j.at("drop")) p.drop.insert(cell_from_string(c.get<std::string>()));
  return p;
}

}  // namespace modlab::annotation
