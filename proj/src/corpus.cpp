#include "modlab/corpus.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <tuple>

#include "modlab/error.hpp"

namespace modlab::corpus {

using nlohmann::json;

std::string_view to_string(Role role) {
  return role == Role::moderator ? "moderator" : "participant";
}

std::string_view to_string(Source source) {
  return source == Source::club ? "club" : "volunteer";
}

Role parse_role(std::string_view text) {
  if (text == "moderator") return Role::moderator;
  if (text == "participant") return Role::participant;
  throw ValidationError(fmt::format("unknown role '{}'", text));
}

Source parse_source(std::string_view text) {
  if (text == "club") return Source::club;
  if (text == "volunteer") return Source::volunteer;
  throw ValidationError(fmt::format("unknown source '{}'", text));
}

const Speaker* Session::find_speaker(std::string_view id) const {
  for (const auto& s : speakers)
    if (s.id == id) return &s;
  return nullptr;
}

const Speaker* Session::moderator() const {
  for (const auto& s : speakers)
    if (s.role == Role::moderator) return &s;
  return nullptr;
}

const Segment* Session::find_segment(std::string_view id) const {
  for (const auto& s : segments)
    if (s.segment_id == id) return &s;
  return nullptr;
}

bool Session::is_moderator(std::string_view speaker_id) const {
  const Speaker* s = find_speaker(speaker_id);
  return s != nullptr && s->role == Role::moderator;
}

// --- tokenization ---------------------------------------------------------

namespace {

// Decodes one UTF-8 code point at `pos`; returns its byte length. Invalid
// sequences are treated as single opaque bytes.
std::size_t decode_utf8(std::string_view s, std::size_t pos, char32_t& cp) {
  const auto b0 = static_cast<unsigned char>(s[pos]);
  auto cont = [&](std::size_t i) -> int {
    if (pos + i >= s.size()) return -1;
    const auto b = static_cast<unsigned char>(s[pos + i]);
    return (b & 0xC0) == 0x80 ? (b & 0x3F) : -1;
  };
  if (b0 < 0x80) {
    cp = b0;
    return 1;
  }
  if ((b0 & 0xE0) == 0xC0) {
    const int c1 = cont(1);
    if (c1 >= 0) {
      cp = (char32_t(b0 & 0x1F) << 6) | char32_t(c1);
      return 2;
    }
  } else if ((b0 & 0xF0) == 0xE0) {
    const int c1 = cont(1), c2 = cont(2);
    if (c1 >= 0 && c2 >= 0) {
      cp = (char32_t(b0 & 0x0F) << 12) | (char32_t(c1) << 6) | char32_t(c2);
      return 3;
    }
  } else if ((b0 & 0xF8) == 0xF0) {
    const int c1 = cont(1), c2 = cont(2), c3 = cont(3);
    if (c1 >= 0 && c2 >= 0 && c3 >= 0) {
      cp = (char32_t(b0 & 0x07) << 18) | (char32_t(c1) << 12) |
           (char32_t(c2) << 6) | char32_t(c3);
      return 4;
    }
  }
  cp = 0xFFFD;
  return 1;
}

bool is_unicode_space(char32_t cp) {
  switch (cp) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t pos = 0;
  std::size_t start = std::string_view::npos;
  while (pos < text.size()) {
    char32_t cp = 0;
    const std::size_t len = decode_utf8(text, pos, cp);
    if (is_unicode_space(cp)) {
      if (start != std::string_view::npos) {
        tokens.emplace_back(text.substr(start, pos - start));
        start = std::string_view::npos;
      }
    } else if (start == std::string_view::npos) {
      start = pos;
    }
    pos += len;
  }
  if (start != std::string_view::npos) tokens.emplace_back(text.substr(start));
  return tokens;
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  auto flush = [&] {
    const auto words = tokenize(current);
    if (!words.empty()) {
      std::string joined;
      for (const auto& w : words) {
        if (!joined.empty()) joined.push_back(' ');
        joined += w;
      }
      out.push_back(std::move(joined));
    }
    current.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    current.push_back(c);
    if ((c == '.' || c == '?' || c == '!') && i + 1 < text.size()) {
      char32_t next = 0;
      decode_utf8(text, i + 1, next);
      if (is_unicode_space(next)) flush();
    }
  }
  flush();
  return out;
}

std::vector<SentenceRef> moderator_sentences(const Session& session) {
  std::vector<SentenceRef> refs;
  for (const auto& seg : session.segments) {
    for (std::size_t u = 0; u < seg.utterances.size(); ++u) {
      const auto& utt = seg.utterances[u];
      if (!session.is_moderator(utt.speaker_id)) continue;
      for (std::size_t s = 0; s < utt.sentences.size(); ++s)
        refs.push_back({session.session_id, seg.segment_id, u, s});
    }
  }
  return refs;
}

std::vector<SentenceRef> moderator_sentences(const Corpus& corpus) {
  std::vector<SentenceRef> refs;
  for (const auto& session : corpus) {
    auto part = moderator_sentences(session);
    refs.insert(refs.end(), part.begin(), part.end());
  }
  return refs;
}

const Session* find_session(const Corpus& corpus, std::string_view id) {
  for (const auto& s : corpus)
    if (s.session_id == id) return &s;
  return nullptr;
}

// --- loading ----------------------------------------------------------------

namespace {

class Reader {
 public:
  Reader(const std::string& origin) : origin_(origin) {}

  [[noreturn]] void fail(const std::string& path, const std::string& msg,
                         const std::string& session_id = {}) const {
    std::string where = origin_ + ": " + path;
    if (!session_id.empty()) where += " (session '" + session_id + "')";
    throw ValidationError(where + ": " + msg);
  }

  const json& field(const json& obj, const std::string& path,
                    const char* name, json::value_t type,
                    const std::string& session_id = {}) const {
    const std::string fpath = path + "." + name;
    if (!obj.is_object()) fail(path, "expected an object", session_id);
    auto it = obj.find(name);
    if (it == obj.end()) fail(fpath, "missing required field", session_id);
    check_type(*it, fpath, type, session_id);
    return *it;
  }

  const json* optional_field(const json& obj, const std::string& path,
                             const char* name, json::value_t type,
                             const std::string& session_id = {}) const {
    auto it = obj.find(name);
    if (it == obj.end() || it->is_null()) return nullptr;
    check_type(*it, path + "." + name, type, session_id);
    return &*it;
  }

 private:
  void check_type(const json& v, const std::string& path, json::value_t type,
                  const std::string& session_id) const {
    const bool ok = v.type() == type ||
                    (type == json::value_t::number_integer &&
                     v.type() == json::value_t::number_unsigned);
    if (!ok) {
      const char* expected = "value";
      switch (type) {
        case json::value_t::string: expected = "a string"; break;
        case json::value_t::boolean: expected = "a boolean"; break;
        case json::value_t::array: expected = "an array"; break;
        case json::value_t::object: expected = "an object"; break;
        default: break;
      }
      fail(path, std::string("expected ") + expected, session_id);
    }
  }

  std::string origin_;
};

std::size_t count_tokens(const std::vector<std::string>& sentences) {
  std::size_t n = 0;
  for (const auto& s : sentences) n += tokenize(s).size();
  return n;
}

}  // namespace

Session parse_session(const json& doc, const std::string& origin) {
  using vt = json::value_t;
  Reader r(origin);
  if (!doc.is_object()) r.fail("$", "session document must be an object");

  Session session;
  session.session_id = r.field(doc, "$", "session_id", vt::string).get<std::string>();
  const std::string& sid = session.session_id;
  if (sid.empty()) r.fail("$.session_id", "must be non-empty");

  const auto& source = r.field(doc, "$", "source", vt::string, sid).get<std::string>();
  try {
    session.source = parse_source(source);
  } catch (const ValidationError& e) {
    r.fail("$.source", e.what(), sid);
  }
  session.topic = r.field(doc, "$", "topic", vt::string, sid).get<std::string>();
  session.moderated = r.field(doc, "$", "moderated", vt::boolean, sid).get<bool>();

  const auto& speakers = r.field(doc, "$", "speakers", vt::array, sid);
  std::set<std::string> speaker_ids;
  std::size_t moderators = 0;
  for (std::size_t i = 0; i < speakers.size(); ++i) {
    const std::string path = fmt::format("$.speakers[{}]", i);
    const auto& js = speakers[i];
    Speaker sp;
    sp.id = r.field(js, path, "id", vt::string, sid).get<std::string>();
    if (sp.id.empty()) r.fail(path + ".id", "must be non-empty", sid);
    sp.display_name = r.field(js, path, "display_name", vt::string, sid).get<std::string>();
    try {
      sp.role = parse_role(r.field(js, path, "role", vt::string, sid).get<std::string>());
    } catch (const ValidationError& e) {
      r.fail(path + ".role", e.what(), sid);
    }
    if (auto* v = r.optional_field(js, path, "native_language", vt::string, sid))
      sp.native_language = v->get<std::string>();
    if (auto* v = r.optional_field(js, path, "global_id", vt::string, sid))
      sp.global_id = v->get<std::string>();
    if (!speaker_ids.insert(sp.id).second)
      r.fail(path + ".id", "duplicate speaker id '" + sp.id + "'", sid);
    if (sp.role == Role::moderator) ++moderators;
    session.speakers.push_back(std::move(sp));
  }
  if (moderators > 1) r.fail("$.speakers", "more than one moderator", sid);
  if (session.moderated != (moderators == 1)) {
    r.fail("$.moderated",
           session.moderated ? "moderated session has no moderator speaker"
                             : "non-moderated session lists a moderator speaker",
           sid);
  }

  const auto& segments = r.field(doc, "$", "segments", vt::array, sid);
  if (segments.empty()) r.fail("$.segments", "session has no segments", sid);
  std::set<std::string> segment_ids;
  std::size_t moderator_sentences = 0;
  for (std::size_t g = 0; g < segments.size(); ++g) {
    const std::string gpath = fmt::format("$.segments[{}]", g);
    const auto& jg = segments[g];
    Segment seg;
    seg.segment_id = r.field(jg, gpath, "segment_id", vt::string, sid).get<std::string>();
    if (!segment_ids.insert(seg.segment_id).second)
      r.fail(gpath + ".segment_id", "duplicate segment_id '" + seg.segment_id + "'", sid);
    if (auto* v = r.optional_field(jg, gpath, "subtopic_label", vt::string, sid))
      seg.subtopic_label = v->get<std::string>();
    const auto& utts = r.field(jg, gpath, "utterances", vt::array, sid);
    if (utts.empty()) r.fail(gpath + ".utterances", "segment has no utterances", sid);
    for (std::size_t u = 0; u < utts.size(); ++u) {
      const std::string upath = fmt::format("{}.utterances[{}]", gpath, u);
      Utterance utt;
      utt.speaker_id = r.field(utts[u], upath, "speaker_id", vt::string, sid).get<std::string>();
      if (!speaker_ids.count(utt.speaker_id))
        r.fail(upath + ".speaker_id", "unresolved speaker_id '" + utt.speaker_id + "'", sid);
      const auto& sents = r.field(utts[u], upath, "sentences", vt::array, sid);
      if (sents.empty()) r.fail(upath + ".sentences", "utterance has no sentences", sid);
      for (std::size_t s = 0; s < sents.size(); ++s) {
        const std::string spath = fmt::format("{}.sentences[{}]", upath, s);
        if (!sents[s].is_string()) r.fail(spath, "expected a string", sid);
        auto text = sents[s].get<std::string>();
        if (tokenize(text).empty()) r.fail(spath, "empty sentence", sid);
        utt.sentences.push_back(std::move(text));
      }
      utt.token_count = count_tokens(utt.sentences);
      if (session.is_moderator(utt.speaker_id)) moderator_sentences += utt.sentences.size();
      seg.utterances.push_back(std::move(utt));
    }
    session.segments.push_back(std::move(seg));
  }
  if (session.moderated && moderator_sentences == 0)
    r.fail("$.moderated", "moderated session has zero moderator sentences", sid);
  return session;
}

Corpus load_corpus(const std::vector<std::filesystem::path>& paths) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  for (const auto& p : paths) {
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::directory_iterator(p))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
          found.push_back(entry.path());
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(p);
    }
  }

  Corpus corpus;
  std::map<std::string, std::string> seen;  // session_id -> file
  for (const auto& file : files) {
    std::ifstream in(file);
    if (!in) throw ValidationError(file.string() + ": cannot open file");
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ValidationError(file.string() + ": $: invalid JSON: " + e.what());
    }
    Session session = parse_session(doc, file.string());
    auto [it, inserted] = seen.emplace(session.session_id, file.string());
    if (!inserted) {
      throw ValidationError(fmt::format("{}: $.session_id: duplicate session_id '{}' (first seen in {})",
                                        file.string(), session.session_id, it->second));
    }
    corpus.push_back(std::move(session));
  }
  return corpus;
}

// --- serialization ----------------------------------------------------------

json to_json(const Session& session) {
  json speakers = json::array();
  for (const auto& sp : session.speakers) {
    json j = {{"id", sp.id}, {"display_name", sp.display_name}, {"role", to_string(sp.role)}};
    if (sp.native_language) j["native_language"] = *sp.native_language;
    if (sp.global_id) j["global_id"] = *sp.global_id;
    speakers.push_back(std::move(j));
  }
  json segments = json::array();
  for (const auto& seg : session.segments) {
    json utts = json::array();
    for (const auto& u : seg.utterances)
      utts.push_back({{"speaker_id", u.speaker_id}, {"sentences", u.sentences},
                      {"token_count", u.token_count}});
    json js = {{"segment_id", seg.segment_id}, {"utterances", std::move(utts)}};
    if (seg.subtopic_label) js["subtopic_label"] = *seg.subtopic_label;
    segments.push_back(std::move(js));
  }
  return {{"session_id", session.session_id},
          {"source", to_string(session.source)},
          {"topic", session.topic},
          {"moderated", session.moderated},
          {"speakers", std::move(speakers)},
          {"segments", std::move(segments)}};
}

json to_json(const Corpus& corpus) {
  json sessions = json::array();
  for (const auto& s : corpus) sessions.push_back(to_json(s));
  return {{"sessions", std::move(sessions)}};
}

Corpus corpus_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("sessions") || !doc["sessions"].is_array())
    throw ValidationError("corpus document: $.sessions: expected an array");
  Corpus corpus;
  std::set<std::string> ids;
  const auto& sessions = doc["sessions"];
  for (std::size_t i = 0; i < sessions.size(); ++i) {
    Session s = parse_session(sessions[i], fmt::format("corpus document $.sessions[{}]", i));
    if (!ids.insert(s.session_id).second)
      throw ValidationError("corpus document: duplicate session_id '" + s.session_id + "'");
    corpus.push_back(std::move(s));
  }
  return corpus;
}

// --- statistics -------------------------------------------------------------

namespace {
double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}
}  // namespace

double GroupStats::avg_speakers() const { return ratio(speaker_slots, sessions); }
double GroupStats::avg_segments() const { return ratio(segments, sessions); }
double GroupStats::avg_sentences() const { return ratio(sentences, sessions); }
double GroupStats::avg_moderator_sentences() const { return ratio(moderator_sentences, sessions); }
double GroupStats::avg_tokens() const { return ratio(tokens, sessions); }

CorpusStats corpus_stats(const Corpus& corpus) {
  // Group order: club/moderated, club/non-moderated, volunteer/moderated,
  // volunteer/non-moderated.
  std::map<std::tuple<int, int>, GroupStats> groups;
  std::map<std::tuple<int, int>, std::set<std::string>> identities;
  std::set<std::string> all_identities;
  CorpusStats stats;

  for (const auto& session : corpus) {
    const auto key = std::make_tuple(static_cast<int>(session.source), session.moderated ? 0 : 1);
    GroupStats& g = groups[key];
    g.source = session.source;
    g.moderated = session.moderated;
    for (GroupStats* t : {&g, &stats.totals}) {
      t->sessions += 1;
      t->speaker_slots += session.speakers.size();
      t->segments += session.segments.size();
    }
    for (const auto& sp : session.speakers) {
      identities[key].insert(sp.identity());
      all_identities.insert(sp.identity());
    }
    for (const auto& seg : session.segments) {
      for (const auto& utt : seg.utterances) {
        const bool mod = session.is_moderator(utt.speaker_id);
        for (GroupStats* t : {&g, &stats.totals}) {
          t->sentences += utt.sentences.size();
          t->tokens += utt.token_count;
          if (mod) t->moderator_sentences += utt.sentences.size();
        }
      }
    }
  }
  for (auto& [key, g] : groups) {
    g.unique_speakers = identities[key].size();
    stats.groups.push_back(g);
  }
  stats.totals.unique_speakers = all_identities.size();
  return stats;
}

std::string stats_csv(const CorpusStats& stats) {
  std::string out =
      "source,moderated,sessions,unique_speakers,avg_speakers,avg_segments,avg_sentences,"
      "avg_moderator_sentences,avg_tokens,total_segments,total_sentences,"
      "total_moderator_sentences,total_tokens\n";
  auto row = [&](std::string_view source, std::string_view moderated, const GroupStats& g) {
    out += fmt::format("{},{},{},{},{:.2f},{:.2f},{:.2f},{:.2f},{:.2f},{},{},{},{}\n", source,
                       moderated, g.sessions, g.unique_speakers, g.avg_speakers(),
                       g.avg_segments(), g.avg_sentences(), g.avg_moderator_sentences(),
                       g.avg_tokens(), g.segments, g.sentences, g.moderator_sentences, g.tokens);
  };
  for (const auto& g : stats.groups) row(to_string(g.source), g.moderated ? "true" : "false", g);
  row("total", "", stats.totals);
  return out;
}

}  // namespace modlab::corpus
