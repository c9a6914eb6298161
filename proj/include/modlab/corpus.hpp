#pragma once

// Transcript data model: sessions split into manually delimited segments,
// each segment an ordered list of utterances whose sentences are authored in
// the input file.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace modlab::corpus {

enum class Role { moderator, participant };
enum class Source { club, volunteer };

std::string_view to_string(Role role);
std::string_view to_string(Source source);
Role parse_role(std::string_view text);
Source parse_source(std::string_view text);

struct Speaker {
  std::string id;
  std::string display_name;
  Role role = Role::participant;
  std::optional<std::string> native_language;
  /// Identity shared across sessions; falls back to `id` when absent.
  std::optional<std::string> global_id;

  const std::string& identity() const { return global_id ? *global_id : id; }
  bool operator==(const Speaker&) const = default;
};

struct Utterance {
  std::string speaker_id;
  std::vector<std::string> sentences;
  std::size_t token_count = 0;
  bool operator==(const Utterance&) const = default;
};

struct Segment {
  std::string segment_id;
  std::vector<Utterance> utterances;
  std::optional<std::string> subtopic_label;
  bool operator==(const Segment&) const = default;
};

struct Session {
  std::string session_id;
  Source source = Source::club;
  std::string topic;
  bool moderated = false;
  std::vector<Speaker> speakers;
  std::vector<Segment> segments;

  const Speaker* find_speaker(std::string_view id) const;
  const Speaker* moderator() const;
  const Segment* find_segment(std::string_view id) const;
  bool is_moderator(std::string_view speaker_id) const;
  bool operator==(const Session&) const = default;
};

using Corpus = std::vector<Session>;

/// Splits on Unicode whitespace after trimming; punctuation stays attached.
std::vector<std::string> tokenize(std::string_view text);

/// Raw-text import helper: breaks after '.', '?' or '!' followed by whitespace.
std::vector<std::string> split_sentences(std::string_view text);

/// Sentence-level location of a moderator sentence inside a session.
struct SentenceRef {
  std::string session_id;
  std::string segment_id;
  std::size_t utterance_idx = 0;
  std::size_t sentence_idx = 0;

  auto operator<=>(const SentenceRef&) const = default;
};

/// All moderator sentences of a session in transcript order.
std::vector<SentenceRef> moderator_sentences(const Session& session);
std::vector<SentenceRef> moderator_sentences(const Corpus& corpus);

const Session* find_session(const Corpus& corpus, std::string_view id);

/// Parses and validates one session document. `origin` names the source file
/// in diagnostics.
Session parse_session(const nlohmann::json& doc, const std::string& origin);

/// Loads session files. Directories contribute their *.json files in name
/// order. Throws ValidationError naming the file and JSON path on any schema
/// or invariant violation, or on duplicate session ids.
Corpus load_corpus(const std::vector<std::filesystem::path>& paths);

nlohmann::json to_json(const Session& session);
nlohmann::json to_json(const Corpus& corpus);
Corpus corpus_from_json(const nlohmann::json& doc);

struct GroupStats {
  Source source = Source::club;
  bool moderated = false;
  std::size_t sessions = 0;
  std::size_t unique_speakers = 0;
  std::size_t speaker_slots = 0;  // speakers summed over sessions
  std::size_t segments = 0;
  std::size_t sentences = 0;
  std::size_t moderator_sentences = 0;
  std::size_t tokens = 0;

  double avg_speakers() const;
  double avg_segments() const;
  double avg_sentences() const;
  double avg_moderator_sentences() const;
  double avg_tokens() const;
};

struct CorpusStats {
  std::vector<GroupStats> groups;  // keyed by (source, moderated), fixed order
  GroupStats totals;
};

CorpusStats corpus_stats(const Corpus& corpus);

/// One row per (source, moderated) group plus a `total` row.
std::string stats_csv(const CorpusStats& stats);

}  // namespace modlab::corpus
