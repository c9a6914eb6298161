#pragma once

// Reduction of annotation rationales to short intent phrases and the token
// filtering applied before embedding and keyword scoring.

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "modlab/corpus.hpp"

namespace modlab::discovery {

/// Everything up to the first '.', '?' or '!' that is followed by whitespace
/// and an uppercase letter, or by the end of the text.
std::string first_sentence(std::string_view text);

/// Syntactic reducer: maps a first sentence to its root-verb phrase.
class ParseProvider {
 public:
  virtual ~ParseProvider() = default;
  /// nullopt when the provider could not produce a phrase.
  virtual std::optional<std::string> reduce(std::string_view sentence) = 0;
};

/// Runs a shell command with the sentence on stdin and takes the first line
/// of stdout as the phrase.
class CommandParseProvider : public ParseProvider {
 public:
  explicit CommandParseProvider(std::string command) : command_(std::move(command)) {}
  std::optional<std::string> reduce(std::string_view sentence) override;

 private:
  std::string command_;
};

/// Rule-based verb-phrase extraction. After a leading "The moderator",
/// auxiliaries and -ly adverbs are skipped; the phrase runs from the verb to
/// the first clause boundary (",", ";", ":", a subordinator, a purpose
/// infinitive, or a participle followed by a preposition). Without that
/// subject the whole first sentence is returned.
std::string reduce_reason_rules(std::string_view first);

/// First sentence, then the provider's phrase if configured and non-empty,
/// else the rule-based phrase.
std::string reduce_reason(std::string_view reason, ParseProvider* provider = nullptr);

/// Built-in English stopword list, lowercased and sorted.
const std::vector<std::string>& english_stopwords();

/// base ∪ display-name tokens ∪ topic-title tokens not already in base;
/// lowercased, deduplicated, sorted.
std::vector<std::string> curate_stopwords(const corpus::Corpus& corpus,
                                          const std::vector<std::string>& base = english_stopwords());

/// Lowercased alphanumeric runs of length >= 2, excluding pure numbers and
/// any word in `stopwords`.
std::vector<std::string> content_tokens(std::string_view text,
                                        const std::set<std::string>& stopwords = {});

}  // namespace modlab::discovery
