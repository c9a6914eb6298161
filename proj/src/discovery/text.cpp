#include "modlab/discovery/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "modlab/hashing.hpp"

namespace modlab::discovery {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

/// Lowercased word with surrounding punctuation removed.
std::string bare(std::string_view token) {
  std::size_t b = 0, e = token.size();
  while (b < e && !std::isalnum(static_cast<unsigned char>(token[b]))) ++b;
  while (e > b && !std::isalnum(static_cast<unsigned char>(token[e - 1]))) --e;
  return lower(token.substr(b, e - b));
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

const std::set<std::string> kAuxiliaries = {
    "is", "are", "was", "were", "has", "have", "had", "be", "been", "being", "does", "did",
    "do", "also", "then", "again", "now", "just", "first", "further", "still", "not", "can",
    "could", "will", "would", "may", "might", "should", "seems", "appears"};

const std::set<std::string> kLyVerbs = {"apply", "reply", "supply", "rely", "comply", "multiply",
                                        "applies", "replies", "supplies", "relies"};

const std::set<std::string> kSubordinators = {
    "because", "since", "which", "who", "whom", "whose", "that", "while", "whereas",
    "although", "though", "thereby", "thus", "so", "whereby", "where", "when", "as"};

const std::set<std::string> kDeterminers = {
    "the", "a", "an", "this", "that", "these", "those", "his", "her", "their", "its", "our",
    "my", "your", "all", "each", "every", "some", "any", "him", "them", "us", "me", "everyone",
    "everybody", "others", "other", "another", "what", "how", "whether", "participants",
    "participant", "speakers", "speaker", "group", "discussion", "topic", "one", "two"};

const std::set<std::string> kPrepositions = {
    "in", "on", "at", "for", "with", "from", "into", "during", "about", "by", "of", "to",
    "through", "under", "over", "within", "across", "after", "before", "among"};

bool is_adverb(const std::string& w) {
  return w.size() > 3 && ends_with(w, "ly") && !kLyVerbs.count(w);
}

bool is_participle(const std::string& w) {
  return w.size() > 4 && (ends_with(w, "ing") || ends_with(w, "ed"));
}

std::vector<std::string> split_ws(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (is_space(c)) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::string strip_trailing_punct(std::string s) {
  while (!s.empty() && std::string_view(".,;:!?\"'").find(s.back()) != std::string_view::npos)
    s.pop_back();
  return s;
}

}  // namespace

std::string first_sentence(std::string_view text) {
  const std::string t = trim(text);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] != '.' && t[i] != '?' && t[i] != '!') continue;
    std::size_t j = i + 1;
    if (j == t.size()) break;
    if (!is_space(t[j])) continue;
    while (j < t.size() && is_space(t[j])) ++j;
    if (j == t.size() || std::isupper(static_cast<unsigned char>(t[j])) || t[j] == '"')
      return t.substr(0, i + 1);
  }
  return t;
}

std::string reduce_reason_rules(std::string_view first) {
  const std::vector<std::string> tokens = split_ws(first);
  if (tokens.size() < 3 || bare(tokens[0]) != "the" || bare(tokens[1]) != "moderator")
    return trim(first);

  std::size_t i = 2;
  while (i < tokens.size() && (kAuxiliaries.count(bare(tokens[i])) || is_adverb(bare(tokens[i]))))
    ++i;
  if (i == tokens.size()) return trim(first);

  std::vector<std::string> phrase = {tokens[i]};
  bool stop = std::string_view(",;:.").find(tokens[i].back()) != std::string_view::npos;
  for (std::size_t j = i + 1; j < tokens.size() && !stop; ++j) {
    const std::string& tok = tokens[j];
    const std::string w = bare(tok);
    if (w.empty()) break;
    if (kSubordinators.count(w)) break;
    if (w == "to" && j + 1 < tokens.size()) {
      const std::string& next = tokens[j + 1];
      const bool capitalised = std::isupper(static_cast<unsigned char>(next[0])) ||
                               next[0] == '\'' || next[0] == '"';
      if (!capitalised && !kDeterminers.count(bare(next))) break;
    }
    phrase.push_back(tok);
    if (std::string_view(",;:.").find(tok.back()) != std::string_view::npos) break;
    if (is_participle(w) && j + 1 < tokens.size() && kPrepositions.count(bare(tokens[j + 1])))
      break;
  }

  std::string out;
  for (const auto& p : phrase) {
    if (!out.empty()) out += ' ';
    out += p;
  }
  out = strip_trailing_punct(out);
  return out.empty() ? trim(first) : out;
}

std::string reduce_reason(std::string_view reason, ParseProvider* provider) {
  const std::string first = first_sentence(reason);
  if (provider != nullptr) {
    if (auto phrase = provider->reduce(first); phrase && !trim(*phrase).empty()) return trim(*phrase);
  }
  return reduce_reason_rules(first);
}

std::optional<std::string> CommandParseProvider::reduce(std::string_view sentence) {
  namespace fs = std::filesystem;
  const fs::path input = fs::temp_directory_path() /
                         ("modlab-parse-" + sha256_hex(std::string(sentence) + command_).substr(0, 16));
  {
    std::ofstream out(input);
    out << sentence << '\n';
  }
  const std::string cmd = command_ + " < '" + input.string() + "'";
  std::string output;
  if (FILE* pipe = popen(cmd.c_str(), "r")) {
    std::array<char, 512> buf{};
    while (fgets(buf.data(), static_cast<int>(buf.size()), pipe)) output += buf.data();
    const int status = pclose(pipe);
    std::error_code ec;
    fs::remove(input, ec);
    if (status != 0) return std::nullopt;
  } else {
    return std::nullopt;
  }
  const auto nl = output.find('\n');
  std::string line = trim(output.substr(0, nl));
  if (line.empty()) return std::nullopt;
  return line;
}

const std::vector<std::string>& english_stopwords() {
  static const std::vector<std::string> kList = [] {
    std::vector<std::string> v = {
        "a", "about", "above", "after", "again", "against", "all", "am", "an", "and", "any",
        "are", "aren't", "as", "at", "be", "because", "been", "before", "being", "below",
        "between", "both", "but", "by", "can", "cannot", "could", "couldn't", "did", "didn't",
        "do", "does", "doesn't", "doing", "don't", "down", "during", "each", "few", "for",
        "from", "further", "had", "hadn't", "has", "hasn't", "have", "haven't", "having", "he",
        "her", "here", "hers", "herself", "him", "himself", "his", "how", "i", "if", "in",
        "into", "is", "isn't", "it", "it's", "its", "itself", "just", "let's", "ll", "me",
        "more", "most", "mustn't", "my", "myself", "no", "nor", "not", "now", "of", "off",
        "on", "once", "only", "or", "other", "ought", "our", "ours", "ourselves", "out",
        "over", "own", "re", "s", "same", "she", "should", "shouldn't", "so", "some", "such",
        "t", "than", "that", "the", "their", "theirs", "them", "themselves", "then", "there",
        "these", "they", "this", "those", "through", "to", "too", "under", "until", "up", "ve",
        "very", "was", "wasn't", "we", "were", "weren't", "what", "when", "where", "which",
        "while", "who", "whom", "why", "will", "with", "won't", "would", "wouldn't", "you",
        "your", "yours", "yourself", "yourselves"};
    std::sort(v.begin(), v.end());
    return v;
  }();
  return kList;
}

std::vector<std::string> curate_stopwords(const corpus::Corpus& corpus,
                                          const std::vector<std::string>& base) {
  std::set<std::string> base_set;
  for (const auto& w : base) base_set.insert(lower(w));
  std::set<std::string> out = base_set;
  for (const auto& session : corpus) {
    for (const auto& sp : session.speakers)
      for (const auto& t : content_tokens(sp.display_name)) out.insert(t);
    for (const auto& t : content_tokens(session.topic, base_set)) out.insert(t);
  }
  return {out.begin(), out.end()};
}

std::vector<std::string> content_tokens(std::string_view text, const std::set<std::string>& stopwords) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (cur.size() >= 2 && cur.find_first_not_of("0123456789") != std::string::npos &&
        !stopwords.count(cur))
      out.push_back(cur);
    cur.clear();
  };
  for (unsigned char c : text) {
    if (std::isalnum(c) || c >= 0x80) cur.push_back(static_cast<char>(std::tolower(c)));
    else flush();
  }
  flush();
  return out;
}

}  // namespace modlab::discovery
