#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <random>
#include <regex>

#include "modlab/hashing.hpp"
#include "modlab/llm/gateway.hpp"
#include "modlab/schema.hpp"

namespace modlab::llm {

using nlohmann::json;

namespace {

std::string between(const std::string& text, std::string_view open, std::string_view close) {
  const auto b = text.find(open);
  if (b == std::string::npos) return {};
  const auto start = b + open.size();
  const auto e = text.find(close, start);
  return text.substr(start, e == std::string::npos ? std::string::npos : e - start);
}

std::vector<std::string> quoted_options(const std::string& block) {
  static const std::regex re("\"(\\d+ \\([^\"]*\\))\"");
  std::vector<std::string> out;
  for (std::sregex_iterator it(block.begin(), block.end(), re), end; it != end; ++it)
    out.push_back((*it)[1]);
  return out;
}

std::vector<std::pair<int, std::string>> numbered_options(const std::string& block) {
  static const std::regex re("(\\d+) \\(([^)]*)\\)");
  std::vector<std::pair<int, std::string>> out;
  for (std::sregex_iterator it(block.begin(), block.end(), re), end; it != end; ++it)
    out.emplace_back(std::stoi((*it)[1]), (*it)[2]);
  return out;
}

std::string target_sentence(const std::string& prompt) {
  std::string line = between(prompt, "Target sentence:\n\n", "\n");
  const auto colon = line.find("): ");
  return colon == std::string::npos ? line : line.substr(colon + 3);
}

enum class Kind { question, short_reply, coordination, interpretation, opinion, info, experience, echo, acknowledge };

Kind classify(const std::string& sentence, std::mt19937_64& rng) {
  std::string lower;
  for (char c : sentence) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  std::size_t words = 1;
  for (char c : sentence) words += c == ' ';
  if (!sentence.empty() && sentence.back() == '?') return Kind::question;
  if (words <= 3) return Kind::short_reply;
  if (lower.find("let's") != std::string::npos || lower.find("next") != std::string::npos ||
      lower.find("minutes") != std::string::npos)
    return Kind::coordination;
  if (lower.find("so you mean") != std::string::npos || lower.find("in other words") != std::string::npos)
    return Kind::interpretation;
  if (lower.find("i think") != std::string::npos || lower.find("in my opinion") != std::string::npos)
    return Kind::opinion;
  if (lower.find("when i") != std::string::npos || lower.find("my ") != std::string::npos)
    return Kind::experience;
  if (lower.find("thank") != std::string::npos || lower.find("great") != std::string::npos ||
      lower.find("good point") != std::string::npos)
    return Kind::acknowledge;
  if (lower.find("you said") != std::string::npos || lower.find("like you") != std::string::npos ||
      lower.find("right,") != std::string::npos)
    return Kind::echo;
  return std::uniform_int_distribution<int>(0, 1)(rng) == 0 ? Kind::info : Kind::opinion;
}

template <std::size_t N>
const std::string& pick(const std::array<std::string, N>& bank, std::mt19937_64& rng) {
  return bank[std::uniform_int_distribution<std::size_t>(0, N - 1)(rng)];
}

struct WhowChoice {
  std::vector<Motive> motives;
  DialogueAct act;
  std::string reason;
};

WhowChoice whow_for(Kind kind, std::mt19937_64& rng) {
  static const std::array<std::string, 3> probing = {
      "The moderator asks the participant to share their opinion on the topic.",
      "The moderator asks a follow-up question about the participant's experience.",
      "The moderator invites the participant to explain the reasons behind the answer."};
  static const std::array<std::string, 2> utility = {
      "The moderator gives a brief response to show attention.",
      "The moderator says a short filler word while listening."};
  static const std::array<std::string, 2> instruction = {
      "The moderator asks the group to move on to the next question.",
      "The moderator manages the time left for the discussion."};
  static const std::array<std::string, 2> interpretation = {
      "The moderator rephrases the participant's answer to clarify its meaning.",
      "The moderator summarizes what the participant said in other words."};
  static const std::array<std::string, 2> opinion = {
      "The moderator shares a personal opinion about the topic.",
      "The moderator expresses a view on the question being discussed."};
  static const std::array<std::string, 2> info = {
      "The moderator provides background information about the topic.",
      "The moderator explains a fact related to the discussion."};
  static const std::array<std::string, 2> experience = {
      "The moderator shares a personal story from daily life.",
      "The moderator describes a personal experience related to the topic."};
  static const std::array<std::string, 2> echo = {
      "The moderator repeats the participant's point and adds a comment.",
      "The moderator reinforces the participant's idea with more detail."};
  static const std::array<std::string, 2> acknowledge = {
      "The moderator thanks the participant for the answer.",
      "The moderator praises the participant's contribution."};

  using M = Motive;
  using A = DialogueAct;
  switch (kind) {
    case Kind::question: return {{M::informational}, A::probing, pick(probing, rng)};
    case Kind::short_reply: return {{M::social}, A::utility, pick(utility, rng)};
    case Kind::coordination: return {{M::coordinative}, A::instruction, pick(instruction, rng)};
    case Kind::interpretation: return {{M::informational}, A::interpretation, pick(interpretation, rng)};
    case Kind::opinion: return {{M::informational}, A::supplement, pick(opinion, rng)};
    case Kind::info: return {{M::informational}, A::supplement, pick(info, rng)};
    case Kind::experience: return {{M::social, M::informational}, A::supplement, pick(experience, rng)};
    case Kind::echo: return {{M::informational, M::social}, A::supplement, pick(echo, rng)};
    case Kind::acknowledge: return {{M::social}, A::supplement, pick(acknowledge, rng)};
  }
  return {{}, A::utility, "The moderator speaks."};
}

std::string strategy_for(Kind kind) {
  switch (kind) {
    case Kind::question: return "Information Probing";
    case Kind::short_reply: return "Backchanneling";
    case Kind::coordination: return "Coordination Instruction";
    case Kind::interpretation: return "Information Interpretation";
    case Kind::opinion: return "Opinion Sharing";
    case Kind::info: return "Information Sharing";
    case Kind::experience: return "Experience Sharing";
    case Kind::echo: return "Echoing";
    case Kind::acknowledge: return "Acknowledgement";
  }
  return {};
}

std::string choose_target(const std::string& prompt, std::mt19937_64& rng) {
  const auto options = quoted_options(between(prompt, "\"target speaker(s)\": String(one option from ", "),\"reason\""));
  if (options.empty()) return "1 (Everyone)";
  return options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
}

std::string mock_whow(const std::string& prompt, std::mt19937_64& rng) {
  const WhowChoice choice = whow_for(classify(target_sentence(prompt), rng), rng);
  json motives = json::array();
  for (Motive m : choice.motives) motives.push_back(std::string(to_string(m)) + " motive");
  return json{{"motives", motives},
              {"dialogue act", act_prompt_label(choice.act)},
              {"target speaker(s)", choose_target(prompt, rng)},
              {"reason", choice.reason}}
      .dump();
}

std::string mock_eslmod(const std::string& prompt, std::mt19937_64& rng) {
  const auto options = numbered_options(between(prompt, "\"dialogue act\": String(one option from ", "),\"target"));
  const Kind kind = classify(target_sentence(prompt), rng);
  const WhowChoice whow = whow_for(kind, rng);
  std::string label;
  if (!options.empty()) {
    const std::string wanted = strategy_for(kind);
    auto it = std::find_if(options.begin(), options.end(), [&](const auto& o) { return o.second == wanted; });
    if (it == options.end())
      it = options.begin() + static_cast<std::ptrdiff_t>(
                                 std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng));
    label = fmt::format("{} ({})", it->first, it->second);
  }
  return json{{"dialogue act", label},
              {"target speaker(s)", choose_target(prompt, rng)},
              {"reason", whow.reason}}
      .dump();
}

std::string mock_quality(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> score(1, 5);
  const int overall = score(rng);
  return json{{"overall", overall},
              {"topic_management", score(rng)},
              {"tone_appropriateness", score(rng)},
              {"conversation_opening", score(rng)},
              {"conversation_closing", score(rng)},
              {"rationale", fmt::format("The speaker's contributions merit an overall score of {}.", overall)}}
      .dump();
}

}  // namespace

std::string mock_response(const PromptRequest& request, std::uint64_t seed) {
  std::mt19937_64 rng(fnv1a64(request.prompt_text) ^ (seed * 0x9E3779B97F4A7C15ULL));
  switch (request.schema_tag) {
    case SchemaTag::whow: return mock_whow(request.prompt_text, rng);
    case SchemaTag::eslmod: return mock_eslmod(request.prompt_text, rng);
    case SchemaTag::quality: return mock_quality(rng);
  }
  return "{}";
}

}  // namespace modlab::llm
