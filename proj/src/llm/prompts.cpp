#include "modlab/llm/prompts.hpp"

#include <fmt/format.h>

#include <deque>

#include "modlab/error.hpp"
#include "modlab/schema.hpp"

namespace modlab::llm {

using corpus::Role;
using corpus::SentenceRef;
using corpus::Session;

namespace {

struct Line {
  const corpus::Speaker* speaker;
  std::string text;
};

std::string join(const std::vector<std::string>& parts, std::size_t begin, std::size_t end,
                 std::string_view sep = " ") {
  std::string out;
  for (std::size_t i = begin; i < end; ++i) {
    if (i > begin) out += sep;
    out += parts[i];
  }
  return out;
}

std::string speaker_tag(const corpus::Speaker& sp) {
  return fmt::format("{} ({})", sp.display_name, corpus::to_string(sp.role));
}

std::string render(const Line& line) { return speaker_tag(*line.speaker) + ": " + line.text; }

struct TargetContext {
  std::vector<Line> prior;
  Line target;
  std::vector<Line> post;
};

TargetContext locate(const Session& session, const SentenceRef& ref, ContextWindow window) {
  std::size_t seg_idx = session.segments.size();
  for (std::size_t g = 0; g < session.segments.size(); ++g)
    if (session.segments[g].segment_id == ref.segment_id) seg_idx = g;
  if (seg_idx == session.segments.size())
    throw DataError(fmt::format("session '{}' has no segment '{}'", session.session_id, ref.segment_id));
  const auto& seg = session.segments[seg_idx];
  if (ref.utterance_idx >= seg.utterances.size() ||
      ref.sentence_idx >= seg.utterances[ref.utterance_idx].sentences.size())
    throw DataError(fmt::format("sentence {}/{} out of range in segment '{}'", ref.utterance_idx,
                                ref.sentence_idx, ref.segment_id));
  const auto& utt = seg.utterances[ref.utterance_idx];
  const corpus::Speaker* speaker = session.find_speaker(utt.speaker_id);
  if (speaker == nullptr || speaker->role != Role::moderator)
    throw DataError(fmt::format("target sentence {}:{}:{}:{} is not a moderator sentence",
                                session.session_id, ref.segment_id, ref.utterance_idx,
                                ref.sentence_idx));

  TargetContext ctx{{}, {speaker, utt.sentences[ref.sentence_idx]}, {}};

  std::deque<Line> prior;
  auto push_prior = [&](Line line) {
    prior.push_back(std::move(line));
    if (prior.size() > window.prior) prior.pop_front();
  };
  for (std::size_t g = 0; g <= seg_idx; ++g) {
    const auto& s = session.segments[g];
    const std::size_t end = g == seg_idx ? ref.utterance_idx : s.utterances.size();
    for (std::size_t u = 0; u < end; ++u)
      push_prior({session.find_speaker(s.utterances[u].speaker_id), join(s.utterances[u].sentences, 0, s.utterances[u].sentences.size())});
  }
  if (ref.sentence_idx > 0) push_prior({speaker, join(utt.sentences, 0, ref.sentence_idx)});
  if (window.prior == 0) prior.clear();
  ctx.prior.assign(prior.begin(), prior.end());

  auto push_post = [&](Line line) {
    if (ctx.post.size() < window.post) ctx.post.push_back(std::move(line));
  };
  if (ref.sentence_idx + 1 < utt.sentences.size())
    push_post({speaker, join(utt.sentences, ref.sentence_idx + 1, utt.sentences.size())});
  for (std::size_t g = seg_idx; g < session.segments.size() && ctx.post.size() < window.post; ++g) {
    const auto& s = session.segments[g];
    const std::size_t begin = g == seg_idx ? ref.utterance_idx + 1 : 0;
    for (std::size_t u = begin; u < s.utterances.size(); ++u)
      push_post({session.find_speaker(s.utterances[u].speaker_id), join(s.utterances[u].sentences, 0, s.utterances[u].sentences.size())});
  }
  return ctx;
}

std::string role_and_topic(const Session& session) {
  return fmt::format(
      "Your role is an annotator, annotating the moderation behavior of a second language "
      "speakers' English conversation session. The topic is \"{}\".",
      session.topic);
}

std::string context_blocks(const TargetContext& ctx, ContextWindow window) {
  std::string out;
  out += fmt::format("Dialogue context before the target sentence (including dialogue up to {} "
                     "utterances prior):\n",
                     window.prior);
  for (const auto& l : ctx.prior) out += "\n" + render(l) + "\n";
  out += "\nTarget sentence:\n\n" + render(ctx.target) + "\n";
  out += fmt::format("\nDialogue context after the target sentence (including dialogue up to {} "
                     "utterances after the target):\n",
                     window.post);
  for (const auto& l : ctx.post) out += "\n" + render(l) + "\n";
  return out;
}

std::string quoted_list(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += "\"" + items[i] + "\"";
  }
  return out;
}

}  // namespace

std::vector<std::string> target_speaker_options(const Session& session) {
  std::vector<std::string> out = {"0 (Unknown)", "1 (Everyone)"};
  for (const auto& sp : session.speakers)
    if (sp.role == Role::participant)
      out.push_back(fmt::format("{} ({})", out.size(), sp.display_name));
  return out;
}

std::string build_whow_prompt(const Session& session, const SentenceRef& target,
                              ContextWindow window) {
  const TargetContext ctx = locate(session, target, window);
  std::string p;
  p += role_and_topic(session) + "\n\n";
  p += "Given the definitions and the examples, and the context of prior and posterior "
       "dialogue, please label which motives the target sentence carries, which dialogue act "
       "it belongs to, and who the moderator is talking to.\n\n";

  p += "Motives: Motives are the high level motivation that the moderator aims to achieve. The "
       "definitions and examples of the motives are below:\n";
  for (Motive m : kMotives) {
    p += fmt::format("\n{} motive: {}\nexamples:", to_string(m), motive_definition(m));
    for (DialogueAct a : {DialogueAct::probing, DialogueAct::instruction, DialogueAct::supplement,
                          DialogueAct::utility})
      p += " " + cell_examples(m, a).front();
    p += "\n";
  }

  p += "\nDialogue acts: Dialogue acts refer to the function of a piece of speech. The "
       "definitions and examples of the dialogue acts are below:\n";
  for (DialogueAct a : kDialogueActs) {
    p += fmt::format("\n{}: {}\nexamples:", act_prompt_label(a), act_definition(a));
    for (Motive m : kMotives) p += " " + cell_examples(m, a).front();
    p += "\n";
  }

  p += "\n" + context_blocks(ctx, window) + "\n";

  const std::vector<std::string> motives = {"informational motive", "social motive",
                                            "coordinative motive"};
  std::vector<std::string> acts;
  for (DialogueAct a : {DialogueAct::probing, DialogueAct::confronting, DialogueAct::supplement,
                        DialogueAct::interpretation, DialogueAct::instruction, DialogueAct::utility})
    acts.emplace_back(act_prompt_label(a));
  p += fmt::format(
      "Please answer only for the target sentence with the JSON format:{{\"motives\": List(None "
      "or more from {}),\"dialogue act\": String(one option from {}),\"target speaker(s)\": "
      "String(one option from {}),\"reason\": String}}\n\n",
      quoted_list(motives), quoted_list(acts), quoted_list(target_speaker_options(session)));
  p += "For example: answer: {\"motives\": [\"informational motive\"], \"dialogue act\": "
       "\"Probing\", \"target speaker(s)\": \"3 (Joe Smith)\", \"reason\": \"The moderator asks "
       "a question to Joe Smith aimed at eliciting his viewpoint on the topic.\"}\n";
  return p;
}

std::string build_eslmod_prompt(const Session& session, const SentenceRef& target,
                                const TaxonomyRegistry& taxonomy, ContextWindow window) {
  if (taxonomy.empty()) throw ConfigError("incomplete taxonomy: no strategies");
  for (const auto& s : taxonomy.strategies()) {
    if (s.definition.empty() || s.examples.empty())
      throw ConfigError(fmt::format("incomplete taxonomy: strategy '{}' lacks a {}", s.name,
                                    s.definition.empty() ? "definition" : "set of examples"));
  }
  const TargetContext ctx = locate(session, target, window);
  std::string p;
  p += role_and_topic(session) + "\n\n";
  p += "Given the definition and the examples, and the context of prior and posterior "
       "dialogue, please label which dialogue act the target sentence belongs to, and who the "
       "moderator is talking to.\n\n";
  p += "Dialogue act: Dialogue acts refer to the function of a piece of speech. The definitions "
       "and examples of the dialogue acts are below:\n";
  for (const auto& s : taxonomy.strategies()) {
    p += fmt::format("\n{}: {}\nExamples:", s.label_for_prompt(), s.definition);
    for (const auto& ex : s.examples) p += " \"" + ex + "\"";
    p += "\n";
  }
  p += "\n" + context_blocks(ctx, window) + "\n";

  std::string options;
  for (std::size_t i = 0; i < taxonomy.size(); ++i) {
    if (i) options += ", ";
    options += fmt::format("{} ({})", i, taxonomy.strategies()[i].label_for_prompt());
  }
  p += fmt::format(
      "Please answer only for the target sentence with the JSON format:{{\"dialogue act\": "
      "String(one option from {}),\"target speaker(s)\": String(one option from {}),\"reason\": "
      "String}}\n\n",
      options, quoted_list(target_speaker_options(session)));
  p += fmt::format(
      "For example: answer: {{\"dialogue act\": \"0 ({})\", \"target speaker(s)\": \"3 (Joe "
      "Smith)\", \"reason\": \"The moderator asks a question to Joe Smith aimed at eliciting his "
      "viewpoint on the topic.\"}}\n",
      taxonomy.strategies().front().label_for_prompt());
  return p;
}

namespace {

struct RubricFeature {
  const char* name;
  const char* definition;
  std::array<const char*, 5> levels;  // score 5 down to 1
};

constexpr std::array<RubricFeature, 4> kMacroRubric = {{
    {"Topic Management",
     "The strategies and techniques used to control and navigate the flow of topics.",
     {"topic extension with clear new context", "topic extension under the previous direction",
      "topic extension with the same content", "repeat and no topic extension",
      "no topic extension and stop the topic at this point"}},
    {"Tone Appropriateness",
     "The suitability of the tone used in communication, ensuring it aligns with the context, "
     "audience, and purpose to convey the intended message.",
     {"very informal", "quite informal, but some expressions are still formal",
      "relatively not formal, and most expressions are quite informal",
      "quite formal, and some expressions are not that formal", "very formal"}},
    {"Conversation Opening",
     "The initial interaction or exchange that begins a dialogue, often setting the tone and "
     "context for the dialogue.",
     {"nice greeting and showing a good understanding of the opening of conversation in social "
      "interactions.",
      "sounded greeting and showed a basic understanding of the social role.",
      "general greeting but not understanding the social role well.", "basic greeting.",
      "no opening, start the discussion immediately."}},
    {"Conversation Closing",
     "The process of ending a dialogue or interaction, which involves signaling the conclusion "
     "of the discussion, summarizing key points, and often expressing a farewell.",
     {"detailed summarization and smooth transition to the closing of the conversation.",
      "transit to the closing naturally, but without summarising the discussion.",
      "transit to the discussion.", "demonstrate a translation to the end of the conversation.",
      "no closing, directly stop the conversation."}},
}};

constexpr std::array<const char*, 5> kOverallRubric = {
    "Smooth and fluent daily communication, easy and pleasant through the whole chat",
    "Somewhat less fluent communication, but the communication purpose is achieved",
    "Slightly awkward communication in some places, such as not being able to understand the "
    "other person's question",
    "Overall communication is not fluent and mostly awkward, but some parts can be mutually "
    "understood",
    "Unable to accurately achieve the communication purpose, awkward conversation, and failed to "
    "talk throughout the conversation."};

}  // namespace

std::string build_quality_prompt(const Session& session,
                                 const std::optional<std::string>& segment_id,
                                 std::string_view speaker_id, QualityPromptOptions options) {
  const corpus::Speaker* focal = session.find_speaker(speaker_id);
  if (focal == nullptr)
    throw DataError(fmt::format("speaker '{}' is not in session '{}'", speaker_id, session.session_id));

  std::vector<Line> lines;
  bool focal_active = false;
  bool segment_found = !segment_id.has_value();
  for (const auto& seg : session.segments) {
    if (segment_id && seg.segment_id != *segment_id) continue;
    segment_found = true;
    for (const auto& u : seg.utterances) {
      lines.push_back({session.find_speaker(u.speaker_id), join(u.sentences, 0, u.sentences.size())});
      if (u.speaker_id == speaker_id) focal_active = true;
    }
  }
  if (!segment_found)
    throw DataError(fmt::format("session '{}' has no segment '{}'", session.session_id, *segment_id));
  if (!focal_active)
    throw DataError(fmt::format("speaker '{}' has no utterance in {}", speaker_id,
                                segment_id ? "segment '" + *segment_id + "'" : "the session"));

  // Truncation: first two utterances plus the longest suffix within budget.
  std::vector<std::size_t> sizes;
  std::size_t total = 0;
  for (const auto& l : lines) {
    sizes.push_back(corpus::tokenize(l.text).size());
    total += sizes.back();
  }
  std::string transcript;
  if (total <= options.max_transcript_tokens || lines.size() <= 3) {
    for (const auto& l : lines) transcript += render(l) + "\n";
  } else {
    const std::size_t head = 2;
    std::size_t budget = options.max_transcript_tokens;
    budget -= std::min(budget, sizes[0] + sizes[1]);
    std::size_t start = lines.size();
    while (start > head && sizes[start - 1] <= budget) {
      budget -= sizes[start - 1];
      --start;
    }
    for (std::size_t i = 0; i < head; ++i) transcript += render(lines[i]) + "\n";
    if (start > head) transcript += fmt::format("[... {} utterances omitted ...]\n", start - head);
    for (std::size_t i = start; i < lines.size(); ++i) transcript += render(lines[i]) + "\n";
  }

  std::string p;
  p += fmt::format("Conversation: A multi-party group discussion among English second language "
                   "speakers. The topic is \"{}\".\n\n",
                   session.topic);
  p += "Transcript:\n" + transcript + "\n";
  p += fmt::format("Focal speaker: evaluate only the contributions of {} (speaker id \"{}\").\n\n",
                   focal->display_name, focal->id);
  p += "Output Fields:\n"
       "Overall: The score of the interactivity of the English second language dialogue for the "
       "focal speaker (1 to 5).\n"
       "Macro-level scores: Topic Management, Tone Appropriateness, Conversation Opening and "
       "Conversation Closing for the focal speaker (each 1 to 5).\n"
       "Rationale: The reason why and how the scores are made based on the focal speaker's "
       "utterances.\n\n";
  p += "Evaluation Criteria (overall dialogue quality):\n";
  for (int i = 0; i < 5; ++i) p += fmt::format("{}: {}\n", 5 - i, kOverallRubric[i]);
  p += "\nMacro-level features (higher scores indicate more natural, authentic interaction and "
       "active engagement):\n";
  for (const auto& f : kMacroRubric) {
    p += fmt::format("\n{}: {}\n", f.name, f.definition);
    for (int i = 0; i < 5; ++i) p += fmt::format("[{}] {}\n", 5 - i, f.levels[i]);
  }
  p += "\nPlease answer only with the JSON format:{\"overall\": Integer(1 to 5), "
       "\"topic_management\": Integer(1 to 5), \"tone_appropriateness\": Integer(1 to 5), "
       "\"conversation_opening\": Integer(1 to 5), \"conversation_closing\": Integer(1 to 5), "
       "\"rationale\": String}\n";
  return p;
}

}  // namespace modlab::llm
