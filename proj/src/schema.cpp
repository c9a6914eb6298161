#include "modlab/schema.hpp"

#include "modlab/error.hpp"

namespace modlab {

std::string_view to_string(Motive m) {
  switch (m) {
    case Motive::informational: return "informational";
    case Motive::coordinative: return "coordinative";
    case Motive::social: return "social";
  }
  return "?";
}

std::string_view to_string(DialogueAct a) {
  switch (a) {
    case DialogueAct::probing: return "probing";
    case DialogueAct::confronting: return "confronting";
    case DialogueAct::instruction: return "instruction";
    case DialogueAct::interpretation: return "interpretation";
    case DialogueAct::supplement: return "supplement";
    case DialogueAct::utility: return "utility";
  }
  return "?";
}

std::optional<Motive> motive_from_string(std::string_view s) {
  for (Motive m : kMotives)
    if (to_string(m) == s) return m;
  return std::nullopt;
}

std::optional<DialogueAct> act_from_string(std::string_view s) {
  for (DialogueAct a : kDialogueActs)
    if (to_string(a) == s) return a;
  return std::nullopt;
}

std::string_view motive_title(Motive m) {
  switch (m) {
    case Motive::informational: return "Informational";
    case Motive::coordinative: return "Coordinative";
    case Motive::social: return "Social";
  }
  return "?";
}

std::string_view act_title(DialogueAct a) {
  switch (a) {
    case DialogueAct::probing: return "Probing";
    case DialogueAct::confronting: return "Confronting";
    case DialogueAct::instruction: return "Instruction";
    case DialogueAct::interpretation: return "Interpretation";
    case DialogueAct::supplement: return "Supplement";
    case DialogueAct::utility: return "Utility";
  }
  return "?";
}

std::string_view act_prompt_label(DialogueAct a) {
  return a == DialogueAct::utility ? "All Utility" : act_title(a);
}

std::string_view motive_definition(Motive m) {
  switch (m) {
    case Motive::informational:
      return "Provide or acquire relevant information to constructively advance the topic or "
             "goal of the conversation.";
    case Motive::coordinative:
      return "Ensure adherence to rules, plans, and broader contextual constraints, such as "
             "time and environment.";
    case Motive::social:
      return "Enhance the social atmosphere and connections among participants by addressing "
             "feelings, emotions, and interpersonal dynamics within the group.";
  }
  return "";
}

std::string_view act_definition(DialogueAct a) {
  switch (a) {
    case DialogueAct::probing: return "Prompt speaker for responses.";
    case DialogueAct::confronting:
      return "Prompt one speaker to response or engage with another speaker's statement, "
             "question or opinion.";
    case DialogueAct::instruction:
      return "Explicitly command, influence, halt, or shape the immediate behavior of the "
             "recipients.";
    case DialogueAct::interpretation:
      return "Clarify, reframe, summarize, paraphrase, or make connection to earlier "
             "conversation content.";
    case DialogueAct::supplement:
      return "Enrich the conversation by supplementing details or information without "
             "immediately changing the target speaker's behavior.";
    case DialogueAct::utility: return "All other unspecified acts.";
  }
  return "";
}

const std::vector<std::string>& cell_examples(Motive m, DialogueAct a) {
  using V = std::vector<std::string>;
  // [act][motive]
  static const std::array<std::array<V, 3>, 6> kExamples = {{
      {{
          V{"\"Can you take that on?\" (prompting)",
            "\"As long as the political spectrum is covered overall, what's wrong with that?\" "
            "(follow up question)",
            "\"Siva?\" (name calling prompt)"},
          V{"\"Which of you would like to go first?\" (preference inquiry)",
            "\"Did this gentleman come down yet?\" (coordinative question)",
            "\"It's working, right?\" (question managing environment)"},
          V{"\"Is that a relief to you or--\" (asking feeling)",
            "\"Could you tell us your name, please?\" (social question)",
            "\"Do you have eyeglasses?\" (humour question)"},
      }},
      {{
          V{"\"That landed pretty well I think, so can you respond to that?\" (counter "
            "confronting)",
            "\"On this side, do you want to respond, or do you agree?\" (consensus confronting)",
            "\"You actually asked a perfect question, and so Mark Zandi, do you want to take "
            "that on?\" (confronting question)"},
          V{"\"The other side care to respond, if not I'll move on.\" (coordinative consensus)",
            "\"Response from the other side, or do you want to pass?\" (coordinative "
            "confronting)",
            "\"Marc Thiessen, do you want to join your partner on this one, because I think--\" "
            "(coordinative consensus)"},
          V{"\"Bryan Caplan, I think he just described your fantasy, come true.\" (social "
            "confronting)",
            "\"I'd love to hear your answer to that question, so go for it.\" (confronting with "
            "affective appeal)",
            "\"Jared Bernstein, the guy you called \"nuts\" just said you're unfair.\" (humour "
            "confronting)"},
      }},
      {{
          V{"\"Can you frame your question as a question?\" (articulate instruction)",
            "\"Relate that point to this motion.\" (back to topic)",
            "\"I want to stay on the merits of the Obama plan.\" (manage topic)"},
          V{"\"Remember, about 30 seconds is what you'll get.\" (time control)",
            "\"Can you go up three steps, please, and turn right?\" (coordinating instruction)",
            "\"I'll be right back after this message.\" (program management)"},
          V{"\"Do not be afraid.\" (emotion instruction)",
            "\"Those who agree, just a round of applause to that.\" (pro-social instruction)",
            "\"--because it's turning into a personal attack.\" (stop anti-social)"},
      }},
      {{
          V{"\"So, Matt, you're saying that it's not true that it's inevitable that Amazon will "
            "control everything.\" (summarization)",
            "\"Their point is that it would be a bad thing.\" (simplification)",
            "\"But that would be the question of mobility.\" (reframe)"},
          V{"\"That was an ambiguous signal.\" (situation interpretation)",
            "\"You're pointing to Lawrence Korb.\" (preference interpretation)",
            "\"And you want the side arguing for the motion to address that\" (preference "
            "interpretation)"},
          V{"\"I think it was a rhetorical question, and it got a good laugh.\" (humour "
            "interpretation)",
            "\"And it's a little bit insulting almost to say\" (toxicity interpretation)",
            "\"Honestly, I don't think that was a personal attack.\" (toxicity interpretation)"},
      }},
      {{
          V{"\"I agree that it is.\" (agreement)",
            "\"The fact is that one of the US manufacturers, with 1 percent of its yearly "
            "production, would run us out of the whole market.\" (add information)",
            "\"They had never paid any attention whatsoever to Africa.\" (share opinion)"},
          V{"\"Fifty-one of you voted against the motion.\" (vote reporting)",
            "\"And the mic's coming down to you.\" (describe situation)",
            "\"Round two is where the debaters address each other directly\" (rule "
            "explanation)"},
          V{"\"You have a colorful sleeve.\" (social chit-chat)",
            "\"I hate to reward it but I'm going to.\" (encouragement)",
            "\"And I think all of us probably share a sense that we want things to improve.\" "
            "(state common feeling)"},
      }},
      {{
          V{"\"Fair question.\" (acknowledgement)", "\"Right\" (acknowledgement)",
            "\"So the--\" (floor grabbing)"},
          V{"\"All right.\" (backchanneling)", "\"Actually, I--\" (floor grabbing)",
            "\"Well--\" (floor grabbing)"},
          V{"\"Thank you Evgeny Morozov.\" (thanks)", "\"I'm sorry.\" (apology)",
            "\"Hi.\" (greeting)"},
      }},
  }};
  return kExamples[static_cast<int>(a)][static_cast<int>(m)];
}

std::string to_string(Cell c) {
  return std::string(to_string(c.motive)) + "/" + std::string(to_string(c.act));
}

Cell cell_from_string(std::string_view s) {
  const auto slash = s.find('/');
  if (slash == std::string_view::npos) throw ConfigError("malformed cell '" + std::string(s) + "'");
  auto m = motive_from_string(s.substr(0, slash));
  auto a = act_from_string(s.substr(slash + 1));
  if (!m || !a) throw ConfigError("unknown cell '" + std::string(s) + "'");
  return {*m, *a};
}

std::string cell_title(Cell c) {
  return std::string(motive_title(c.motive)) + " " + std::string(act_title(c.act));
}

}  // namespace modlab
