#pragma once

// WHoW label space: three motives ("why"), six dialogue acts ("how"), and
// the 3x6 grid of (motive, act) cells that the strategy taxonomy refines.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace modlab {

enum class Motive { informational = 0, coordinative = 1, social = 2 };
enum class DialogueAct {
  probing = 0,
  confronting = 1,
  instruction = 2,
  interpretation = 3,
  supplement = 4,
  utility = 5,
};

inline constexpr std::array<Motive, 3> kMotives = {Motive::informational, Motive::coordinative,
                                                   Motive::social};
inline constexpr std::array<DialogueAct, 6> kDialogueActs = {
    DialogueAct::probing,        DialogueAct::confronting, DialogueAct::instruction,
    DialogueAct::interpretation, DialogueAct::supplement,  DialogueAct::utility};

std::string_view to_string(Motive m);       // "informational"
std::string_view to_string(DialogueAct a);  // "probing"
std::optional<Motive> motive_from_string(std::string_view s);
std::optional<DialogueAct> act_from_string(std::string_view s);

/// Adjective used when naming a cell ("Informational", "Coordinative", "Social").
std::string_view motive_title(Motive m);
/// Act name as shown in prompts ("Probing", ..., "All Utility").
std::string_view act_prompt_label(DialogueAct a);
/// Capitalised act name ("Probing", ..., "Utility").
std::string_view act_title(DialogueAct a);

std::string_view motive_definition(Motive m);
std::string_view act_definition(DialogueAct a);

/// Exemplar sentences for one (motive, act) cell of the WHoW framework, each
/// with its parenthesised gloss.
const std::vector<std::string>& cell_examples(Motive m, DialogueAct a);

struct Cell {
  Motive motive = Motive::informational;
  DialogueAct act = DialogueAct::probing;
  auto operator<=>(const Cell&) const = default;
};

/// "informational/probing"
std::string to_string(Cell c);
Cell cell_from_string(std::string_view s);  // throws ConfigError
/// "Informational Probing"
std::string cell_title(Cell c);

}  // namespace modlab
