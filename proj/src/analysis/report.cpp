#include "modlab/analysis/report.hpp"

#include <fmt/format.h>

#include <cmath>

#include "modlab/error.hpp"
#include "modlab/io.hpp"

namespace modlab::analysis {

namespace {

using quality::Metric;

std::string num(double v) { return fmt::format("{:.2f}", v); }
std::string num(const std::optional<double>& v) { return v ? num(*v) : std::string("n/a"); }

std::string arrow(double delta) { return delta > 0 ? "↑" : delta < 0 ? "↓" : "="; }

void heading(std::string& md, std::size_t index) { md += fmt::format("\n## {}\n\n", kReportSections[index]); }

void stats_section(std::string& md, const corpus::CorpusStats& stats) {
  heading(md, 0);
  md += "| | ";
  for (const auto& g : stats.groups)
    md += fmt::format("{} ({}) | ", g.source == corpus::Source::club ? "Online club" : "Student volunteer",
                      g.moderated ? "moderated" : "non-moderated");
  md += "Total |\n|---|";
  for (std::size_t i = 0; i <= stats.groups.size(); ++i) md += "---|";
  md += "\n";
  auto row = [&](std::string_view label, auto avg, std::string total) {
    md += fmt::format("| {} | ", label);
    for (const auto& g : stats.groups) md += avg(g) + " | ";
    md += total + " |\n";
  };
  const auto& t = stats.totals;
  row("Sessions", [](const corpus::GroupStats& g) { return std::to_string(g.sessions); }, std::to_string(t.sessions));
  row("Speakers avg", [](const corpus::GroupStats& g) { return num(g.avg_speakers()); },
      std::to_string(t.unique_speakers) + "*");
  row("Segments avg", [](const corpus::GroupStats& g) { return num(g.avg_segments()); }, std::to_string(t.segments));
  row("Sentences avg", [](const corpus::GroupStats& g) { return num(g.avg_sentences()); },
      std::to_string(t.sentences));
  row("Moderator sentences avg", [](const corpus::GroupStats& g) { return num(g.avg_moderator_sentences()); },
      std::to_string(t.moderator_sentences));
  row("Tokens avg", [](const corpus::GroupStats& g) { return num(g.avg_tokens()); }, std::to_string(t.tokens));
  md += "\n\\* unique speakers across all sessions.\n";
}

void matrix_section(std::string& md, const annotation::JointMatrix& m,
                    const std::optional<annotation::ProminencePartition>& prominence) {
  heading(md, 1);
  md += "| Motive | ";
  for (DialogueAct a : kDialogueActs) md += fmt::format("{} | ", act_title(a));
  md += "Total |\n|---|---|---|---|---|---|---|---|\n";
  for (Motive mo : kMotives) {
    md += fmt::format("| {} | ", motive_title(mo));
    for (DialogueAct a : kDialogueActs) {
      std::string cell = fmt::format("{} ({})", num(m.probability(mo, a)), m.count(mo, a));
      if (prominence && prominence->expand.count({mo, a})) cell = "**" + cell + "**";
      else if (prominence && prominence->keep.count({mo, a})) cell = "_" + cell + "_";
      md += cell + " | ";
    }
    md += fmt::format("{} ({}) |\n", num(m.motive_probability(mo)), m.motive_total(mo));
  }
  md += "| Total | ";
  for (DialogueAct a : kDialogueActs)
    md += fmt::format("{} ({}) | ", num(m.act_probability(a)), m.act_totals[static_cast<std::size_t>(a)]);
  md += fmt::format("1.00 ({}) |\n", m.total);
  md += fmt::format("\nMotive counting: {}.", annotation::to_string(m.mode));
  if (prominence)
    md += fmt::format(" Bold cells are expanded (p >= {}), italic cells are kept (p >= {}).", prominence->high,
                      prominence->low);
  md += "\n";
}

void comparison_table(std::string& md, const ComparisonResult& r) {
  md += "| Moderated | ";
  for (const auto& row : r.rows) md += fmt::format("{} | ", quality::metric_title(row.metric));
  md += "\n|---|";
  for (std::size_t i = 0; i < r.rows.size(); ++i) md += "---|";
  md += "\n| yes | ";
  for (const auto& row : r.rows)
    md += row.significant ? fmt::format("**{}*** | ", num(row.mean_moderated)) : num(row.mean_moderated) + " | ";
  md += "\n| no | ";
  for (const auto& row : r.rows) md += num(row.mean_non_moderated) + " | ";
  md += "\n| p (one-tailed) | ";
  for (const auto& row : r.rows) md += num(row.p_one_tailed) + " | ";
  md += "\n";
  if (!r.rows.empty())
    md += fmt::format("\nUnits: {} moderated, {} non-moderated. * p < 0.05.\n", r.rows.front().n_moderated,
                      r.rows.front().n_non_moderated);
}

void frequencies_section(std::string& md, const FrequencyTable& f) {
  heading(md, 3);
  md += "| Strategy | Frequency | % |\n|---|---|---|\n";
  for (const auto& r : f.rows) md += fmt::format("| {} | {} | {:.1f}% |\n", r.name, r.count, r.percent);
  md += fmt::format("| Total | {} | 100.0% |\n", f.total);
}

void topic_section(std::string& md, const ComparisonResult& r) {
  heading(md, 4);
  md += "| Topic | ";
  for (Metric m : quality::kMetrics) md += fmt::format("{} | ", quality::metric_title(m));
  md += "\n|---|---|---|---|---|---|\n";
  std::string current;
  for (const auto& d : r.topic_deltas) {
    if (d.topic != current) {
      if (!current.empty()) md += "\n";
      current = d.topic;
      md += fmt::format("| {} | ", d.topic);
    }
    md += fmt::format("{} {} | ", num(d.delta), arrow(d.delta));
  }
  if (!current.empty()) md += "\n";
  md += "\nMean moderated minus mean non-moderated per topic.\n";
}

void effects_section(std::string& md, const std::vector<StrategyEffect>& effects) {
  heading(md, 6);
  md += "| Strategy | Mean | Difference | p-value | Segments with | Segments without |\n"
        "|---|---|---|---|---|---|\n";
  for (const auto& e : effects) {
    std::string diff = e.delta ? num(e.delta) + " " + arrow(*e.delta) : "n/a";
    if (e.p_value && *e.p_value < 0.05) diff = "**" + diff + "***";
    md += fmt::format("| {} | {} | {} | {} | {} | {} |\n", e.name, num(e.mean_with), diff, num(e.p_value), e.n_with,
                      e.n_without);
  }
  md += "\nTwo-tailed two-sample t-test; * p < 0.05.\n";
}

}  // namespace

ReportBundle render_report(const ReportInputs& in) {
  if (!in.stats && !in.matrix && !in.comparison && !in.frequencies && !in.topic_comparison &&
      !in.speaker_comparison && !in.effects && !in.agreement_alpha)
    throw DataError("report: no results available");
  ReportBundle b;
  std::string& md = b.markdown;
  md = "# Moderation analysis report\n";
  if (in.stats) {
    stats_section(md, *in.stats);
    b.tables["stats.csv"] = corpus::stats_csv(*in.stats);
  }
  if (in.matrix) {
    matrix_section(md, *in.matrix, in.prominence);
    b.tables["joint_matrix.csv"] = annotation::joint_matrix_csv(*in.matrix);
  }
  if (in.comparison) {
    heading(md, 2);
    comparison_table(md, *in.comparison);
  }
  if (in.frequencies) {
    frequencies_section(md, *in.frequencies);
    b.tables["frequencies.csv"] = frequencies_csv(*in.frequencies);
  }
  if (in.topic_comparison) {
    topic_section(md, *in.topic_comparison);
    b.tables["topic_deltas.csv"] = topic_deltas_csv(*in.topic_comparison);
  }
  if (in.speaker_comparison) {
    heading(md, 5);
    comparison_table(md, *in.speaker_comparison);
  }
  std::vector<ComparisonResult> comparisons;
  for (const auto* c : {&in.comparison, &in.topic_comparison, &in.speaker_comparison})
    if (*c) comparisons.push_back(**c);
  if (!comparisons.empty()) b.tables["comparisons.csv"] = comparisons_csv(comparisons);
  if (in.effects) {
    effects_section(md, *in.effects);
    b.tables["strategy_effects.csv"] = strategy_effects_csv(*in.effects);
  }
  if (in.agreement_alpha)
    md += fmt::format("\n## Annotation agreement\n\nKrippendorff's alpha (nominal): {}\n", num(*in.agreement_alpha));
  return b;
}

void write_report(const ReportBundle& bundle, const std::filesystem::path& dir) {
  io::write_text_atomic(dir / "report.md", bundle.markdown);
  for (const auto& [name, csv] : bundle.tables) io::write_text_atomic(dir / "tables" / name, csv);
}

}  // namespace modlab::analysis
