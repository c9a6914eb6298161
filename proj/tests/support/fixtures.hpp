#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "modlab/annotation.hpp"
#include "modlab/corpus.hpp"
#include "modlab/discovery/subtopics.hpp"
#include "modlab/quality.hpp"

namespace modlab::testing {

/// Reference motive x act counts; rows informational, coordinative, social.
inline constexpr std::array<std::array<std::size_t, 6>, 3> kReferenceCells = {{
    {838, 17, 11, 290, 1223, 22},
    {37, 2, 119, 6, 35, 19},
    {68, 3, 10, 80, 401, 315},
}};
inline constexpr std::array<std::size_t, 6> kReferenceActTotals = {856, 19, 124, 342, 1527, 416};
inline constexpr std::size_t kReferenceTotal = 3284;

struct FrequencyCount {
  const char* strategy_id;
  std::size_t count;
  double percent;  // as printed
};

inline constexpr std::array<FrequencyCount, 10> kReferenceFrequencies = {{
    {"information_probing", 849, 25.8},
    {"informational_interpretation", 548, 16.7},
    {"information_sharing", 430, 13.1},
    {"backchanneling", 318, 9.7},
    {"opinion_sharing", 316, 9.6},
    {"experience_sharing", 247, 7.5},
    {"acknowledgement", 193, 5.9},
    {"echoing", 179, 5.5},
    {"coordinative_instruction", 146, 4.4},
    {"social_utility", 58, 1.8},
}};

/// WHoW annotations whose per-act totals and per-cell counts equal the
/// given tables. Each act gets act_totals[a] sentences; cell counts are
/// dealt to the sentences with the fewest motives so far, so a column
/// whose cells exceed its total yields multi-motive sentences and one
/// that falls short leaves motive-free sentences.
std::vector<annotation::WhowAnnotation> matrix_fixture(
    const std::array<std::array<std::size_t, 6>, 3>& cells = kReferenceCells,
    const std::array<std::size_t, 6>& act_totals = kReferenceActTotals);

std::vector<annotation::EslmodAnnotation> frequency_fixture();

/// Annotations in one cell whose reasons fall into groups of the given
/// sizes, each group with its own vocabulary.
std::vector<annotation::WhowAnnotation> reason_fixture(Cell cell, const std::vector<std::size_t>& sizes);

/// Runs for the four clustered cells with the reference k and sizes.
std::vector<discovery::ClusterRun> reference_runs();

/// Small hand-built session: moderator "m" plus participants p1..pn.
corpus::Session make_session(const std::string& id, bool moderated, std::size_t participants,
                             std::size_t segments, std::size_t moderator_sentences_per_segment = 2);

/// Adjusted Rand index, computed from the contingency table.
double adjusted_rand_index(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b);

std::filesystem::path source_dir();
std::filesystem::path cli_path();

/// Fresh empty directory under the system temp dir.
std::filesystem::path temp_dir(const std::string& name);

struct ReplayFixture {
  corpus::Corpus corpus;
  std::vector<quality::SpeakerQualityScores> quality;
  std::vector<annotation::EslmodAnnotation> eslmod;
};

ReplayFixture load_replay_fixture();

/// Response cache in which every quality and ESLMOD prompt of the fixture
/// maps to the answer encoded by its sidecar rows.
void build_replay_cache(const ReplayFixture& fixture, const std::filesystem::path& dir,
                        const std::string& model_id = "gpt-4o");

}  // namespace modlab::testing
