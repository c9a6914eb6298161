#pragma once

#include <vector>

#include "json.hpp"
#include "modlab/analysis/effects.hpp"
#include "modlab/annotation.hpp"

namespace modlab::analysis {

nlohmann::json to_json(const FrequencyTable& t);
FrequencyTable frequency_table_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ComparisonResult& r);
ComparisonResult comparison_from_json(const nlohmann::json& j);

nlohmann::json to_json(const StrategyEffect& e);
StrategyEffect strategy_effect_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SegmentQuality& q);
SegmentQuality segment_quality_from_json(const nlohmann::json& j);

nlohmann::json to_json(const annotation::JointMatrix& m);
annotation::JointMatrix joint_matrix_from_json(const nlohmann::json& j);

}  // namespace modlab::analysis
