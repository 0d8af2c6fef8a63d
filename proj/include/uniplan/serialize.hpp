#pragma once

#include <json.hpp>

#include "uniplan/planner.hpp"

namespace uniplan {

using nlohmann::json;

json to_json(const Cell &c);
json to_json(const Goal &g);
json to_json(const Observation &obs);
json to_json(const Instance &inst);
json to_json(const ValueEstimate &v);
json to_json(const PlannerConfig &cfg);
json to_json(const NoiseProfile &noise);
json to_json(const PolicyParams &params);
json to_json(const TransitionCandidate &cand);
json to_json(const PlanResult &result);

PlannerConfig planner_config_from_json(const json &j);
NoiseProfile noise_profile_from_json(const json &j);
PolicyParams policy_params_from_json(const json &j);

}  // namespace uniplan
