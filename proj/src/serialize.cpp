#include "uniplan/serialize.hpp"

namespace uniplan {

json to_json(const Cell &c) { return json::array({c.row, c.col}); }

json to_json(const Goal &g) {
    switch (g.kind) {
        case Goal::Kind::reach_gift: return {{"kind", "reach_gift"}};
        case Goal::Kind::apple_on_table: return {{"kind", "apple_on_table"}};
        case Goal::Kind::target_config: {
            json target = json::object();
            for (const auto &[block, slot] : g.target) {
                target[to_string(block)] = to_string(slot);
            }
            return {{"kind", "target_config"}, {"target", target}};
        }
    }
    return {};
}

json to_json(const Observation &obs) {
    return std::visit(
        [](const auto &o) -> json {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, MazeObs>) {
                const char *status = o.status == MazeStatus::alive
                                         ? "alive"
                                         : (o.status == MazeStatus::trapped ? "trapped" : "at_goal");
                json j{{"pos", to_json(o.pos)}, {"status", status}};
                if (o.gift_count != 1) {
                    j["gift_count"] = o.gift_count;
                }
                return j;
            } else if constexpr (std::is_same_v<T, FetchObs>) {
                json j{{"agent", to_json(o.agent)},
                       {"facing", to_string(o.facing)},
                       {"carrying", o.carrying},
                       {"apple_on_table", o.apple_on_table}};
                j["apple_cell"] = o.apple_cell ? to_json(*o.apple_cell) : json(nullptr);
                if (o.apple_count != 1) {
                    j["apple_count"] = o.apple_count;
                }
                return j;
            } else {
                json placement = json::object();
                for (const auto &[block, place] : o.placement) {
                    placement[to_string(block)] = {{"slot", to_string(place.slot)},
                                                   {"sub_offset", to_string(place.offset)}};
                }
                json j{{"placement", placement}};
                if (o.ghost) {
                    j["ghost"] = {{"block", to_string(o.ghost->first)},
                                  {"slot", to_string(o.ghost->second.slot)},
                                  {"sub_offset", to_string(o.ghost->second.offset)}};
                }
                return j;
            }
        },
        obs);
}

json to_json(const Instance &inst) {
    return std::visit(
        [](const auto &i) -> json {
            using T = std::decay_t<decltype(i)>;
            if constexpr (std::is_same_v<T, MazeInstance>) {
                json traps = json::array();
                for (const Cell &c : i.traps) {
                    traps.push_back(to_json(c));
                }
                return {{"env", "frozenlake"}, {"rows", i.rows},   {"cols", i.cols},
                        {"traps", traps},     {"start", to_json(i.start)}, {"gift", to_json(i.gift)}};
            } else if constexpr (std::is_same_v<T, FetchInstance>) {
                json table = json::array();
                for (const Cell &c : i.table_cells) {
                    table.push_back(to_json(c));
                }
                return {{"env", "minibehavior"},
                        {"rows", i.rows},
                        {"cols", i.cols},
                        {"table_cells", table},
                        {"apple_start", to_json(i.apple_start)},
                        {"agent_start", to_json(i.agent_start)},
                        {"agent_facing", to_string(i.agent_facing)}};
            } else {
                json goal = json::object();
                for (const auto &[block, slot] : i.goal) {
                    goal[to_string(block)] = to_string(slot);
                }
                return {{"env", "languagetable"},
                        {"initial", to_json(Observation{i.initial})},
                        {"goal", goal}};
            }
        },
        inst);
}

json to_json(const ValueEstimate &v) {
    json j{{"steps_remaining", v.steps_remaining}};
    if (!v.components.empty()) {
        j["components"] = v.components;
    }
    return j;
}

json to_json(const PlannerConfig &cfg) {
    return {{"beams", cfg.beams},
            {"action_branch", cfg.action_branch},
            {"dynamics_branch", cfg.dynamics_branch},
            {"horizon", cfg.horizon},
            {"dedupe", cfg.dedupe},
            {"filtering_enabled", cfg.filtering_enabled}};
}

json to_json(const NoiseProfile &noise) {
    return {{"p_wrong_effect", noise.p_wrong_effect},
            {"p_delete", noise.p_delete},
            {"p_duplicate", noise.p_duplicate},
            {"q_inverse", noise.q_inverse},
            {"value_noise", {{"p", noise.value_noise.p}, {"k", noise.value_noise.k}}},
            {"counter_error", noise.counter_error}};
}

json to_json(const PolicyParams &params) {
    return {{"epsilon", params.epsilon}, {"temperature", params.temperature}};
}

json to_json(const TransitionCandidate &cand) {
    return {{"obs", canonical_key(cand.obs)},
            {"action", render_action(cand.action)},
            {"predicted", canonical_key(cand.predicted)},
            {"verdict", cand.accepted ? "accepted" : "rejected"},
            {"reject_reason", to_string(cand.reject_reason)},
            {"inferred_action", render_action(cand.inferred_action)},
            {"category", to_string(cand.category)},
            {"ground_truth_valid", cand.ground_truth_valid}};
}

json to_json(const PlanResult &result) {
    json actions = json::array();
    for (const Action &a : result.actions) {
        actions.push_back(render_action(a));
    }
    json predicted = json::array();
    for (const Observation &o : result.predicted_obs) {
        predicted.push_back(to_json(o));
    }
    return {{"actions", actions},
            {"predicted_obs", predicted},
            {"score", result.score},
            {"status", to_string(result.status)},
            {"stats",
             {{"proposed", result.stats.proposed},
              {"accepted", result.stats.accepted},
              {"rejected_by_reason", result.stats.rejected_by_reason},
              {"beams_expanded", result.stats.beams_expanded}}}};
}

PlannerConfig planner_config_from_json(const json &j) {
    PlannerConfig cfg;
    cfg.beams = j.value("beams", cfg.beams);
    cfg.action_branch = j.value("action_branch", cfg.action_branch);
    cfg.dynamics_branch = j.value("dynamics_branch", cfg.dynamics_branch);
    cfg.horizon = j.value("horizon", cfg.horizon);
    cfg.dedupe = j.value("dedupe", cfg.dedupe);
    cfg.filtering_enabled = j.value("filtering_enabled", cfg.filtering_enabled);
    return cfg;
}

NoiseProfile noise_profile_from_json(const json &j) {
    NoiseProfile noise;
    noise.p_wrong_effect = j.value("p_wrong_effect", noise.p_wrong_effect);
    noise.p_delete = j.value("p_delete", noise.p_delete);
    noise.p_duplicate = j.value("p_duplicate", noise.p_duplicate);
    noise.q_inverse = j.value("q_inverse", noise.q_inverse);
    noise.counter_error = j.value("counter_error", noise.counter_error);
    if (j.contains("value_noise")) {
        noise.value_noise.p = j["value_noise"].value("p", 0.0);
        noise.value_noise.k = j["value_noise"].value("k", 0);
    }
    validate(noise);
    return noise;
}

PolicyParams policy_params_from_json(const json &j) {
    PolicyParams params;
    params.epsilon = j.value("epsilon", params.epsilon);
    params.temperature = j.value("temperature", params.temperature);
    if (params.epsilon < 0 || params.epsilon > 1 || params.temperature <= 0) {
        throw InvalidConfig("policy params out of range");
    }
    return params;
}

}  // namespace uniplan
