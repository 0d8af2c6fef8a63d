#include "uniplan/planner.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_set>

namespace uniplan {

namespace {

std::size_t best_index(const std::vector<BeamEntry> &beams) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < beams.size(); ++i) {
        if (beams[i].score > beams[best].score) {
            best = i;
        }
    }
    return best;
}

PlanResult finish(const BeamEntry &beam, PlanStatus status, PlanStats stats,
                  std::vector<TransitionCandidate> log) {
    PlanResult result;
    result.actions = beam.actions;
    result.predicted_obs = beam.predicted_obs;
    result.score = beam.score;
    result.status = status;
    result.stats = std::move(stats);
    result.candidate_log = std::move(log);
    return result;
}

std::string dedupe_key(const BeamEntry &beam) {
    std::ostringstream key;
    key << canonical_key(beam.obs) << '|';
    for (const Action &a : beam.actions) {
        key << render_action(a) << ';';
    }
    return key.str();
}

// Slot-level key for the brute-force search; sub-offsets never affect goals.
std::string search_key(const Observation &obs) {
    if (const auto *table = std::get_if<TableObs>(&obs)) {
        std::ostringstream key;
        for (const auto &[block, place] : table->placement) {
            key << to_string(block) << '@' << to_string(place.slot) << ';';
        }
        return key.str();
    }
    return canonical_key(obs);
}

}  // namespace

std::string to_string(PlanStatus s) {
    switch (s) {
        case PlanStatus::complete: return "complete";
        case PlanStatus::horizon_exhausted: return "horizon_exhausted";
        case PlanStatus::no_valid_transitions: return "no_valid_transitions";
    }
    return "?";
}

RoleStreams derive_role_streams(std::uint64_t master_seed, std::int64_t episode_index) {
    return {
        derive_stream({master_seed, episode_index, StreamRole::policy}),
        derive_stream({master_seed, episode_index, StreamRole::forward}),
        derive_stream({master_seed, episode_index, StreamRole::inverse}),
        derive_stream({master_seed, episode_index, StreamRole::value}),
    };
}

std::vector<BeamEntry> select_top_b(std::vector<BeamEntry> candidates, int beams) {
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const BeamEntry &a, const BeamEntry &b) { return a.score > b.score; });
    if (static_cast<int>(candidates.size()) > beams) {
        candidates.resize(static_cast<std::size_t>(beams));
    }
    return candidates;
}

PlanResult plan(const Instance &inst, const Observation &o0, const Goal &goal,
                const NoiseProfile &noise, const PolicyParams &policy, const PlannerConfig &cfg,
                RoleStreams &streams, const StepObserver &observer) {
    validate(cfg, env_kind_of(inst));
    PlanStats stats;
    std::vector<TransitionCandidate> log;

    double initial_value = estimate_value(inst, o0, goal, noise, streams.value).steps_remaining;
    BeamEntry initial{o0, {}, {}, -initial_value, initial_value == 0};
    std::vector<BeamEntry> beams(static_cast<std::size_t>(cfg.beams), initial);

    for (int step = 0; step < cfg.horizon; ++step) {
        std::vector<BeamEntry> candidates;
        // Terminal beams pass through unchanged; expansions follow, so an
        // early goal-reaching beam keeps winning score ties.
        for (const BeamEntry &beam : beams) {
            if (beam.terminal || env_terminal(inst, beam.obs)) {
                candidates.push_back(beam);
            }
        }
        for (const BeamEntry &beam : beams) {
            if (beam.terminal || env_terminal(inst, beam.obs)) {
                continue;
            }
            ++stats.beams_expanded;
            auto legal = legal_actions(inst, beam.obs);
            int branch = std::min<int>(cfg.action_branch, static_cast<int>(legal.size()));
            auto proposals = propose_actions(inst, beam.obs, goal, branch, policy, streams.policy);
            for (const Action &a : proposals) {
                auto drawn = discriminate(inst, beam.obs, a, cfg.dynamics_branch, noise,
                                          cfg.filtering_enabled, streams.forward, streams.inverse);
                for (TransitionCandidate &cand : drawn) {
                    ++stats.proposed;
                    if (!cand.accepted) {
                        ++stats.rejected_by_reason[to_string(cand.reject_reason)];
                        log.push_back(std::move(cand));
                        continue;
                    }
                    ++stats.accepted;
                    double value =
                        estimate_value(inst, cand.predicted, goal, noise, streams.value)
                            .steps_remaining;
                    BeamEntry next;
                    next.obs = cand.predicted;
                    next.actions = beam.actions;
                    next.actions.push_back(a);
                    next.predicted_obs = beam.predicted_obs;
                    next.predicted_obs.push_back(cand.predicted);
                    next.score = -value;
                    next.terminal = value == 0;
                    candidates.push_back(std::move(next));
                    log.push_back(std::move(cand));
                }
            }
        }
        if (candidates.empty()) {
            const BeamEntry &best = beams[best_index(beams)];
            return finish(best, PlanStatus::no_valid_transitions, std::move(stats), std::move(log));
        }
        if (cfg.dedupe) {
            std::unordered_set<std::string> seen;
            std::vector<BeamEntry> unique;
            for (BeamEntry &beam : candidates) {
                if (seen.insert(dedupe_key(beam)).second) {
                    unique.push_back(std::move(beam));
                }
            }
            candidates = std::move(unique);
        }
        auto retained = select_top_b(candidates, cfg.beams);
        if (observer) {
            observer(step, candidates, retained);
        }
        beams = std::move(retained);
    }

    const BeamEntry &best = beams[best_index(beams)];
    PlanStatus status = best.terminal ? PlanStatus::complete : PlanStatus::horizon_exhausted;
    return finish(best, status, std::move(stats), std::move(log));
}

PlanResult brute_force_plan(const Instance &inst, const Observation &o0, const Goal &goal,
                            int max_depth, long node_cap) {
    struct Node {
        Observation obs;
        int parent = -1;
        Action action = NoChange{};
        int depth = 0;
    };

    auto build_result = [&](const std::vector<Node> &nodes, int goal_node) {
        PlanResult result;
        if (goal_node < 0) {
            result.status = PlanStatus::no_valid_transitions;
            result.score = -value_oracle(inst, o0, goal).steps_remaining;
            return result;
        }
        std::vector<int> chain;
        for (int n = goal_node; n > 0; n = nodes[static_cast<std::size_t>(n)].parent) {
            chain.push_back(n);
        }
        std::reverse(chain.begin(), chain.end());
        for (int n : chain) {
            result.actions.push_back(nodes[static_cast<std::size_t>(n)].action);
            result.predicted_obs.push_back(nodes[static_cast<std::size_t>(n)].obs);
        }
        result.status = PlanStatus::complete;
        result.score = 0;
        return result;
    };

    std::vector<Node> nodes{{o0, -1, NoChange{}, 0}};
    if (goal_reached(inst, o0, goal)) {
        return build_result(nodes, 0);
    }
    std::unordered_set<std::string> visited{search_key(o0)};
    std::deque<int> frontier{0};
    long generated = 1;

    while (!frontier.empty()) {
        int cur = frontier.front();
        frontier.pop_front();
        const int depth = nodes[static_cast<std::size_t>(cur)].depth;
        if (depth >= max_depth || env_terminal(inst, nodes[static_cast<std::size_t>(cur)].obs)) {
            continue;
        }
        const Observation obs = nodes[static_cast<std::size_t>(cur)].obs;
        for (const Action &a : legal_actions(inst, obs)) {
            Rng scratch(0);  // offsets are irrelevant at slot granularity
            Observation next = env_step(inst, obs, a, scratch);
            if (++generated > node_cap) {
                throw TreeTooLarge("brute-force search exceeded the node cap");
            }
            if (!visited.insert(search_key(next)).second) {
                continue;
            }
            nodes.push_back({next, cur, a, depth + 1});
            int id = static_cast<int>(nodes.size()) - 1;
            if (goal_reached(inst, next, goal)) {
                return build_result(nodes, id);
            }
            frontier.push_back(id);
        }
    }
    return build_result(nodes, -1);
}

}  // namespace uniplan
