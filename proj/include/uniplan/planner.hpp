#pragma once

#include <functional>

#include "uniplan/filtering.hpp"

namespace uniplan {

struct BeamEntry {
    Observation obs;
    std::vector<Action> actions;
    std::vector<Observation> predicted_obs;  // one per action
    double score = 0;                        // negated steps-remaining estimate
    bool terminal = false;
};

enum class PlanStatus { complete, horizon_exhausted, no_valid_transitions };

std::string to_string(PlanStatus s);

struct PlanStats {
    long proposed = 0;  // dynamics candidates drawn
    long accepted = 0;
    std::map<std::string, long> rejected_by_reason;
    long beams_expanded = 0;
};

struct PlanResult {
    std::vector<Action> actions;
    std::vector<Observation> predicted_obs;
    double score = 0;
    PlanStatus status = PlanStatus::horizon_exhausted;
    PlanStats stats;
    std::vector<TransitionCandidate> candidate_log;
};

struct RoleStreams {
    Rng policy;
    Rng forward;
    Rng inverse;
    Rng value;
};

RoleStreams derive_role_streams(std::uint64_t master_seed, std::int64_t episode_index);

// Called once per planning step with the full candidate pool and the retained
// top-B beams; used by audits and tests.
using StepObserver =
    std::function<void(int step, const std::vector<BeamEntry> &candidates,
                       const std::vector<BeamEntry> &retained)>;

PlanResult plan(const Instance &inst, const Observation &o0, const Goal &goal,
                const NoiseProfile &noise, const PolicyParams &policy, const PlannerConfig &cfg,
                RoleStreams &streams, const StepObserver &observer = {});

// Highest-score entries, ties broken by insertion order.
std::vector<BeamEntry> select_top_b(std::vector<BeamEntry> candidates, int beams);

struct TreeTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr long kBruteForceNodeCap = 1'000'000;

// Exhaustive shortest plan over ground-truth dynamics; the reference oracle
// for the beam planner. Table plans are searched at slot granularity.
PlanResult brute_force_plan(const Instance &inst, const Observation &o0, const Goal &goal,
                            int max_depth, long node_cap = kBruteForceNodeCap);

}  // namespace uniplan
