#pragma once

#include <filesystem>

#include "uniplan/serialize.hpp"

namespace uniplan {

enum class FailureMode {
    none,
    trapped,
    invalid_action,
    goal_not_reached,
    planner_no_valid_transitions,
};

std::string to_string(FailureMode m);

struct ExecutionResult {
    bool success = false;
    FailureMode failure_mode = FailureMode::none;
    int executed_steps = 0;
    std::vector<Observation> trace;  // includes the initial observation
};

// Steps the ground-truth environment through the plan; stops early on trap
// entry or a rule violation. Failures are data, not errors.
ExecutionResult execute_plan(const Instance &inst, const Observation &o0, const Goal &goal,
                             const std::vector<Action> &actions, Rng &env_rng);

struct HarnessConfig {
    EnvKind env = EnvKind::maze;
    std::uint64_t seed = 0;
    GenParams env_params = MazeGenParams{};
    PlannerConfig planner;
    NoiseProfile noise;
    PolicyParams policy;
};

// Per-task defaults: planner rows of Table 3 plus horizon slack.
HarnessConfig default_config(EnvKind env);
HarnessConfig config_from_json(const json &j);
json to_json(const HarnessConfig &config);
HarnessConfig load_config(const std::filesystem::path &path);

struct EpisodeRecord {
    std::int64_t episode_index = 0;
    EnvKind env_kind = EnvKind::maze;
    Instance instance;
    PlanResult plan;
    bool executed_success = false;
    int executed_steps = 0;
    FailureMode failure_mode = FailureMode::none;
};

json to_json(const EpisodeRecord &record, const HarnessConfig &config);

EpisodeRecord run_episode(const HarnessConfig &config, std::int64_t episode_index);

struct Metrics {
    int n_episodes = 0;
    double success_rate = 0;
    double raw_dynamics_validity = 0;
    double accepted_dynamics_validity = 0;
    double acceptance_rate = 0;
    std::map<std::string, long> reject_reason_histogram;
    double mean_plan_length = 0;
    // Raw counts behind the rates, kept for confidence intervals.
    long successes = 0;
    long candidates_total = 0;
    long candidates_valid = 0;
    long candidates_accepted = 0;
    long candidates_accepted_valid = 0;
};

json to_json(const Metrics &m);

// Runs n_episodes, writes episodes.jsonl and metrics.csv under out_dir (when
// non-empty) and returns the aggregate.
Metrics run_eval(const HarnessConfig &config, int n_episodes,
                 const std::filesystem::path &out_dir = {}, const std::string &config_id = "run",
                 int jobs = 1);

struct ConfidenceInterval {
    double lo = 0;
    double hi = 0;
    bool excludes_zero() const { return lo > 0 || hi < 0; }
};

// 95% two-sided normal-approximation interval for p1 - p2.
ConfidenceInterval two_proportion_ci(long hits1, long n1, long hits2, long n2);

struct AblationResult {
    Metrics with_filtering;
    Metrics without_filtering;
    ConfidenceInterval success_delta_ci;   // success(on) - success(off)
    ConfidenceInterval validity_delta_ci;  // accepted validity - raw validity, on arm
};

// Paired arms: identical instance and policy streams, only the filter toggled.
AblationResult ablate_filtering(const HarnessConfig &config, int n_episodes,
                                const std::filesystem::path &out_dir = {}, int jobs = 1);

// One run_eval per value of the numeric field at param_path (e.g.
// "noise.p_wrong_effect"); writes sweep.csv when out_dir is set.
std::vector<std::pair<double, Metrics>> sweep(const HarnessConfig &config,
                                              const std::string &param_path,
                                              const std::vector<double> &values, int n_episodes,
                                              const std::filesystem::path &out_dir = {},
                                              int jobs = 1);

}  // namespace uniplan
