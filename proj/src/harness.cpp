#include "uniplan/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

namespace uniplan {

namespace {

std::string format_rate(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

void write_metrics_csv(const std::filesystem::path &path, const std::string &config_id,
                       EnvKind env, const Metrics &m, bool header, double param_value = 0,
                       bool with_param = false) {
    std::ofstream out(path, header ? std::ios::trunc : std::ios::app);
    if (header) {
        if (with_param) {
            out << "param_value,";
        }
        out << "config_id,env,n_episodes,success_rate,raw_dynamics_validity,"
               "accepted_dynamics_validity,acceptance_rate,mean_plan_length\n";
    }
    if (with_param) {
        out << format_rate(param_value) << ',';
    }
    out << config_id << ',' << to_string(env) << ',' << m.n_episodes << ','
        << format_rate(m.success_rate) << ',' << format_rate(m.raw_dynamics_validity) << ','
        << format_rate(m.accepted_dynamics_validity) << ',' << format_rate(m.acceptance_rate)
        << ',' << format_rate(m.mean_plan_length) << '\n';
}

GenParams gen_params_from_json(EnvKind env, const json &j) {
    switch (env) {
        case EnvKind::maze: {
            MazeGenParams p;
            p.min_rows = j.value("min_rows", p.min_rows);
            p.max_rows = j.value("max_rows", p.max_rows);
            p.min_cols = j.value("min_cols", p.min_cols);
            p.max_cols = j.value("max_cols", p.max_cols);
            p.traps = j.value("traps", p.traps);
            return p;
        }
        case EnvKind::fetch: {
            FetchGenParams p;
            p.min_rows = j.value("min_rows", p.min_rows);
            p.max_rows = j.value("max_rows", p.max_rows);
            p.min_cols = j.value("min_cols", p.min_cols);
            p.max_cols = j.value("max_cols", p.max_cols);
            p.table_cells = j.value("table_cells", p.table_cells);
            return p;
        }
        case EnvKind::table: {
            TableGenParams p;
            p.min_misplaced = j.value("min_misplaced", p.min_misplaced);
            p.max_misplaced = j.value("max_misplaced", p.max_misplaced);
            return p;
        }
    }
    throw InvalidConfig("unknown env kind");
}

json gen_params_to_json(const GenParams &params) {
    return std::visit(
        [](const auto &p) -> json {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, MazeGenParams>) {
                return {{"min_rows", p.min_rows}, {"max_rows", p.max_rows},
                        {"min_cols", p.min_cols}, {"max_cols", p.max_cols},
                        {"traps", p.traps}};
            } else if constexpr (std::is_same_v<T, FetchGenParams>) {
                return {{"min_rows", p.min_rows},  {"max_rows", p.max_rows},
                        {"min_cols", p.min_cols},  {"max_cols", p.max_cols},
                        {"table_cells", p.table_cells}};
            } else {
                return {{"min_misplaced", p.min_misplaced}, {"max_misplaced", p.max_misplaced}};
            }
        },
        params);
}

Metrics aggregate(const std::vector<EpisodeRecord> &records) {
    Metrics m;
    m.n_episodes = static_cast<int>(records.size());
    double total_length = 0;
    for (const EpisodeRecord &record : records) {
        m.successes += record.executed_success ? 1 : 0;
        total_length += static_cast<double>(record.plan.actions.size());
        for (const auto &[reason, count] : record.plan.stats.rejected_by_reason) {
            m.reject_reason_histogram[reason] += count;
        }
        for (const TransitionCandidate &cand : record.plan.candidate_log) {
            ++m.candidates_total;
            m.candidates_valid += cand.ground_truth_valid ? 1 : 0;
            if (cand.accepted) {
                ++m.candidates_accepted;
                m.candidates_accepted_valid += cand.ground_truth_valid ? 1 : 0;
            }
        }
    }
    auto rate = [](long hits, long n) { return n > 0 ? static_cast<double>(hits) / n : 0.0; };
    m.success_rate = rate(m.successes, m.n_episodes);
    m.raw_dynamics_validity = rate(m.candidates_valid, m.candidates_total);
    m.accepted_dynamics_validity = rate(m.candidates_accepted_valid, m.candidates_accepted);
    m.acceptance_rate = rate(m.candidates_accepted, m.candidates_total);
    m.mean_plan_length = m.n_episodes > 0 ? total_length / m.n_episodes : 0;
    return m;
}

std::vector<EpisodeRecord> run_episodes(const HarnessConfig &config, int n_episodes, int jobs) {
    std::vector<EpisodeRecord> records(static_cast<std::size_t>(n_episodes));
    if (jobs <= 1) {
        for (int e = 0; e < n_episodes; ++e) {
            records[static_cast<std::size_t>(e)] = run_episode(config, e);
        }
        return records;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> workers;
    int n_workers = std::min(jobs, n_episodes);
    workers.reserve(static_cast<std::size_t>(n_workers));
    for (int w = 0; w < n_workers; ++w) {
        workers.emplace_back([&] {
            for (int e = next.fetch_add(1); e < n_episodes; e = next.fetch_add(1)) {
                records[static_cast<std::size_t>(e)] = run_episode(config, e);
            }
        });
    }
    for (std::thread &worker : workers) {
        worker.join();
    }
    return records;
}

void write_records(const std::filesystem::path &out_dir, const HarnessConfig &config,
                   const std::vector<EpisodeRecord> &records) {
    std::filesystem::create_directories(out_dir);
    std::ofstream out(out_dir / "episodes.jsonl", std::ios::trunc);
    for (const EpisodeRecord &record : records) {
        out << to_json(record, config).dump() << '\n';
    }
}

double *numeric_field(HarnessConfig &config, const std::string &param_path, int **int_field) {
    *int_field = nullptr;
    if (param_path == "noise.p_wrong_effect") return &config.noise.p_wrong_effect;
    if (param_path == "noise.p_delete") return &config.noise.p_delete;
    if (param_path == "noise.p_duplicate") return &config.noise.p_duplicate;
    if (param_path == "noise.q_inverse") return &config.noise.q_inverse;
    if (param_path == "noise.counter_error") return &config.noise.counter_error;
    if (param_path == "noise.value_noise.p") return &config.noise.value_noise.p;
    if (param_path == "policy.epsilon") return &config.policy.epsilon;
    if (param_path == "policy.temperature") return &config.policy.temperature;
    if (param_path == "noise.value_noise.k") {
        *int_field = &config.noise.value_noise.k;
        return nullptr;
    }
    if (param_path == "planner.beams") {
        *int_field = &config.planner.beams;
        return nullptr;
    }
    if (param_path == "planner.action_branch") {
        *int_field = &config.planner.action_branch;
        return nullptr;
    }
    if (param_path == "planner.dynamics_branch") {
        *int_field = &config.planner.dynamics_branch;
        return nullptr;
    }
    if (param_path == "planner.horizon") {
        *int_field = &config.planner.horizon;
        return nullptr;
    }
    throw InvalidConfig("unknown sweep parameter: " + param_path);
}

}  // namespace

std::string to_string(FailureMode m) {
    switch (m) {
        case FailureMode::none: return "none";
        case FailureMode::trapped: return "trapped";
        case FailureMode::invalid_action: return "invalid_action";
        case FailureMode::goal_not_reached: return "goal_not_reached";
        case FailureMode::planner_no_valid_transitions: return "planner_no_valid_transitions";
    }
    return "?";
}

ExecutionResult execute_plan(const Instance &inst, const Observation &o0, const Goal &goal,
                             const std::vector<Action> &actions, Rng &env_rng) {
    ExecutionResult result;
    result.trace.push_back(o0);
    Observation obs = o0;
    bool rule_violation = false;
    for (const Action &a : actions) {
        if (env_terminal(inst, obs)) {
            break;
        }
        try {
            obs = env_step(inst, obs, a, env_rng);
        } catch (const DestinationOccupied &) {
            rule_violation = true;
            break;
        } catch (const SelfMove &) {
            rule_violation = true;
            break;
        } catch (const WrongEnvironmentAction &) {
            rule_violation = true;
            break;
        }
        result.trace.push_back(obs);
        ++result.executed_steps;
        if (const auto *maze = std::get_if<MazeObs>(&obs);
            maze && maze->status == MazeStatus::trapped) {
            break;
        }
    }
    result.success = !rule_violation && goal_reached(inst, obs, goal);
    if (result.success) {
        result.failure_mode = FailureMode::none;
    } else if (rule_violation) {
        result.failure_mode = FailureMode::invalid_action;
    } else if (const auto *maze = std::get_if<MazeObs>(&obs);
               maze && maze->status == MazeStatus::trapped) {
        result.failure_mode = FailureMode::trapped;
    } else {
        result.failure_mode = FailureMode::goal_not_reached;
    }
    return result;
}

HarnessConfig default_config(EnvKind env) {
    HarnessConfig config;
    config.env = env;
    switch (env) {
        case EnvKind::maze:
            config.env_params = MazeGenParams{4, 5, 4, 5, 3};
            config.planner = {2, 4, 1, 12, false, true};
            break;
        case EnvKind::fetch:
            config.env_params = FetchGenParams{4, 5, 4, 5, 2};
            config.planner = {2, 5, 1, 16, false, true};
            break;
        case EnvKind::table:
            config.env_params = TableGenParams{2, 4};
            config.planner = {2, 4, 4, 12, false, true};
            break;
    }
    return config;
}

HarnessConfig config_from_json(const json &j) {
    EnvKind env = env_kind_from_string(j.value("env", "frozenlake"));
    HarnessConfig config = default_config(env);
    config.seed = j.value("seed", config.seed);
    if (j.contains("env_params")) {
        config.env_params = gen_params_from_json(env, j["env_params"]);
    }
    if (j.contains("planner")) {
        config.planner = planner_config_from_json(j["planner"]);
    }
    if (j.contains("noise")) {
        config.noise = noise_profile_from_json(j["noise"]);
    }
    if (j.contains("policy")) {
        config.policy = policy_params_from_json(j["policy"]);
    }
    validate(config.planner, env);
    return config;
}

json to_json(const HarnessConfig &config) {
    return {{"env", to_string(config.env)},
            {"seed", config.seed},
            {"env_params", gen_params_to_json(config.env_params)},
            {"planner", to_json(config.planner)},
            {"noise", to_json(config.noise)},
            {"policy", to_json(config.policy)}};
}

HarnessConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidConfig("cannot open config file: " + path.string());
    }
    json j;
    in >> j;
    return config_from_json(j);
}

json to_json(const EpisodeRecord &record, const HarnessConfig &config) {
    json candidates = json::array();
    for (const TransitionCandidate &cand : record.plan.candidate_log) {
        candidates.push_back(to_json(cand));
    }
    return {{"episode_index", record.episode_index},
            {"env_kind", to_string(record.env_kind)},
            {"instance", to_json(record.instance)},
            {"cfg",
             {{"seed", config.seed},
              {"planner", to_json(config.planner)},
              {"policy", to_json(config.policy)}}},
            {"noise", to_json(config.noise)},
            {"plan", to_json(record.plan)},
            {"executed_success", record.executed_success},
            {"executed_steps", record.executed_steps},
            {"failure_mode", to_string(record.failure_mode)},
            {"candidate_log", candidates}};
}

EpisodeRecord run_episode(const HarnessConfig &config, std::int64_t episode_index) {
    EpisodeRecord record;
    record.episode_index = episode_index;
    record.env_kind = config.env;

    Rng instance_rng = derive_stream({config.seed, episode_index, StreamRole::instance});
    record.instance = random_instance(config.env_params, instance_rng);
    Observation o0 = initial_obs(record.instance);
    Goal goal = goal_of(record.instance);

    RoleStreams streams = derive_role_streams(config.seed, episode_index);
    record.plan = plan(record.instance, o0, goal, config.noise, config.policy, config.planner,
                       streams);

    Rng env_rng = derive_stream({config.seed, episode_index, StreamRole::env});
    ExecutionResult executed = execute_plan(record.instance, o0, goal, record.plan.actions, env_rng);
    record.executed_success = executed.success;
    record.executed_steps = executed.executed_steps;
    record.failure_mode = executed.failure_mode;
    if (!executed.success && record.plan.status == PlanStatus::no_valid_transitions) {
        record.failure_mode = FailureMode::planner_no_valid_transitions;
    }
    return record;
}

json to_json(const Metrics &m) {
    return {{"n_episodes", m.n_episodes},
            {"success_rate", m.success_rate},
            {"raw_dynamics_validity", m.raw_dynamics_validity},
            {"accepted_dynamics_validity", m.accepted_dynamics_validity},
            {"acceptance_rate", m.acceptance_rate},
            {"reject_reason_histogram", m.reject_reason_histogram},
            {"mean_plan_length", m.mean_plan_length}};
}

Metrics run_eval(const HarnessConfig &config, int n_episodes,
                 const std::filesystem::path &out_dir, const std::string &config_id, int jobs) {
    std::vector<EpisodeRecord> records = run_episodes(config, n_episodes, jobs);
    Metrics metrics = aggregate(records);
    if (!out_dir.empty()) {
        write_records(out_dir, config, records);
        write_metrics_csv(out_dir / "metrics.csv", config_id, config.env, metrics, true);
    }
    return metrics;
}

ConfidenceInterval two_proportion_ci(long hits1, long n1, long hits2, long n2) {
    if (n1 == 0 || n2 == 0) {
        return {-1, 1};
    }
    double p1 = static_cast<double>(hits1) / static_cast<double>(n1);
    double p2 = static_cast<double>(hits2) / static_cast<double>(n2);
    double se = std::sqrt(p1 * (1 - p1) / static_cast<double>(n1) +
                          p2 * (1 - p2) / static_cast<double>(n2));
    double delta = p1 - p2;
    return {delta - 1.96 * se, delta + 1.96 * se};
}

AblationResult ablate_filtering(const HarnessConfig &config, int n_episodes,
                                const std::filesystem::path &out_dir, int jobs) {
    HarnessConfig on = config;
    on.planner.filtering_enabled = true;
    HarnessConfig off = config;
    off.planner.filtering_enabled = false;

    AblationResult result;
    result.with_filtering =
        run_eval(on, n_episodes, out_dir.empty() ? out_dir : out_dir / "on", "filtering_on", jobs);
    result.without_filtering = run_eval(
        off, n_episodes, out_dir.empty() ? out_dir : out_dir / "off", "filtering_off", jobs);

    const Metrics &m_on = result.with_filtering;
    result.success_delta_ci = two_proportion_ci(m_on.successes, m_on.n_episodes,
                                                result.without_filtering.successes,
                                                result.without_filtering.n_episodes);
    result.validity_delta_ci =
        two_proportion_ci(m_on.candidates_accepted_valid, m_on.candidates_accepted,
                          m_on.candidates_valid, m_on.candidates_total);
    return result;
}

std::vector<std::pair<double, Metrics>> sweep(const HarnessConfig &config,
                                              const std::string &param_path,
                                              const std::vector<double> &values, int n_episodes,
                                              const std::filesystem::path &out_dir, int jobs) {
    std::vector<std::pair<double, Metrics>> rows;
    bool first = true;
    for (double value : values) {
        HarnessConfig point = config;
        int *int_field = nullptr;
        double *field = numeric_field(point, param_path, &int_field);
        if (field != nullptr) {
            *field = value;
        } else {
            *int_field = static_cast<int>(std::llround(value));
        }
        validate(point.noise);
        validate(point.planner, point.env);
        Metrics metrics = run_eval(point, n_episodes, {}, param_path, jobs);
        if (!out_dir.empty()) {
            std::filesystem::create_directories(out_dir);
            write_metrics_csv(out_dir / "sweep.csv", param_path, point.env, metrics, first, value,
                              true);
        }
        rows.emplace_back(value, metrics);
        first = false;
    }
    return rows;
}

}  // namespace uniplan
