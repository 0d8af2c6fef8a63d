#include <CLI11.hpp>
#include <iostream>

#include "uniplan/harness.hpp"

namespace {

using namespace uniplan;

struct CommonOpts {
    std::string env = "frozenlake";
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int episodes = 50;
    std::string out_dir;
    bool no_filtering = false;
    int jobs = 1;
};

void add_common(CLI::App *cmd, CommonOpts &opts, bool with_episodes = true) {
    cmd->add_option("--env", opts.env, "frozenlake|minibehavior|languagetable");
    cmd->add_option("--config", opts.config_path, "JSON config file");
    cmd->add_option("--seed", opts.seed, "master seed")->each([&opts](const std::string &) {
        opts.seed_set = true;
    });
    if (with_episodes) {
        cmd->add_option("--episodes", opts.episodes, "number of episodes");
    }
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_flag("--no-filtering", opts.no_filtering, "disable self-discriminated filtering");
    cmd->add_option("--jobs", opts.jobs, "concurrent episodes");
}

HarnessConfig resolve_config(const CommonOpts &opts) {
    HarnessConfig config;
    if (!opts.config_path.empty()) {
        config = load_config(opts.config_path);
    } else {
        config = default_config(env_kind_from_string(opts.env));
    }
    if (opts.seed_set) {
        config.seed = opts.seed;
    }
    if (opts.no_filtering) {
        config.planner.filtering_enabled = false;
    }
    return config;
}

int cmd_plan(const CommonOpts &opts) {
    HarnessConfig config = resolve_config(opts);
    EpisodeRecord record = run_episode(config, 0);
    std::cout << to_json(record, config).dump(2) << '\n';
    return record.executed_success ? 0 : 1;
}

int cmd_eval(const CommonOpts &opts) {
    HarnessConfig config = resolve_config(opts);
    Metrics metrics = run_eval(config, opts.episodes, std::filesystem::path{opts.out_dir}, "eval",
                               opts.jobs);
    std::cout << to_json(metrics).dump(2) << '\n';
    return 0;
}

int cmd_ablate(const CommonOpts &opts) {
    HarnessConfig config = resolve_config(opts);
    AblationResult result = ablate_filtering(config, opts.episodes,
                                             std::filesystem::path{opts.out_dir}, opts.jobs);
    json report{{"filtering_on", to_json(result.with_filtering)},
                {"filtering_off", to_json(result.without_filtering)},
                {"success_delta_ci", {result.success_delta_ci.lo, result.success_delta_ci.hi}},
                {"validity_delta_ci", {result.validity_delta_ci.lo, result.validity_delta_ci.hi}}};
    std::cout << report.dump(2) << '\n';
    return 0;
}

int cmd_sweep(const CommonOpts &opts, const std::string &param, const std::vector<double> &values) {
    HarnessConfig config = resolve_config(opts);
    auto rows = sweep(config, param, values, opts.episodes, std::filesystem::path{opts.out_dir},
                      opts.jobs);
    json report = json::array();
    for (const auto &[value, metrics] : rows) {
        report.push_back(json{{"value", value}, {"metrics", to_json(metrics)}});
    }
    std::cout << report.dump(2) << '\n';
    return 0;
}

bool golden_maze() {
    MazeInstance inst{3, 3, {{1, 2}}, {0, 0}, {2, 2}};
    HarnessConfig config = default_config(EnvKind::maze);
    config.planner = {2, 4, 1, 8, false, true};
    config.policy = {0.0, 1e-6};
    RoleStreams streams = derive_role_streams(config.seed, 0);
    PlanResult result = plan(Instance{inst}, maze_initial_obs(inst), Goal::reach_gift(),
                             config.noise, config.policy, config.planner, streams);
    Rng env_rng(0);
    ExecutionResult exec = execute_plan(Instance{inst}, maze_initial_obs(inst), Goal::reach_gift(),
                                        result.actions, env_rng);
    return result.status == PlanStatus::complete && result.actions.size() == 4 && exec.success;
}

bool golden_fetch() {
    FetchInstance inst{4, 4, {{0, 3}}, {3, 3}, {1, 2}, Direction::left};
    const char *plan_text[] = {"turn left", "turn left", "move forward", "turn right",
                               "move forward", "pickup", "turn left", "turn left",
                               "move forward", "drop"};
    std::vector<Action> actions;
    for (const char *text : plan_text) {
        actions.push_back(parse_action(text, EnvKind::fetch));
    }
    ValueEstimate v = fetch_value_oracle(inst, fetch_initial_obs(inst));
    Rng env_rng(0);
    ExecutionResult exec = execute_plan(Instance{inst}, fetch_initial_obs(inst),
                                        Goal::apple_on_table(), actions, env_rng);
    return exec.success && v.steps_remaining == 10 && v.components.at("pickup") == 6 &&
           v.components.at("drop") == 4;
}

bool golden_table() {
    TableObs initial;
    initial.placement = {
        {BlockId::yellow_star, {SlotId::top_center, SubOffset::anchor}},
        {BlockId::blue_cube, {SlotId::top_center, SubOffset::east}},
        {BlockId::red_moon, {SlotId::top_left, SubOffset::anchor}},
        {BlockId::green_star, {SlotId::top_right, SubOffset::anchor}},
        {BlockId::green_cube, {SlotId::center_left, SubOffset::anchor}},
        {BlockId::blue_moon, {SlotId::center_right, SubOffset::anchor}},
        {BlockId::yellow_pentagon, {SlotId::bottom_left, SubOffset::anchor}},
        {BlockId::red_pentagon, {SlotId::bottom_right, SubOffset::anchor}},
    };
    std::map<BlockId, SlotId> target = {
        {BlockId::yellow_star, SlotId::top_center},   {BlockId::red_moon, SlotId::top_left},
        {BlockId::green_star, SlotId::top_right},     {BlockId::green_cube, SlotId::center_left},
        {BlockId::blue_cube, SlotId::center_right},   {BlockId::blue_moon, SlotId::bottom_center},
        {BlockId::yellow_pentagon, SlotId::bottom_left},
        {BlockId::red_pentagon, SlotId::bottom_right},
    };
    Goal goal = Goal::target_config(target);
    std::vector<Action> actions = {parse_action("move blue_moon to bottom_center", EnvKind::table),
                                   parse_action("move blue_cube to center_right", EnvKind::table)};
    std::vector<double> values{table_value_oracle(initial, goal).steps_remaining};
    Rng env_rng(0);
    TableObs obs = initial;
    for (const Action &a : actions) {
        obs = table_step(obs, a, env_rng);
        values.push_back(table_value_oracle(obs, goal).steps_remaining);
    }
    Instance inst{TableInstance{initial, target}};
    return goal_reached(inst, Observation{obs}, goal) && values == std::vector<double>{2, 1, 0};
}

int cmd_golden() {
    struct {
        const char *name;
        bool (*fn)();
    } checks[] = {{"frozenlake", golden_maze}, {"minibehavior", golden_fetch},
                  {"languagetable", golden_table}};
    bool all_ok = true;
    for (const auto &check : checks) {
        bool ok = check.fn();
        all_ok = all_ok && ok;
        std::cout << (ok ? "PASS" : "FAIL") << "  golden " << check.name << '\n';
    }
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Beam-search planning over surrogate dynamics models with "
                 "self-discriminated filtering"};
    app.require_subcommand(1);

    CommonOpts opts;
    auto *plan_cmd = app.add_subcommand("plan", "plan and execute a single episode");
    add_common(plan_cmd, opts, false);
    auto *eval_cmd = app.add_subcommand("eval", "run an evaluation batch");
    add_common(eval_cmd, opts);
    auto *ablate_cmd = app.add_subcommand("ablate-filtering", "paired filtering on/off runs");
    add_common(ablate_cmd, opts);
    auto *sweep_cmd = app.add_subcommand("sweep", "sweep one numeric config field");
    add_common(sweep_cmd, opts);
    std::string sweep_param;
    std::vector<double> sweep_values;
    sweep_cmd->add_option("--param", sweep_param, "config field, e.g. noise.p_wrong_effect")
        ->required();
    sweep_cmd->add_option("--values", sweep_values, "values to sweep")->required();
    auto *golden_cmd = app.add_subcommand("golden", "run the three golden trajectory checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (plan_cmd->parsed()) return cmd_plan(opts);
        if (eval_cmd->parsed()) return cmd_eval(opts);
        if (ablate_cmd->parsed()) return cmd_ablate(opts);
        if (sweep_cmd->parsed()) return cmd_sweep(opts, sweep_param, sweep_values);
        if (golden_cmd->parsed()) return cmd_golden();
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
