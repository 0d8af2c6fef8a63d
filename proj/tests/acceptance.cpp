// Acceptance suite: one pass/fail line per criterion, non-zero exit on any
// failure. Tolerances and budgets are pinned in code next to each check.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "uniplan/harness.hpp"

using namespace uniplan;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int id, const char *label, bool ok, double seconds, double budget,
            const std::string &detail = "") {
    bool in_budget = seconds < budget;
    std::printf("%s  criterion %2d: %s (%.2fs / %.0fs budget)%s%s\n",
                ok && in_budget ? "PASS" : "FAIL", id, label, seconds, budget,
                detail.empty() ? "" : " - ", detail.c_str());
    if (!ok || !in_budget) ++failures;
}

MazeInstance golden_maze() { return {3, 3, {{1, 2}}, {0, 0}, {2, 2}}; }

FetchInstance golden_fetch() {
    return {4, 4, {{0, 3}}, {3, 3}, {1, 2}, Direction::left};
}

TableObs template_table() {
    TableObs obs;
    obs.placement = {
        {BlockId::yellow_star, {SlotId::top_center, SubOffset::anchor}},
        {BlockId::blue_cube, {SlotId::top_center, SubOffset::east}},
        {BlockId::red_moon, {SlotId::top_left, SubOffset::anchor}},
        {BlockId::green_star, {SlotId::top_right, SubOffset::anchor}},
        {BlockId::green_cube, {SlotId::center_left, SubOffset::anchor}},
        {BlockId::blue_moon, {SlotId::center_right, SubOffset::anchor}},
        {BlockId::yellow_pentagon, {SlotId::bottom_left, SubOffset::anchor}},
        {BlockId::red_pentagon, {SlotId::bottom_right, SubOffset::anchor}},
    };
    return obs;
}

std::map<BlockId, SlotId> template_goal() {
    return {{BlockId::yellow_star, SlotId::top_center},
            {BlockId::red_moon, SlotId::top_left},
            {BlockId::green_star, SlotId::top_right},
            {BlockId::green_cube, SlotId::center_left},
            {BlockId::blue_cube, SlotId::center_right},
            {BlockId::blue_moon, SlotId::bottom_center},
            {BlockId::yellow_pentagon, SlotId::bottom_left},
            {BlockId::red_pentagon, SlotId::bottom_right}};
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

double elapsed(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// 1. Golden FrozenLake: complete 4-action plan that executes to success.
void criterion1() {
    auto t0 = Clock::now();
    Instance inst{golden_maze()};
    RoleStreams streams = derive_role_streams(0, 0);
    PlanResult result =
        plan(inst, initial_obs(inst), Goal::reach_gift(), {}, {0.0, 1e-6}, {2, 4, 1, 8}, streams);
    Rng env(0);
    ExecutionResult exec =
        execute_plan(inst, initial_obs(inst), Goal::reach_gift(), result.actions, env);
    bool ok = result.status == PlanStatus::complete && result.actions.size() == 4 && exec.success;
    report(1, "golden FrozenLake plan", ok, elapsed(t0), 1.0);
}

// 2. Golden Mini-BEHAVIOR: template plan replay plus the 6+4=10 value split.
void criterion2() {
    auto t0 = Clock::now();
    Instance inst{golden_fetch()};
    std::vector<Action> actions;
    for (const char *text : {"turn left", "turn left", "move forward", "turn right",
                             "move forward", "pickup", "turn left", "turn left", "move forward",
                             "drop"}) {
        actions.push_back(parse_action(text, EnvKind::fetch));
    }
    Rng env(0);
    ExecutionResult exec =
        execute_plan(inst, initial_obs(inst), Goal::apple_on_table(), actions, env);
    ValueEstimate v = fetch_value_oracle(golden_fetch(), fetch_initial_obs(golden_fetch()));
    bool ok = exec.success && v.steps_remaining == 10 && v.components.at("pickup") == 6 &&
              v.components.at("drop") == 4;
    report(2, "golden Mini-BEHAVIOR replay", ok, elapsed(t0), 1.0);
}

// 3. Golden Language Table: 2-action template plan, values 2 -> 1 -> 0.
void criterion3() {
    auto t0 = Clock::now();
    TableObs obs = template_table();
    Goal goal = Goal::target_config(template_goal());
    std::vector<Action> actions = {parse_action("move blue_moon to bottom_center", EnvKind::table),
                                   parse_action("move blue_cube to center_right", EnvKind::table)};
    Rng rng(0);
    std::vector<double> values{table_value_oracle(obs, goal).steps_remaining};
    for (const Action &a : actions) {
        obs = table_step(obs, a, rng);
        values.push_back(table_value_oracle(obs, goal).steps_remaining);
    }
    Instance inst{TableInstance{template_table(), template_goal()}};
    bool ok = values == std::vector<double>{2, 1, 0} && goal_reached(inst, Observation{obs}, goal);
    report(3, "golden Language Table plan", ok, elapsed(t0), 1.0);
}

// 4. Oracle optimality on 100 random 4x4 mazes: success 1.0, BFS-optimal length.
void criterion4() {
    auto t0 = Clock::now();
    Rng gen = derive_stream({4040, 0, StreamRole::instance});
    bool ok = true;
    for (int i = 0; i < 100 && ok; ++i) {
        Instance inst = random_instance(MazeGenParams{4, 4, 4, 4, 3}, gen);
        RoleStreams streams = derive_role_streams(4040, i);
        PlanResult beam = plan(inst, initial_obs(inst), Goal::reach_gift(), {}, {0.0, 1e-6},
                               {8, 4, 1, 16}, streams);
        const auto &mi = std::get<MazeInstance>(inst);
        double optimal = maze_value_oracle(mi, maze_initial_obs(mi)).steps_remaining;
        Rng env(0);
        ExecutionResult exec =
            execute_plan(inst, initial_obs(inst), Goal::reach_gift(), beam.actions, env);
        ok = beam.status == PlanStatus::complete && exec.success &&
             double(beam.actions.size()) == optimal;
    }
    report(4, "oracle optimality, 100 mazes", ok, elapsed(t0), 10.0);
}

// 5. Brute-force equivalence on 50 random instances per environment.
void criterion5() {
    auto t0 = Clock::now();
    bool ok = true;
    std::vector<std::pair<GenParams, PlannerConfig>> setups = {
        {MazeGenParams{4, 4, 4, 4, 3}, PlannerConfig{8, 4, 1, 6}},
        {FetchGenParams{3, 3, 3, 3, 1}, PlannerConfig{8, 5, 1, 6}},
        {TableGenParams{1, 3}, PlannerConfig{8, 4, 1, 6}},
    };
    for (std::size_t kind = 0; kind < setups.size() && ok; ++kind) {
        Rng gen = derive_stream({5050 + kind, 0, StreamRole::instance});
        int done = 0;
        while (done < 50 && ok) {
            Instance inst = random_instance(setups[kind].first, gen);
            PlanResult reference = brute_force_plan(inst, initial_obs(inst), goal_of(inst), 6);
            if (reference.status != PlanStatus::complete) continue;  // deeper than 6; skip
            RoleStreams streams = derive_role_streams(5050 + kind, done);
            PlanResult beam = plan(inst, initial_obs(inst), goal_of(inst), {}, {0.0, 1e-6},
                                   setups[kind].second, streams);
            ok = beam.status == PlanStatus::complete &&
                 beam.actions.size() == reference.actions.size();
            ++done;
        }
    }
    report(5, "brute-force equivalence, 50 per env", ok, elapsed(t0), 60.0);
}

// 6. Filtering ablation on the Language Table: validity and success both
//    improve with filtering, 95% CIs excluding zero.
void criterion6() {
    auto t0 = Clock::now();
    HarnessConfig config = default_config(EnvKind::table);
    config.seed = 6060;
    config.noise = {0.3, 0.1, 0.1, 0.95, {}, 0};
    config.planner.beams = 2;
    config.planner.action_branch = 4;
    config.planner.dynamics_branch = 4;
    AblationResult result = ablate_filtering(config, 200, {}, 4);
    const Metrics &on = result.with_filtering;
    const Metrics &off = result.without_filtering;
    bool ok = on.accepted_dynamics_validity > on.raw_dynamics_validity &&
              on.success_rate > off.success_rate && result.validity_delta_ci.excludes_zero() &&
              result.success_delta_ci.excludes_zero();
    char detail[160];
    std::snprintf(detail, sizeof detail,
                  "validity %.3f->%.3f, success off %.3f on %.3f, CIs [%.3f,%.3f] [%.3f,%.3f]",
                  on.raw_dynamics_validity, on.accepted_dynamics_validity, off.success_rate,
                  on.success_rate, result.validity_delta_ci.lo, result.validity_delta_ci.hi,
                  result.success_delta_ci.lo, result.success_delta_ci.hi);
    report(6, "filtering ablation, 200 paired episodes", ok, elapsed(t0), 300.0, detail);
}

// 7. Count-check completeness: 1,000 injected delete/duplicate candidates all
//    rejected with a perfect counter.
void criterion7() {
    auto t0 = Clock::now();
    Instance inst{TableInstance{template_table(), template_goal()}};
    Rng forward = derive_stream({7070, 0, StreamRole::forward});
    Rng inverse = derive_stream({7070, 0, StreamRole::inverse});
    NoiseProfile anomalies{0, 0.5, 0.5, 1, {}, 0};
    int rejected = 0, total = 0;
    while (total < 1000) {
        auto cands = discriminate(inst, Observation{template_table()},
                                  MoveBlockToPosition{BlockId::blue_moon, SlotId::bottom_center},
                                  4, anomalies, true, forward, inverse);
        for (const auto &c : cands) {
            ++total;
            if (!c.accepted && c.reject_reason == RejectReason::count_mismatch) ++rejected;
        }
    }
    report(7, "count-check completeness, 1000 anomalies", rejected == total, elapsed(t0), 5.0);
}

// 8. Rate calibration: 10,000 forward draws match the profile within 0.02.
void criterion8() {
    auto t0 = Clock::now();
    NoiseProfile noise{0.3, 0.1, 0.1, 1, {}, 0};
    Instance inst{golden_maze()};
    Rng rng = derive_stream({8080, 0, StreamRole::forward});
    std::map<ErrorCategory, int> hist;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        ++hist[forward_predict_detail(inst, Observation{maze_initial_obs(golden_maze())},
                                      MazeMove{Direction::down}, noise, rng)
                   .category];
    }
    bool ok = std::abs(hist[ErrorCategory::wrong_effect] / double(n) - 0.3) < 0.02 &&
              std::abs(hist[ErrorCategory::del] / double(n) - 0.1) < 0.02 &&
              std::abs(hist[ErrorCategory::dup] / double(n) - 0.1) < 0.02 &&
              std::abs(hist[ErrorCategory::valid] / double(n) - 0.5) < 0.02;
    report(8, "forward error-rate calibration", ok, elapsed(t0), 5.0);
}

// 9. Sentinel ordering: across 1,000 planning steps, no value-100 beam is kept
//    while a finite-valued candidate is dropped.
void criterion9() {
    auto t0 = Clock::now();
    bool ok = true;
    long steps = 0;
    Rng gen = derive_stream({9090, 0, StreamRole::instance});
    int episode = 0;
    while (steps < 1000) {
        Instance inst = random_instance(MazeGenParams{4, 4, 4, 4, 4}, gen);
        RoleStreams streams = derive_role_streams(9090, episode++);
        StepObserver observer = [&](int, const std::vector<BeamEntry> &candidates,
                                    const std::vector<BeamEntry> &retained) {
            ++steps;
            bool finite_dropped = false;
            for (const auto &c : candidates) {
                bool kept = false;
                for (const auto &r : retained) {
                    if (r.actions == c.actions && r.score == c.score) kept = true;
                }
                if (!kept && c.score > -kInfeasibleValue) finite_dropped = true;
            }
            if (finite_dropped) {
                for (const auto &r : retained) {
                    if (r.score <= -kInfeasibleValue) ok = false;
                }
            }
        };
        plan(inst, initial_obs(inst), Goal::reach_gift(), {}, {0.4, 1.0}, {2, 4, 1, 12}, streams,
             observer);
    }
    report(9, "sentinel ordering over 1000 steps", ok, elapsed(t0), 30.0);
}

// 10. Determinism: two identical eval runs produce byte-identical outputs.
void criterion10() {
    auto t0 = Clock::now();
    HarnessConfig config = default_config(EnvKind::table);
    config.seed = 1010;
    config.noise = {0.2, 0.05, 0.05, 0.9, {0.3, 1}, 0};
    fs::path d1 = fs::temp_directory_path() / "uniplan_accept_det1";
    fs::path d2 = fs::temp_directory_path() / "uniplan_accept_det2";
    fs::remove_all(d1);
    fs::remove_all(d2);
    run_eval(config, 25, d1, "det");
    run_eval(config, 25, d2, "det");
    bool ok = slurp(d1 / "episodes.jsonl") == slurp(d2 / "episodes.jsonl") &&
              slurp(d1 / "metrics.csv") == slurp(d2 / "metrics.csv") &&
              !slurp(d1 / "episodes.jsonl").empty();
    fs::remove_all(d1);
    fs::remove_all(d2);
    report(10, "byte-identical eval reruns", ok, elapsed(t0), 60.0);
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    if (failures == 0) {
        std::printf("all 10 acceptance criteria passed\n");
    } else {
        std::printf("%d acceptance criteria FAILED\n", failures);
    }
    return failures == 0 ? 0 : 1;
}
