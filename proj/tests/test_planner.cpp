#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "uniplan/planner.hpp"
#include "uniplan/serialize.hpp"

using namespace uniplan;

namespace {

MazeInstance golden_maze() { return {3, 3, {{1, 2}}, {0, 0}, {2, 2}}; }

FetchInstance golden_fetch() {
    return {4, 4, {{0, 3}}, {3, 3}, {1, 2}, Direction::left};
}

PlanResult plan_with(const Instance &inst, const PlannerConfig &cfg, const NoiseProfile &noise,
                     const PolicyParams &policy, std::uint64_t seed,
                     const StepObserver &observer = {}) {
    RoleStreams streams = derive_role_streams(seed, 0);
    return plan(inst, initial_obs(inst), goal_of(inst), noise, policy, cfg, streams, observer);
}

}  // namespace

TEST_CASE("plan: golden maze completes in 4 actions") {
    Instance inst{golden_maze()};
    PlanResult result = plan_with(inst, {2, 4, 1, 8}, {}, {0.0, 1e-6}, 0);
    CHECK(result.status == PlanStatus::complete);
    CHECK(result.actions.size() == 4);
    CHECK(result.predicted_obs.size() == 4);
    CHECK(result.score == 0);
}

TEST_CASE("plan: zero horizon exhausts immediately") {
    Instance inst{golden_maze()};
    PlanResult result = plan_with(inst, {2, 4, 1, 0}, {}, {0.0, 1e-6}, 0);
    CHECK(result.status == PlanStatus::horizon_exhausted);
    CHECK(result.actions.empty());
}

TEST_CASE("plan: all-rejected pool reports no_valid_transitions") {
    Instance inst{golden_maze()};
    NoiseProfile del{0, 1, 0, 1, {}, 0};
    PlanResult result = plan_with(inst, {2, 4, 1, 8}, del, {0.0, 1e-6}, 0);
    CHECK(result.status == PlanStatus::no_valid_transitions);
    CHECK(result.actions.empty());
    CHECK(result.stats.accepted == 0);
    CHECK(result.stats.rejected_by_reason.at("count_mismatch") == result.stats.proposed);
}

TEST_CASE("plan: invalid configs rejected") {
    Instance inst{golden_maze()};
    RoleStreams streams = derive_role_streams(0, 0);
    CHECK_THROWS_AS(plan(inst, initial_obs(inst), goal_of(inst), {}, {}, {2, 5, 1, 8}, streams),
                    InvalidConfig);
    CHECK_THROWS_AS(plan(inst, initial_obs(inst), goal_of(inst), {}, {}, {2, 4, 1, -1}, streams),
                    InvalidConfig);
}

TEST_CASE("select_top_b") {
    auto entry = [](double steps) {
        BeamEntry e;
        e.score = -steps;
        return e;
    };
    std::vector<BeamEntry> candidates{entry(3), entry(1), entry(2)};
    auto kept = select_top_b(candidates, 2);
    REQUIRE(kept.size() == 2);
    CHECK(kept[0].score == -1);
    CHECK(kept[1].score == -2);

    BeamEntry first = entry(2), second = entry(2);
    first.actions = {MazeMove{Direction::left}};
    second.actions = {MazeMove{Direction::right}};
    auto tied = select_top_b({first, second}, 1);
    REQUIRE(tied.size() == 1);
    CHECK(tied[0].actions == first.actions);  // insertion order wins

    auto fewer = select_top_b({entry(5)}, 2);
    CHECK(fewer.size() == 1);
}

TEST_CASE("brute_force_plan: reference solutions") {
    Instance maze{golden_maze()};
    PlanResult m = brute_force_plan(maze, initial_obs(maze), goal_of(maze), 4);
    CHECK(m.status == PlanStatus::complete);
    CHECK(m.actions.size() == 4);

    PlanResult shallow = brute_force_plan(maze, initial_obs(maze), goal_of(maze), 2);
    CHECK(shallow.status == PlanStatus::no_valid_transitions);

    Instance fetch{golden_fetch()};
    PlanResult f = brute_force_plan(fetch, initial_obs(fetch), goal_of(fetch), 10);
    CHECK(f.status == PlanStatus::complete);
    CHECK(f.actions.size() == 10);

    CHECK_THROWS_AS(brute_force_plan(fetch, initial_obs(fetch), goal_of(fetch), 10, 20),
                    TreeTooLarge);
}

TEST_CASE("brute_force_plan: plans replay to the goal") {
    Rng rng(55);
    for (int i = 0; i < 10; ++i) {
        Instance inst = random_instance(MazeGenParams{4, 4, 4, 4, 3}, rng);
        PlanResult result = brute_force_plan(inst, initial_obs(inst), goal_of(inst), 8);
        REQUIRE(result.status == PlanStatus::complete);
        Observation obs = initial_obs(inst);
        Rng env(0);
        for (const Action &a : result.actions) obs = env_step(inst, obs, a, env);
        CHECK(goal_reached(inst, obs, goal_of(inst)));
    }
}

TEST_CASE("beam width bound and pool size") {
    Instance inst{golden_maze()};
    PlannerConfig cfg{3, 4, 2, 8};
    bool saw_step = false;
    StepObserver observer = [&](int, const std::vector<BeamEntry> &candidates,
                                const std::vector<BeamEntry> &retained) {
        saw_step = true;
        CHECK(retained.size() <= 3);
        CHECK(candidates.size() <= std::size_t(3 * 4 * 2 + 3));
    };
    plan_with(inst, cfg, {}, {0.2, 1.0}, 5, observer);
    CHECK(saw_step);
}

TEST_CASE("terminal pass-through freezes finished beams") {
    Instance inst{golden_maze()};
    // horizon far beyond the optimum; the 4-step plan must survive untouched
    PlanResult result = plan_with(inst, {2, 4, 1, 20}, {}, {0.0, 1e-6}, 0);
    CHECK(result.status == PlanStatus::complete);
    CHECK(result.actions.size() == 4);
}

TEST_CASE("sentinel ordering: infeasible beams never outrank finite ones") {
    Rng rng(77);
    for (int i = 0; i < 10; ++i) {
        Instance inst = random_instance(MazeGenParams{4, 4, 4, 4, 4}, rng);
        StepObserver observer = [](int, const std::vector<BeamEntry> &candidates,
                                   const std::vector<BeamEntry> &retained) {
            bool finite_dropped = false;
            for (const auto &c : candidates) {
                bool kept = std::any_of(retained.begin(), retained.end(), [&](const BeamEntry &r) {
                    return r.actions == c.actions && r.score == c.score;
                });
                if (!kept && c.score > -kInfeasibleValue) finite_dropped = true;
            }
            if (finite_dropped) {
                for (const auto &r : retained) CHECK(r.score > -kInfeasibleValue);
            }
        };
        plan_with(inst, {2, 4, 1, 12}, {}, {0.3, 1.0}, 1000 + i, observer);
    }
}

TEST_CASE("oracle optimality on random mazes and fetch instances") {
    Rng rng(31);
    for (int i = 0; i < 15; ++i) {
        Instance inst = random_instance(MazeGenParams{4, 4, 4, 4, 3}, rng);
        PlanResult beam = plan_with(inst, {8, 4, 1, 16}, {}, {0.0, 1e-6}, 40 + i);
        PlanResult reference = brute_force_plan(inst, initial_obs(inst), goal_of(inst), 16);
        REQUIRE(beam.status == PlanStatus::complete);
        CHECK(beam.actions.size() == reference.actions.size());
    }
    for (int i = 0; i < 5; ++i) {
        Instance inst = random_instance(FetchGenParams{4, 4, 4, 4, 1}, rng);
        PlanResult beam = plan_with(inst, {8, 5, 1, 20}, {}, {0.0, 1e-6}, 80 + i);
        PlanResult reference = brute_force_plan(inst, initial_obs(inst), goal_of(inst), 20);
        REQUIRE(beam.status == PlanStatus::complete);
        CHECK(beam.actions.size() == reference.actions.size());
    }
}

TEST_CASE("determinism: identical streams give identical plans") {
    Instance inst{golden_fetch()};
    NoiseProfile noise{0.2, 0.05, 0.05, 0.9, {0.3, 1}, 0};
    PlannerConfig cfg{2, 5, 2, 16};
    PolicyParams policy{0.1, 1.0};
    RoleStreams s1 = derive_role_streams(9, 3);
    RoleStreams s2 = derive_role_streams(9, 3);
    PlanResult r1 = plan(inst, initial_obs(inst), goal_of(inst), noise, policy, cfg, s1);
    PlanResult r2 = plan(inst, initial_obs(inst), goal_of(inst), noise, policy, cfg, s2);
    CHECK(to_json(r1).dump() == to_json(r2).dump());
}

TEST_CASE("accounting: proposed = accepted + rejected") {
    Instance inst{golden_fetch()};
    NoiseProfile noise{0.3, 0.1, 0.1, 0.9, {}, 0};
    PlanResult result = plan_with(inst, {2, 5, 3, 16}, noise, {0.1, 1.0}, 17);
    long rejected = 0;
    for (const auto &[reason, n] : result.stats.rejected_by_reason) rejected += n;
    CHECK(result.stats.proposed == result.stats.accepted + rejected);
    CHECK(result.stats.proposed == long(result.candidate_log.size()));
}

TEST_CASE("filter gate: every plan transition was an accepted candidate") {
    Instance inst{golden_maze()};
    NoiseProfile noise{0.2, 0.05, 0.05, 1, {}, 0};
    PlanResult result = plan_with(inst, {4, 4, 2, 12}, noise, {0.1, 1.0}, 23);
    for (std::size_t i = 0; i < result.actions.size(); ++i) {
        const Observation &from = i == 0 ? initial_obs(inst) : result.predicted_obs[i - 1];
        bool found = std::any_of(
            result.candidate_log.begin(), result.candidate_log.end(),
            [&](const TransitionCandidate &c) {
                return c.accepted && actions_match(c.action, result.actions[i]) &&
                       canonical_key(c.obs) == canonical_key(from) &&
                       canonical_key(c.predicted) == canonical_key(result.predicted_obs[i]);
            });
        CHECK(found);
    }
}

TEST_CASE("dedupe trims identical beams without changing the outcome") {
    Instance inst{golden_maze()};
    PlannerConfig plain{4, 4, 1, 8};
    PlannerConfig dedup = plain;
    dedup.dedupe = true;
    PlanResult a = plan_with(inst, plain, {}, {0.0, 1e-6}, 3);
    PlanResult b = plan_with(inst, dedup, {}, {0.0, 1e-6}, 3);
    CHECK(a.status == PlanStatus::complete);
    CHECK(b.status == PlanStatus::complete);
    CHECK(a.actions.size() == b.actions.size());
}
