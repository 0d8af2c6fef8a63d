#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "uniplan/core.hpp"

using namespace uniplan;

TEST_CASE("parse_action: table block-to-block with articles") {
    Action a = parse_action("move the blue cube to the red pentagon", EnvKind::table);
    CHECK(a == Action{MoveBlockToBlock{BlockId::blue_cube, BlockId::red_pentagon}});
}

TEST_CASE("parse_action: maze moves") {
    CHECK(parse_action("go down", EnvKind::maze) == Action{MazeMove{Direction::down}});
    CHECK(parse_action("Go Left", EnvKind::maze) == Action{MazeMove{Direction::left}});
    CHECK(parse_action("move up", EnvKind::maze) == Action{MazeMove{Direction::up}});
}

TEST_CASE("parse_action: fetch alphabet") {
    CHECK(parse_action("turn left", EnvKind::fetch) == Action{Turn{Side::left}});
    CHECK(parse_action("turn right", EnvKind::fetch) == Action{Turn{Side::right}});
    CHECK(parse_action("move forward", EnvKind::fetch) == Action{MoveForward{}});
    CHECK(parse_action("pick up the apple", EnvKind::fetch) == Action{PickUpApple{}});
    CHECK(parse_action("pickup", EnvKind::fetch) == Action{PickUpApple{}});
    CHECK(parse_action("drop apple on table", EnvKind::fetch) == Action{DropAppleOnTable{}});
    CHECK(parse_action("drop", EnvKind::fetch) == Action{DropAppleOnTable{}});
}

TEST_CASE("parse_action: underscores and spaces are interchangeable") {
    Action a = parse_action("move blue_moon to bottom_center", EnvKind::table);
    Action b = parse_action("move blue moon to bottom center", EnvKind::table);
    CHECK(a == b);
    CHECK(a == Action{MoveBlockToPosition{BlockId::blue_moon, SlotId::bottom_center}});
}

TEST_CASE("parse_action: out-of-grammar text") {
    CHECK_THROWS_AS(parse_action("fly north", EnvKind::maze), ParseError);
    CHECK_THROWS_AS(parse_action("", EnvKind::maze), ParseError);
    CHECK_THROWS_AS(parse_action("move blue_cube to nowhere", EnvKind::table), ParseError);
}

TEST_CASE("parse_action: cross-environment actions rejected") {
    CHECK_THROWS_AS(parse_action("go down", EnvKind::table), ParseError);
    CHECK_THROWS_AS(parse_action("turn left", EnvKind::maze), ParseError);
    CHECK_THROWS_AS(parse_action("move blue_cube to red_pentagon", EnvKind::fetch), ParseError);
}

TEST_CASE("normalize_action: canonical tuples") {
    CHECK(normalize_action(MoveBlockToBlock{BlockId::blue_cube, BlockId::red_pentagon}) ==
          NormalizedAction{"move", "blue_cube", "red_pentagon"});
    CHECK(normalize_action(NoChange{}) == NormalizedAction{"none", "", ""});
    CHECK(normalize_action(MazeMove{Direction::down}).verb == "go");
}

TEST_CASE("normalize_action: article-variant renderings normalize identically") {
    Action a = parse_action("move blue cube to red pentagon", EnvKind::table);
    Action b = parse_action("move the blue cube to the red pentagon", EnvKind::table);
    CHECK(normalize_action(a) == normalize_action(b));
}

TEST_CASE("normalize after parse of rendered form is idempotent") {
    for (EnvKind kind : {EnvKind::maze, EnvKind::fetch, EnvKind::table}) {
        // alphabets defined in envs, so rebuild small ones here by hand
        std::vector<Action> actions;
        if (kind == EnvKind::maze) {
            for (Direction d : {Direction::left, Direction::down, Direction::right, Direction::up})
                actions.push_back(MazeMove{d});
        } else if (kind == EnvKind::fetch) {
            actions = {Turn{Side::left}, Turn{Side::right}, MoveForward{}, PickUpApple{},
                       DropAppleOnTable{}};
        } else {
            for (BlockId src : all_blocks()) {
                for (BlockId dst : all_blocks())
                    if (src != dst) actions.push_back(MoveBlockToBlock{src, dst});
                for (SlotId slot : all_slots()) actions.push_back(MoveBlockToPosition{src, slot});
            }
        }
        for (const Action &a : actions) {
            Action reparsed = parse_action(render_action(a), kind);
            CHECK(normalize_action(reparsed) == normalize_action(a));
            CHECK(reparsed == a);
        }
    }
}

TEST_CASE("render_action: canonical lowercase with underscores") {
    CHECK(render_action(MoveBlockToPosition{BlockId::blue_moon, SlotId::bottom_center}) ==
          "move blue_moon to bottom_center");
    CHECK(render_action(MazeMove{Direction::right}) == "go right");
    CHECK(render_action(PickUpApple{}) == "pick up apple");
}

TEST_CASE("Goal::target_config validates the bijection") {
    std::map<BlockId, SlotId> ok;
    for (int i = 0; i < kNumBlocks; ++i) ok[all_blocks()[i]] = all_slots()[i];
    CHECK_NOTHROW(Goal::target_config(ok));

    std::map<BlockId, SlotId> clash = ok;
    clash[BlockId::blue_moon] = clash.at(BlockId::blue_cube);
    CHECK_THROWS_AS(Goal::target_config(clash), InvalidConfig);

    std::map<BlockId, SlotId> partial(ok.begin(), std::next(ok.begin(), 3));
    CHECK_THROWS_AS(Goal::target_config(partial), InvalidConfig);
}

TEST_CASE("PlannerConfig validation") {
    PlannerConfig cfg;
    CHECK_NOTHROW(validate(cfg, EnvKind::maze));

    PlannerConfig zero_beam = cfg;
    zero_beam.beams = 0;
    CHECK_THROWS_AS(validate(zero_beam, EnvKind::maze), InvalidConfig);

    PlannerConfig negative_h = cfg;
    negative_h.horizon = -1;
    CHECK_THROWS_AS(validate(negative_h, EnvKind::maze), InvalidConfig);

    PlannerConfig wide = cfg;
    wide.action_branch = 5;
    CHECK_THROWS_AS(validate(wide, EnvKind::maze), InvalidConfig);
    CHECK_NOTHROW(validate(wide, EnvKind::fetch));
}

TEST_CASE("derive_stream: determinism and separation") {
    Rng a1 = derive_stream({42, 0, StreamRole::policy});
    Rng a2 = derive_stream({42, 0, StreamRole::policy});
    Rng b = derive_stream({42, 0, StreamRole::forward});
    Rng c = derive_stream({43, 0, StreamRole::policy});
    Rng d = derive_stream({42, 1, StreamRole::policy});
    std::vector<std::uint64_t> sa1, sa2, sb, sc, sd;
    for (int i = 0; i < 16; ++i) {
        sa1.push_back(a1.next());
        sa2.push_back(a2.next());
        sb.push_back(b.next());
        sc.push_back(c.next());
        sd.push_back(d.next());
    }
    CHECK(sa1 == sa2);
    CHECK(sa1 != sb);
    CHECK(sa1 != sc);
    CHECK(sa1 != sd);
}

TEST_CASE("Rng draws stay in range") {
    Rng rng(7);
    for (int i = 0; i < 1000; ++i) {
        CHECK(rng.index(5) < 5);
        double x = rng.real();
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
    }
    Rng never(1), always(1);
    for (int i = 0; i < 100; ++i) {
        CHECK_FALSE(never.chance(0.0));
        CHECK(always.chance(1.0));
    }
}

TEST_CASE("env kind string round trip") {
    for (EnvKind kind : {EnvKind::maze, EnvKind::fetch, EnvKind::table}) {
        CHECK(env_kind_from_string(to_string(kind)) == kind);
    }
    CHECK(to_string(EnvKind::maze) == "frozenlake");
    CHECK(to_string(EnvKind::fetch) == "minibehavior");
    CHECK(to_string(EnvKind::table) == "languagetable");
    CHECK_THROWS_AS(env_kind_from_string("atari"), ParseError);
}
