#include "uniplan/core.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace uniplan {

namespace {

const std::array<BlockId, kNumBlocks> kBlocks = {
    BlockId::blue_moon,   BlockId::blue_cube,       BlockId::green_star, BlockId::green_cube,
    BlockId::yellow_star, BlockId::yellow_pentagon, BlockId::red_moon,   BlockId::red_pentagon,
};
const std::array<SlotId, kNumSlots> kSlots = {
    SlotId::top_center,    SlotId::top_left,    SlotId::top_right,    SlotId::center_left,
    SlotId::center_right,  SlotId::bottom_center, SlotId::bottom_left, SlotId::bottom_right,
};

const char *kBlockNames[] = {"blue_moon",   "blue_cube",       "green_star", "green_cube",
                             "yellow_star", "yellow_pentagon", "red_moon",   "red_pentagon"};
const char *kSlotNames[] = {"top_center",   "top_left",      "top_right",   "center_left",
                            "center_right", "bottom_center", "bottom_left", "bottom_right"};

// Lowercase, underscores to spaces, articles dropped, whitespace collapsed.
std::vector<std::string> tokenize(const std::string &text) {
    std::string lowered;
    lowered.reserve(text.size());
    for (char c : text) {
        if (c == '_') {
            lowered.push_back(' ');
        } else {
            lowered.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
    }
    std::vector<std::string> tokens;
    std::istringstream stream(lowered);
    std::string tok;
    while (stream >> tok) {
        if (tok == "the" || tok == "a" || tok == "an") {
            continue;
        }
        tokens.push_back(tok);
    }
    return tokens;
}

std::string join(const std::vector<std::string> &tokens, std::size_t begin, std::size_t end) {
    std::string out;
    for (std::size_t i = begin; i < end; ++i) {
        if (!out.empty()) {
            out.push_back('_');
        }
        out += tokens[i];
    }
    return out;
}

std::optional<Direction> direction_from_token(const std::string &tok) {
    if (tok == "up") return Direction::up;
    if (tok == "down") return Direction::down;
    if (tok == "left") return Direction::left;
    if (tok == "right") return Direction::right;
    return std::nullopt;
}

std::optional<Action> try_parse_sentinel(const std::vector<std::string> &tokens) {
    if (tokens.size() == 2 && tokens[0] == "no" && tokens[1] == "change") {
        return Action{NoChange{}};
    }
    if (tokens.size() == 1 && (tokens[0] == "none" || tokens[0] == "inexplicable")) {
        return tokens[0] == "none" ? Action{NoChange{}} : Action{Inexplicable{}};
    }
    return std::nullopt;
}

std::optional<Action> try_parse_maze(const std::vector<std::string> &tokens) {
    if (tokens.size() == 2 && (tokens[0] == "go" || tokens[0] == "move")) {
        if (auto dir = direction_from_token(tokens[1])) {
            return Action{MazeMove{*dir}};
        }
    }
    return std::nullopt;
}

std::optional<Action> try_parse_fetch(const std::vector<std::string> &tokens) {
    if (tokens.size() == 2 && tokens[0] == "turn") {
        if (tokens[1] == "left") return Action{Turn{Side::left}};
        if (tokens[1] == "right") return Action{Turn{Side::right}};
    }
    if (tokens.size() == 2 && tokens[0] == "move" && tokens[1] == "forward") {
        return Action{MoveForward{}};
    }
    if (tokens.size() == 1 && tokens[0] == "pickup") {
        return Action{PickUpApple{}};
    }
    if (!tokens.empty() && tokens[0] == "pick") {
        // "pick up" / "pick up apple"
        if (tokens.size() >= 2 && tokens[1] == "up" &&
            (tokens.size() == 2 || (tokens.size() == 3 && tokens[2] == "apple"))) {
            return Action{PickUpApple{}};
        }
    }
    if (!tokens.empty() && tokens[0] == "drop") {
        // "drop" / "drop apple" / "drop apple on table"
        if (tokens.size() == 1) return Action{DropAppleOnTable{}};
        if (tokens[1] == "apple" &&
            (tokens.size() == 2 ||
             (tokens.size() == 4 && tokens[2] == "on" && tokens[3] == "table"))) {
            return Action{DropAppleOnTable{}};
        }
    }
    return std::nullopt;
}

std::optional<Action> try_parse_table(const std::vector<std::string> &tokens) {
    // "move <block> to <block|position>", block and position names are 2 tokens.
    if (tokens.size() != 6 || tokens[0] != "move" || tokens[3] != "to") {
        return std::nullopt;
    }
    auto src = block_from_string(join(tokens, 1, 3));
    if (!src) {
        return std::nullopt;
    }
    std::string dst = join(tokens, 4, 6);
    if (auto block = block_from_string(dst)) {
        return Action{MoveBlockToBlock{*src, *block}};
    }
    if (auto slot = slot_from_string(dst)) {
        return Action{MoveBlockToPosition{*src, *slot}};
    }
    return std::nullopt;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::string to_string(EnvKind kind) {
    switch (kind) {
        case EnvKind::maze: return "frozenlake";
        case EnvKind::fetch: return "minibehavior";
        case EnvKind::table: return "languagetable";
    }
    return "?";
}

EnvKind env_kind_from_string(const std::string &name) {
    if (name == "frozenlake" || name == "maze") return EnvKind::maze;
    if (name == "minibehavior" || name == "fetch") return EnvKind::fetch;
    if (name == "languagetable" || name == "table") return EnvKind::table;
    throw ParseError("unknown environment: " + name);
}

std::string to_string(Direction d) {
    switch (d) {
        case Direction::up: return "up";
        case Direction::down: return "down";
        case Direction::left: return "left";
        case Direction::right: return "right";
    }
    return "?";
}

std::string to_string(Side s) { return s == Side::left ? "left" : "right"; }

std::string to_string(BlockId b) { return kBlockNames[static_cast<int>(b)]; }
std::string to_string(SlotId s) { return kSlotNames[static_cast<int>(s)]; }

std::optional<BlockId> block_from_string(const std::string &name) {
    for (int i = 0; i < kNumBlocks; ++i) {
        if (name == kBlockNames[i]) return static_cast<BlockId>(i);
    }
    return std::nullopt;
}

std::optional<SlotId> slot_from_string(const std::string &name) {
    for (int i = 0; i < kNumSlots; ++i) {
        if (name == kSlotNames[i]) return static_cast<SlotId>(i);
    }
    return std::nullopt;
}

const std::array<BlockId, kNumBlocks> &all_blocks() { return kBlocks; }
const std::array<SlotId, kNumSlots> &all_slots() { return kSlots; }

Action parse_action(const std::string &text, EnvKind env_kind) {
    auto tokens = tokenize(text);
    if (auto sentinel = try_parse_sentinel(tokens)) {
        return *sentinel;
    }
    std::optional<Action> parsed;
    switch (env_kind) {
        case EnvKind::maze: parsed = try_parse_maze(tokens); break;
        case EnvKind::fetch: parsed = try_parse_fetch(tokens); break;
        case EnvKind::table: parsed = try_parse_table(tokens); break;
    }
    if (!parsed) {
        throw ParseError("unparseable " + to_string(env_kind) + " action: \"" + text + "\"");
    }
    return *parsed;
}

NormalizedAction normalize_action(const Action &a) {
    return std::visit(
        [](const auto &v) -> NormalizedAction {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, MazeMove>) {
                return {"go", to_string(v.dir), ""};
            } else if constexpr (std::is_same_v<T, Turn>) {
                return {"turn", to_string(v.side), ""};
            } else if constexpr (std::is_same_v<T, MoveForward>) {
                return {"move", "forward", ""};
            } else if constexpr (std::is_same_v<T, PickUpApple>) {
                return {"pick_up", "apple", ""};
            } else if constexpr (std::is_same_v<T, DropAppleOnTable>) {
                return {"drop", "apple", "table"};
            } else if constexpr (std::is_same_v<T, MoveBlockToBlock>) {
                return {"move", to_string(v.src), to_string(v.dst)};
            } else if constexpr (std::is_same_v<T, MoveBlockToPosition>) {
                return {"move", to_string(v.src), to_string(v.dst)};
            } else if constexpr (std::is_same_v<T, NoChange>) {
                return {"none", "", ""};
            } else {
                return {"inexplicable", "", ""};
            }
        },
        a);
}

std::string render_action(const Action &a) {
    return std::visit(
        [](const auto &v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, MazeMove>) {
                return "go " + to_string(v.dir);
            } else if constexpr (std::is_same_v<T, Turn>) {
                return "turn " + to_string(v.side);
            } else if constexpr (std::is_same_v<T, MoveForward>) {
                return "move forward";
            } else if constexpr (std::is_same_v<T, PickUpApple>) {
                return "pick up apple";
            } else if constexpr (std::is_same_v<T, DropAppleOnTable>) {
                return "drop apple on the table";
            } else if constexpr (std::is_same_v<T, MoveBlockToBlock>) {
                return "move " + to_string(v.src) + " to " + to_string(v.dst);
            } else if constexpr (std::is_same_v<T, MoveBlockToPosition>) {
                return "move " + to_string(v.src) + " to " + to_string(v.dst);
            } else if constexpr (std::is_same_v<T, NoChange>) {
                return "no change";
            } else {
                return "inexplicable";
            }
        },
        a);
}

bool actions_equal(const Action &a, const Action &b) { return a == b; }

Goal Goal::target_config(std::map<BlockId, SlotId> mapping) {
    if (mapping.size() != kNumBlocks) {
        throw InvalidConfig("target config must place all 8 blocks");
    }
    std::array<int, kNumSlots> uses{};
    for (const auto &[block, slot] : mapping) {
        if (++uses[static_cast<int>(slot)] > 1) {
            throw InvalidConfig("target config assigns two blocks to " + to_string(slot));
        }
    }
    return {Kind::target_config, std::move(mapping)};
}

void validate(const PlannerConfig &cfg, EnvKind env_kind) {
    if (cfg.beams < 1 || cfg.action_branch < 1 || cfg.dynamics_branch < 1) {
        throw InvalidConfig("beams, action_branch and dynamics_branch must be >= 1");
    }
    if (cfg.horizon < 0) {
        throw InvalidConfig("horizon must be non-negative");
    }
    int max_actions = 0;
    switch (env_kind) {
        case EnvKind::maze: max_actions = 4; break;
        case EnvKind::fetch: max_actions = 5; break;
        case EnvKind::table:
            max_actions = kNumBlocks * (kNumBlocks - 1) + kNumSlots - 1;
            break;
    }
    if (cfg.action_branch > max_actions) {
        throw InvalidConfig("action_branch exceeds the environment's legal-action count");
    }
}

std::string to_string(StreamRole role) {
    switch (role) {
        case StreamRole::policy: return "policy";
        case StreamRole::forward: return "forward";
        case StreamRole::inverse: return "inverse";
        case StreamRole::value: return "value";
        case StreamRole::env: return "env";
        case StreamRole::instance: return "instance";
    }
    return "?";
}

std::uint64_t Rng::next() {
    state_ = splitmix64(state_);
    return state_;
}

std::size_t Rng::index(std::size_t n) {
    // Rejection sampling keeps the draw unbiased and platform-independent.
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t draw;
    do {
        draw = next();
    } while (draw >= limit);
    return static_cast<std::size_t>(draw % n);
}

double Rng::real() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

bool Rng::chance(double p) {
    if (p <= 0) return false;
    if (p >= 1) return true;
    return real() < p;
}

Rng derive_stream(const RngStreamKey &key) {
    std::uint64_t seed = splitmix64(key.master_seed);
    seed = splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(key.episode_index) + 0x1234567ULL));
    seed = splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(key.role) + 0xabcdefULL));
    return Rng(seed);
}

}  // namespace uniplan
