#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace uniplan {

enum class EnvKind { maze, fetch, table };

std::string to_string(EnvKind kind);
EnvKind env_kind_from_string(const std::string &name);

enum class Direction { up, down, left, right };
enum class Side { left, right };

std::string to_string(Direction d);
std::string to_string(Side s);

// Language Table identifiers, in canonical order.
enum class BlockId {
    blue_moon,
    blue_cube,
    green_star,
    green_cube,
    yellow_star,
    yellow_pentagon,
    red_moon,
    red_pentagon,
};
enum class SlotId {
    top_center,
    top_left,
    top_right,
    center_left,
    center_right,
    bottom_center,
    bottom_left,
    bottom_right,
};

inline constexpr int kNumBlocks = 8;
inline constexpr int kNumSlots = 8;

std::string to_string(BlockId b);
std::string to_string(SlotId s);
std::optional<BlockId> block_from_string(const std::string &name);
std::optional<SlotId> slot_from_string(const std::string &name);

const std::array<BlockId, kNumBlocks> &all_blocks();
const std::array<SlotId, kNumSlots> &all_slots();

// ---------------------------------------------------------------------------
// Actions

struct MazeMove {
    Direction dir;
    bool operator==(const MazeMove &) const = default;
};
struct Turn {
    Side side;
    bool operator==(const Turn &) const = default;
};
struct MoveForward {
    bool operator==(const MoveForward &) const = default;
};
struct PickUpApple {
    bool operator==(const PickUpApple &) const = default;
};
struct DropAppleOnTable {
    bool operator==(const DropAppleOnTable &) const = default;
};
struct MoveBlockToBlock {
    BlockId src;
    BlockId dst;
    bool operator==(const MoveBlockToBlock &) const = default;
};
struct MoveBlockToPosition {
    BlockId src;
    SlotId dst;
    bool operator==(const MoveBlockToPosition &) const = default;
};
// Inverse-inference sentinels; never issued by a policy.
struct NoChange {
    bool operator==(const NoChange &) const = default;
};
struct Inexplicable {
    bool operator==(const Inexplicable &) const = default;
};

using Action = std::variant<MazeMove, Turn, MoveForward, PickUpApple, DropAppleOnTable,
                            MoveBlockToBlock, MoveBlockToPosition, NoChange, Inexplicable>;

struct NormalizedAction {
    std::string verb;
    std::string object;
    std::string target;
    bool operator==(const NormalizedAction &) const = default;
    auto operator<=>(const NormalizedAction &) const = default;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parses the textual form of an action for the given environment. Tolerant of
// case, articles, and underscores-vs-spaces. Throws ParseError otherwise.
Action parse_action(const std::string &text, EnvKind env_kind);

NormalizedAction normalize_action(const Action &a);

// Canonical lowercase rendering used in logs, e.g. "move blue_moon to bottom_center".
std::string render_action(const Action &a);

bool actions_equal(const Action &a, const Action &b);

// ---------------------------------------------------------------------------
// Goals

struct Goal {
    enum class Kind { reach_gift, apple_on_table, target_config };
    Kind kind = Kind::reach_gift;
    std::map<BlockId, SlotId> target;  // target_config only; one slot per block

    static Goal reach_gift() { return {Kind::reach_gift, {}}; }
    static Goal apple_on_table() { return {Kind::apple_on_table, {}}; }
    static Goal target_config(std::map<BlockId, SlotId> mapping);
};

// ---------------------------------------------------------------------------
// Planner configuration

struct PlannerConfig {
    int beams = 2;
    int action_branch = 4;
    int dynamics_branch = 1;
    int horizon = 12;
    bool dedupe = false;
    bool filtering_enabled = true;
};

struct InvalidConfig : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void validate(const PlannerConfig &cfg, EnvKind env_kind);

// ---------------------------------------------------------------------------
// Value estimates

// Steps-to-go estimate; 100 is the universal infeasibility sentinel.
inline constexpr double kInfeasibleValue = 100.0;

struct ValueEstimate {
    double steps_remaining = 0;
    std::map<std::string, double> components;  // optional, e.g. pickup/drop split

    bool infeasible() const { return steps_remaining >= kInfeasibleValue; }
};

// ---------------------------------------------------------------------------
// Deterministic RNG streams

enum class StreamRole { policy, forward, inverse, value, env, instance };

std::string to_string(StreamRole role);

struct RngStreamKey {
    std::uint64_t master_seed = 0;
    std::int64_t episode_index = 0;
    StreamRole role = StreamRole::policy;
};

// Counter-based splitmix64 generator; identical keys yield identical streams,
// distinct keys yield independent streams.
class Rng {
public:
    Rng() = default;
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next();

    // Uniform over [0, n); n >= 1.
    std::size_t index(std::size_t n);
    // Uniform over [0, 1).
    double real();
    // True with probability p.
    bool chance(double p);

private:
    std::uint64_t state_ = 0;
};

Rng derive_stream(const RngStreamKey &key);

}  // namespace uniplan
