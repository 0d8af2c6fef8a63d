#pragma once

#include <optional>
#include <set>
#include <utility>

#include "uniplan/core.hpp"

namespace uniplan {

struct Cell {
    int row = 0;
    int col = 0;
    bool operator==(const Cell &) const = default;
    auto operator<=>(const Cell &) const = default;
};

struct WrongEnvironmentAction : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SteppingFromTerminal : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DestinationOccupied : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SelfMove : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct GenerationExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// FrozenLake maze

struct MazeInstance {
    int rows = 3;
    int cols = 3;
    std::set<Cell> traps;
    Cell start;
    Cell gift;
};

enum class MazeStatus { alive, trapped, at_goal };

struct MazeObs {
    Cell pos;
    MazeStatus status = MazeStatus::alive;
    int gift_count = 1;  // != 1 only in hallucinated predictions
    bool operator==(const MazeObs &) const = default;
};

MazeObs make_maze_obs(const MazeInstance &inst, Cell pos);
MazeObs maze_initial_obs(const MazeInstance &inst);
MazeObs maze_step(const MazeInstance &inst, const MazeObs &obs, const Action &a);
ValueEstimate maze_value_oracle(const MazeInstance &inst, const MazeObs &obs);

// ---------------------------------------------------------------------------
// Mini-BEHAVIOR fetch

struct FetchInstance {
    int rows = 4;
    int cols = 4;
    std::set<Cell> table_cells;
    Cell apple_start;
    Cell agent_start;
    Direction agent_facing = Direction::up;
};

struct FetchObs {
    Cell agent;
    Direction facing = Direction::up;
    bool carrying = false;
    std::optional<Cell> apple_cell;
    bool apple_on_table = false;
    int apple_count = 1;  // != 1 only in hallucinated predictions
    bool operator==(const FetchObs &) const = default;
};

Direction turn_left(Direction d);
Direction turn_right(Direction d);
Cell cell_ahead(Cell c, Direction facing);

FetchObs fetch_initial_obs(const FetchInstance &inst);
FetchObs fetch_step(const FetchInstance &inst, const FetchObs &obs, const Action &a);
ValueEstimate fetch_value_oracle(const FetchInstance &inst, const FetchObs &obs);

// ---------------------------------------------------------------------------
// Language Table

enum class SubOffset { anchor, north, east, south, west };

std::string to_string(SubOffset o);

struct Placement {
    SlotId slot = SlotId::top_center;
    SubOffset offset = SubOffset::anchor;
    bool operator==(const Placement &) const = default;
    auto operator<=>(const Placement &) const = default;
};

struct TableObs {
    std::map<BlockId, Placement> placement;
    // Hallucination-only anomaly: an extra copy of a block.
    std::optional<std::pair<BlockId, Placement>> ghost;
    bool operator==(const TableObs &) const = default;
};

struct TableInstance {
    TableObs initial;
    std::map<BlockId, SlotId> goal;
};

bool slot_empty(const TableObs &obs, SlotId slot);
std::vector<BlockId> blocks_in_slot(const TableObs &obs, SlotId slot);
// The anchor block of a slot if any, else the lowest-id occupant.
std::optional<BlockId> slot_representative(const TableObs &obs, SlotId slot);

TableObs table_step(const TableObs &obs, const Action &a, Rng &rng);
bool table_valid_next(const TableObs &obs, const Action &a, const TableObs &candidate);
ValueEstimate table_value_oracle(const TableObs &obs, const Goal &goal);

// ---------------------------------------------------------------------------
// Generic facade

using Observation = std::variant<MazeObs, FetchObs, TableObs>;
using Instance = std::variant<MazeInstance, FetchInstance, TableInstance>;

EnvKind env_kind_of(const Instance &inst);
EnvKind env_kind_of(const Observation &obs);

Observation initial_obs(const Instance &inst);
Goal goal_of(const Instance &inst);

// Ground-truth transition; table transitions draw the sub-offset from rng.
Observation env_step(const Instance &inst, const Observation &obs, const Action &a, Rng &rng);

// Whether candidate is a ground-truth-reachable successor of (obs, a).
bool valid_successor(const Instance &inst, const Observation &obs, const Action &a,
                     const Observation &candidate);

ValueEstimate value_oracle(const Instance &inst, const Observation &obs, const Goal &goal);

std::vector<Action> legal_actions(const Instance &inst, const Observation &obs);

// Full per-environment action alphabet; for the table this ignores occupancy.
std::vector<Action> action_alphabet(EnvKind kind);

bool goal_reached(const Instance &inst, const Observation &obs, const Goal &goal);

// True when no further ground-truth step is possible (maze trapped/at_goal,
// fetch apple already on the table).
bool env_terminal(const Instance &inst, const Observation &obs);

// Stable identity string for dedupe and logs.
std::string canonical_key(const Observation &obs);

// ---------------------------------------------------------------------------
// Random instances

struct MazeGenParams {
    int min_rows = 4, max_rows = 4;
    int min_cols = 4, max_cols = 4;
    int traps = 3;
};
struct FetchGenParams {
    int min_rows = 4, max_rows = 4;
    int min_cols = 4, max_cols = 4;
    int table_cells = 1;
};
struct TableGenParams {
    int min_misplaced = 2, max_misplaced = 4;
};

using GenParams = std::variant<MazeGenParams, FetchGenParams, TableGenParams>;

inline constexpr int kDefaultGenRetries = 1000;

Instance random_instance(const GenParams &params, Rng &rng, int max_retries = kDefaultGenRetries);

}  // namespace uniplan
