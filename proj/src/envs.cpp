#include "uniplan/envs.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace uniplan {

namespace {

bool in_bounds(int rows, int cols, Cell c) {
    return c.row >= 0 && c.row < rows && c.col >= 0 && c.col < cols;
}

Cell moved(Cell c, Direction d) {
    switch (d) {
        case Direction::up: return {c.row - 1, c.col};
        case Direction::down: return {c.row + 1, c.col};
        case Direction::left: return {c.row, c.col - 1};
        case Direction::right: return {c.row, c.col + 1};
    }
    return c;
}

template <typename T>
void shuffle(std::vector<T> &v, Rng &rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::swap(v[i - 1], v[rng.index(i)]);
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Maze

MazeObs make_maze_obs(const MazeInstance &inst, Cell pos) {
    MazeObs obs;
    obs.pos = pos;
    if (inst.traps.count(pos)) {
        obs.status = MazeStatus::trapped;
    } else if (pos == inst.gift) {
        obs.status = MazeStatus::at_goal;
    } else {
        obs.status = MazeStatus::alive;
    }
    return obs;
}

MazeObs maze_initial_obs(const MazeInstance &inst) { return make_maze_obs(inst, inst.start); }

MazeObs maze_step(const MazeInstance &inst, const MazeObs &obs, const Action &a) {
    const auto *move = std::get_if<MazeMove>(&a);
    if (move == nullptr) {
        throw WrongEnvironmentAction("maze_step expects a maze move, got " + render_action(a));
    }
    if (obs.status != MazeStatus::alive) {
        throw SteppingFromTerminal("maze_step from a trapped/at_goal state");
    }
    Cell next = moved(obs.pos, move->dir);
    if (!in_bounds(inst.rows, inst.cols, next)) {
        next = obs.pos;  // off-grid moves clamp in place
    }
    MazeObs out = make_maze_obs(inst, next);
    out.gift_count = obs.gift_count;
    return out;
}

ValueEstimate maze_value_oracle(const MazeInstance &inst, const MazeObs &obs) {
    if (obs.status == MazeStatus::trapped || obs.gift_count == 0) {
        return {kInfeasibleValue, {}};
    }
    if (obs.pos == inst.gift) {
        return {0, {}};
    }
    // BFS over trap-free cells.
    std::vector<int> dist(static_cast<std::size_t>(inst.rows) * inst.cols, -1);
    auto id = [&](Cell c) { return static_cast<std::size_t>(c.row) * inst.cols + c.col; };
    std::deque<Cell> frontier;
    dist[id(obs.pos)] = 0;
    frontier.push_back(obs.pos);
    while (!frontier.empty()) {
        Cell cur = frontier.front();
        frontier.pop_front();
        for (Direction d : {Direction::left, Direction::down, Direction::right, Direction::up}) {
            Cell next = moved(cur, d);
            if (!in_bounds(inst.rows, inst.cols, next) || inst.traps.count(next) ||
                dist[id(next)] >= 0) {
                continue;
            }
            dist[id(next)] = dist[id(cur)] + 1;
            if (next == inst.gift) {
                return {static_cast<double>(dist[id(next)]), {}};
            }
            frontier.push_back(next);
        }
    }
    return {kInfeasibleValue, {}};
}

// ---------------------------------------------------------------------------
// Fetch

Direction turn_left(Direction d) {
    switch (d) {
        case Direction::up: return Direction::left;
        case Direction::left: return Direction::down;
        case Direction::down: return Direction::right;
        case Direction::right: return Direction::up;
    }
    return d;
}

Direction turn_right(Direction d) {
    switch (d) {
        case Direction::up: return Direction::right;
        case Direction::right: return Direction::down;
        case Direction::down: return Direction::left;
        case Direction::left: return Direction::up;
    }
    return d;
}

Cell cell_ahead(Cell c, Direction facing) { return moved(c, facing); }

FetchObs fetch_initial_obs(const FetchInstance &inst) {
    FetchObs obs;
    obs.agent = inst.agent_start;
    obs.facing = inst.agent_facing;
    obs.apple_cell = inst.apple_start;
    return obs;
}

FetchObs fetch_step(const FetchInstance &inst, const FetchObs &obs, const Action &a) {
    FetchObs out = obs;
    if (const auto *turn = std::get_if<Turn>(&a)) {
        out.facing = turn->side == Side::left ? turn_left(obs.facing) : turn_right(obs.facing);
        return out;
    }
    if (std::get_if<MoveForward>(&a)) {
        Cell ahead = cell_ahead(obs.agent, obs.facing);
        bool blocked = !in_bounds(inst.rows, inst.cols, ahead) || inst.table_cells.count(ahead) ||
                       (obs.apple_cell && *obs.apple_cell == ahead);
        if (!blocked) {
            out.agent = ahead;
        }
        return out;
    }
    if (std::get_if<PickUpApple>(&a)) {
        Cell ahead = cell_ahead(obs.agent, obs.facing);
        if (!obs.carrying && obs.apple_cell && *obs.apple_cell == ahead) {
            out.carrying = true;
            out.apple_cell.reset();
        }
        return out;
    }
    if (std::get_if<DropAppleOnTable>(&a)) {
        Cell ahead = cell_ahead(obs.agent, obs.facing);
        if (obs.carrying && inst.table_cells.count(ahead)) {
            out.carrying = false;
            out.apple_on_table = true;
        }
        return out;
    }
    throw WrongEnvironmentAction("fetch_step expects a fetch action, got " + render_action(a));
}

namespace {

// BFS state: (cell, facing, phase) with phase 0 = apple on the grid,
// 1 = carrying, 2 = apple on the table.
struct FetchGraph {
    const FetchInstance &inst;
    Cell apple;
    int n_cells;

    int id(Cell c, Direction f, int phase) const {
        return ((c.row * inst.cols + c.col) * 4 + static_cast<int>(f)) * 3 + phase;
    }
    int size() const { return n_cells * 4 * 3; }

    std::vector<int> successors(int state) const {
        int phase = state % 3;
        int rest = state / 3;
        auto facing = static_cast<Direction>(rest % 4);
        rest /= 4;
        Cell c{rest / inst.cols, rest % inst.cols};

        std::vector<int> out;
        if (phase == 2) {
            return out;
        }
        out.push_back(id(c, turn_left(facing), phase));
        out.push_back(id(c, turn_right(facing), phase));
        Cell ahead = cell_ahead(c, facing);
        bool blocked = !in_bounds(inst.rows, inst.cols, ahead) ||
                       inst.table_cells.count(ahead) > 0 || (phase == 0 && ahead == apple);
        if (!blocked) {
            out.push_back(id(ahead, facing, phase));
        }
        if (phase == 0 && in_bounds(inst.rows, inst.cols, ahead) && ahead == apple) {
            out.push_back(id(c, facing, 1));
        }
        if (phase == 1 && inst.table_cells.count(ahead)) {
            out.push_back(id(c, facing, 2));
        }
        return out;
    }
};

std::vector<int> bfs(const FetchGraph &graph, const std::vector<int> &sources, bool reverse) {
    std::vector<std::vector<int>> adj(graph.size());
    for (int s = 0; s < graph.size(); ++s) {
        for (int t : graph.successors(s)) {
            if (reverse) {
                adj[t].push_back(s);
            } else {
                adj[s].push_back(t);
            }
        }
    }
    std::vector<int> dist(graph.size(), -1);
    std::deque<int> frontier;
    for (int s : sources) {
        if (dist[s] < 0) {
            dist[s] = 0;
            frontier.push_back(s);
        }
    }
    while (!frontier.empty()) {
        int cur = frontier.front();
        frontier.pop_front();
        for (int next : adj[cur]) {
            if (dist[next] < 0) {
                dist[next] = dist[cur] + 1;
                frontier.push_back(next);
            }
        }
    }
    return dist;
}

}  // namespace

ValueEstimate fetch_value_oracle(const FetchInstance &inst, const FetchObs &obs) {
    if (obs.apple_on_table) {
        return {0, {{"pickup", 0}, {"drop", 0}}};
    }
    if (!obs.carrying && !obs.apple_cell) {
        return {kInfeasibleValue, {}};  // no apple anywhere
    }
    Cell apple = obs.apple_cell.value_or(Cell{-1, -1});
    FetchGraph graph{inst, apple, inst.rows * inst.cols};

    int phase = obs.carrying ? 1 : 0;
    int start = graph.id(obs.agent, obs.facing, phase);
    std::vector<int> d_start = bfs(graph, {start}, false);

    std::vector<int> goals;
    for (int s = 0; s < graph.size(); ++s) {
        if (s % 3 == 2) {
            goals.push_back(s);
        }
    }
    std::vector<int> d_goal = bfs(graph, goals, true);

    int total = d_goal[start];
    if (total < 0) {
        return {kInfeasibleValue, {}};
    }
    int pickup = 0;
    if (phase == 0) {
        // Split at the post-pickup state with the cheapest drop leg; the
        // pickup leg absorbs the rest of the optimal total.
        int drop = total;
        for (int r = 0; r < inst.rows; ++r) {
            for (int c = 0; c < inst.cols; ++c) {
                for (int f = 0; f < 4; ++f) {
                    Cell cell{r, c};
                    auto facing = static_cast<Direction>(f);
                    if (cell_ahead(cell, facing) != apple) {
                        continue;
                    }
                    int s = graph.id(cell, facing, 1);
                    if (d_start[s] >= 0 && d_goal[s] >= 0 && d_start[s] + d_goal[s] == total) {
                        drop = std::min(drop, d_goal[s]);
                    }
                }
            }
        }
        pickup = total - drop;
    }
    return {static_cast<double>(total),
            {{"pickup", static_cast<double>(pickup)}, {"drop", static_cast<double>(total - pickup)}}};
}

// ---------------------------------------------------------------------------
// Table

std::string to_string(SubOffset o) {
    switch (o) {
        case SubOffset::anchor: return "anchor";
        case SubOffset::north: return "north";
        case SubOffset::east: return "east";
        case SubOffset::south: return "south";
        case SubOffset::west: return "west";
    }
    return "?";
}

bool slot_empty(const TableObs &obs, SlotId slot) {
    return blocks_in_slot(obs, slot).empty();
}

std::vector<BlockId> blocks_in_slot(const TableObs &obs, SlotId slot) {
    std::vector<BlockId> out;
    for (const auto &[block, place] : obs.placement) {
        if (place.slot == slot) {
            out.push_back(block);
        }
    }
    return out;
}

std::optional<BlockId> slot_representative(const TableObs &obs, SlotId slot) {
    std::optional<BlockId> fallback;
    for (const auto &[block, place] : obs.placement) {
        if (place.slot != slot) {
            continue;
        }
        if (place.offset == SubOffset::anchor) {
            return block;
        }
        if (!fallback) {
            fallback = block;
        }
    }
    return fallback;
}

TableObs table_step(const TableObs &obs, const Action &a, Rng &rng) {
    static const SubOffset kSides[] = {SubOffset::north, SubOffset::east, SubOffset::south,
                                       SubOffset::west};
    TableObs out = obs;
    if (const auto *move = std::get_if<MoveBlockToBlock>(&a)) {
        if (move->src == move->dst) {
            throw SelfMove("cannot move " + to_string(move->src) + " to itself");
        }
        auto src_it = out.placement.find(move->src);
        auto dst_it = out.placement.find(move->dst);
        if (src_it == out.placement.end() || dst_it == out.placement.end()) {
            return out;  // block absent (hallucinated state): no effect
        }
        src_it->second = {dst_it->second.slot, kSides[rng.index(4)]};
        return out;
    }
    if (const auto *move = std::get_if<MoveBlockToPosition>(&a)) {
        if (!slot_empty(obs, move->dst)) {
            throw DestinationOccupied("slot " + to_string(move->dst) + " is not empty");
        }
        auto src_it = out.placement.find(move->src);
        if (src_it == out.placement.end()) {
            return out;
        }
        src_it->second = {move->dst, SubOffset::anchor};
        return out;
    }
    throw WrongEnvironmentAction("table_step expects a table action, got " + render_action(a));
}

bool table_valid_next(const TableObs &obs, const Action &a, const TableObs &candidate) {
    if (candidate.placement.size() != kNumBlocks || candidate.ghost.has_value()) {
        return false;
    }
    BlockId src;
    SlotId expected_slot;
    bool anchored;
    if (const auto *move = std::get_if<MoveBlockToBlock>(&a)) {
        if (move->src == move->dst) {
            return false;
        }
        auto dst_it = obs.placement.find(move->dst);
        if (dst_it == obs.placement.end()) {
            return false;
        }
        src = move->src;
        expected_slot = dst_it->second.slot;
        anchored = false;
    } else if (const auto *place = std::get_if<MoveBlockToPosition>(&a)) {
        if (!slot_empty(obs, place->dst)) {
            return false;
        }
        src = place->src;
        expected_slot = place->dst;
        anchored = true;
    } else {
        return false;
    }
    if (!obs.placement.count(src)) {
        return false;
    }
    for (BlockId b : all_blocks()) {
        auto cand_it = candidate.placement.find(b);
        if (cand_it == candidate.placement.end()) {
            return false;
        }
        if (b == src) {
            if (cand_it->second.slot != expected_slot) {
                return false;
            }
            if (anchored ? cand_it->second.offset != SubOffset::anchor
                         : cand_it->second.offset == SubOffset::anchor) {
                return false;
            }
        } else if (cand_it->second != obs.placement.at(b)) {
            return false;  // frame preservation
        }
    }
    return true;
}

ValueEstimate table_value_oracle(const TableObs &obs, const Goal &goal) {
    if (goal.kind != Goal::Kind::target_config) {
        throw InvalidConfig("table value oracle needs a target configuration goal");
    }
    int misplaced = 0;
    for (const auto &[block, slot] : goal.target) {
        auto it = obs.placement.find(block);
        if (it == obs.placement.end() || it->second.slot != slot) {
            ++misplaced;
        }
    }
    return {std::min<double>(misplaced, 10.0), {}};
}

// ---------------------------------------------------------------------------
// Facade

EnvKind env_kind_of(const Instance &inst) {
    return static_cast<EnvKind>(inst.index());
}

EnvKind env_kind_of(const Observation &obs) {
    return static_cast<EnvKind>(obs.index());
}

Observation initial_obs(const Instance &inst) {
    return std::visit(
        [](const auto &i) -> Observation {
            using T = std::decay_t<decltype(i)>;
            if constexpr (std::is_same_v<T, MazeInstance>) {
                return maze_initial_obs(i);
            } else if constexpr (std::is_same_v<T, FetchInstance>) {
                return fetch_initial_obs(i);
            } else {
                return i.initial;
            }
        },
        inst);
}

Goal goal_of(const Instance &inst) {
    switch (env_kind_of(inst)) {
        case EnvKind::maze: return Goal::reach_gift();
        case EnvKind::fetch: return Goal::apple_on_table();
        case EnvKind::table: return Goal::target_config(std::get<TableInstance>(inst).goal);
    }
    return Goal::reach_gift();
}

Observation env_step(const Instance &inst, const Observation &obs, const Action &a, Rng &rng) {
    switch (env_kind_of(inst)) {
        case EnvKind::maze:
            return maze_step(std::get<MazeInstance>(inst), std::get<MazeObs>(obs), a);
        case EnvKind::fetch:
            return fetch_step(std::get<FetchInstance>(inst), std::get<FetchObs>(obs), a);
        case EnvKind::table:
            return table_step(std::get<TableObs>(obs), a, rng);
    }
    throw WrongEnvironmentAction("unknown environment");
}

bool valid_successor(const Instance &inst, const Observation &obs, const Action &a,
                     const Observation &candidate) {
    switch (env_kind_of(inst)) {
        case EnvKind::maze: {
            const auto &cand = std::get<MazeObs>(candidate);
            return cand == maze_step(std::get<MazeInstance>(inst), std::get<MazeObs>(obs), a);
        }
        case EnvKind::fetch: {
            const auto &cand = std::get<FetchObs>(candidate);
            return cand == fetch_step(std::get<FetchInstance>(inst), std::get<FetchObs>(obs), a);
        }
        case EnvKind::table:
            return table_valid_next(std::get<TableObs>(obs), a, std::get<TableObs>(candidate));
    }
    return false;
}

ValueEstimate value_oracle(const Instance &inst, const Observation &obs, const Goal &goal) {
    switch (env_kind_of(inst)) {
        case EnvKind::maze:
            return maze_value_oracle(std::get<MazeInstance>(inst), std::get<MazeObs>(obs));
        case EnvKind::fetch:
            return fetch_value_oracle(std::get<FetchInstance>(inst), std::get<FetchObs>(obs));
        case EnvKind::table:
            return table_value_oracle(std::get<TableObs>(obs), goal);
    }
    return {kInfeasibleValue, {}};
}

std::vector<Action> legal_actions(const Instance &inst, const Observation &obs) {
    switch (env_kind_of(inst)) {
        case EnvKind::maze:
            return {Action{MazeMove{Direction::left}}, Action{MazeMove{Direction::down}},
                    Action{MazeMove{Direction::right}}, Action{MazeMove{Direction::up}}};
        case EnvKind::fetch:
            return {Action{Turn{Side::left}}, Action{Turn{Side::right}}, Action{MoveForward{}},
                    Action{PickUpApple{}}, Action{DropAppleOnTable{}}};
        case EnvKind::table: {
            const auto &state = std::get<TableObs>(obs);
            std::vector<Action> out;
            for (BlockId src : all_blocks()) {
                if (!state.placement.count(src)) {
                    continue;
                }
                for (BlockId dst : all_blocks()) {
                    if (dst != src && state.placement.count(dst)) {
                        out.push_back(MoveBlockToBlock{src, dst});
                    }
                }
            }
            for (BlockId src : all_blocks()) {
                if (!state.placement.count(src)) {
                    continue;
                }
                for (SlotId slot : all_slots()) {
                    if (slot_empty(state, slot)) {
                        out.push_back(MoveBlockToPosition{src, slot});
                    }
                }
            }
            return out;
        }
    }
    return {};
}

std::vector<Action> action_alphabet(EnvKind kind) {
    switch (kind) {
        case EnvKind::maze:
            return {Action{MazeMove{Direction::left}}, Action{MazeMove{Direction::down}},
                    Action{MazeMove{Direction::right}}, Action{MazeMove{Direction::up}}};
        case EnvKind::fetch:
            return {Action{Turn{Side::left}}, Action{Turn{Side::right}}, Action{MoveForward{}},
                    Action{PickUpApple{}}, Action{DropAppleOnTable{}}};
        case EnvKind::table: {
            std::vector<Action> out;
            for (BlockId src : all_blocks()) {
                for (BlockId dst : all_blocks()) {
                    if (dst != src) {
                        out.push_back(MoveBlockToBlock{src, dst});
                    }
                }
            }
            for (BlockId src : all_blocks()) {
                for (SlotId slot : all_slots()) {
                    out.push_back(MoveBlockToPosition{src, slot});
                }
            }
            return out;
        }
    }
    return {};
}

bool goal_reached(const Instance &inst, const Observation &obs, const Goal &goal) {
    switch (env_kind_of(inst)) {
        case EnvKind::maze:
            return std::get<MazeObs>(obs).status == MazeStatus::at_goal;
        case EnvKind::fetch:
            return std::get<FetchObs>(obs).apple_on_table;
        case EnvKind::table: {
            const auto &state = std::get<TableObs>(obs);
            for (const auto &[block, slot] : goal.target) {
                auto it = state.placement.find(block);
                if (it == state.placement.end() || it->second.slot != slot) {
                    return false;
                }
            }
            return true;
        }
    }
    return false;
}

bool env_terminal(const Instance &inst, const Observation &obs) {
    switch (env_kind_of(inst)) {
        case EnvKind::maze:
            return std::get<MazeObs>(obs).status != MazeStatus::alive;
        case EnvKind::fetch:
            return std::get<FetchObs>(obs).apple_on_table;
        case EnvKind::table:
            return false;
    }
    return false;
}

std::string canonical_key(const Observation &obs) {
    std::ostringstream key;
    std::visit(
        [&key](const auto &o) {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, MazeObs>) {
                key << "maze:" << o.pos.row << ',' << o.pos.col << ":s" << static_cast<int>(o.status)
                    << ":g" << o.gift_count;
            } else if constexpr (std::is_same_v<T, FetchObs>) {
                key << "fetch:" << o.agent.row << ',' << o.agent.col << ':'
                    << to_string(o.facing) << ":c" << o.carrying << ":t" << o.apple_on_table
                    << ":n" << o.apple_count << ":a";
                if (o.apple_cell) {
                    key << o.apple_cell->row << ',' << o.apple_cell->col;
                } else {
                    key << '-';
                }
            } else {
                key << "table:";
                for (const auto &[block, place] : o.placement) {
                    key << to_string(block) << '@' << to_string(place.slot) << '+'
                        << to_string(place.offset) << ';';
                }
                if (o.ghost) {
                    key << "ghost=" << to_string(o.ghost->first) << '@'
                        << to_string(o.ghost->second.slot) << '+' << to_string(o.ghost->second.offset);
                }
            }
        },
        obs);
    return key.str();
}

// ---------------------------------------------------------------------------
// Instance generation

namespace {

std::vector<Cell> all_cells(int rows, int cols) {
    std::vector<Cell> cells;
    cells.reserve(static_cast<std::size_t>(rows) * cols);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            cells.push_back({r, c});
        }
    }
    return cells;
}

int sample_range(int lo, int hi, Rng &rng) {
    if (hi <= lo) {
        return lo;
    }
    return lo + static_cast<int>(rng.index(static_cast<std::size_t>(hi - lo + 1)));
}

std::optional<Instance> try_maze(const MazeGenParams &p, Rng &rng) {
    int rows = sample_range(p.min_rows, p.max_rows, rng);
    int cols = sample_range(p.min_cols, p.max_cols, rng);
    if (rows * cols < 2 + p.traps) {
        return std::nullopt;
    }
    auto cells = all_cells(rows, cols);
    shuffle(cells, rng);
    MazeInstance inst;
    inst.rows = rows;
    inst.cols = cols;
    inst.start = cells[0];
    inst.gift = cells[1];
    inst.traps.insert(cells.begin() + 2, cells.begin() + 2 + p.traps);
    if (maze_value_oracle(inst, maze_initial_obs(inst)).infeasible()) {
        return std::nullopt;
    }
    return Instance{inst};
}

std::optional<Instance> try_fetch(const FetchGenParams &p, Rng &rng) {
    int rows = sample_range(p.min_rows, p.max_rows, rng);
    int cols = sample_range(p.min_cols, p.max_cols, rng);
    if (p.table_cells > cols || rows * cols < p.table_cells + 2) {
        return std::nullopt;
    }
    FetchInstance inst;
    inst.rows = rows;
    inst.cols = cols;
    int table_row = static_cast<int>(rng.index(rows));
    int table_col = static_cast<int>(rng.index(cols - p.table_cells + 1));
    for (int i = 0; i < p.table_cells; ++i) {
        inst.table_cells.insert({table_row, table_col + i});
    }
    std::vector<Cell> open;
    for (Cell c : all_cells(rows, cols)) {
        if (!inst.table_cells.count(c)) {
            open.push_back(c);
        }
    }
    if (open.size() < 2) {
        return std::nullopt;
    }
    shuffle(open, rng);
    inst.apple_start = open[0];
    inst.agent_start = open[1];
    inst.agent_facing = static_cast<Direction>(rng.index(4));
    if (fetch_value_oracle(inst, fetch_initial_obs(inst)).infeasible()) {
        return std::nullopt;
    }
    return Instance{inst};
}

std::optional<Instance> try_table(const TableGenParams &p, Rng &rng) {
    TableInstance inst;
    std::vector<SlotId> slots(all_slots().begin(), all_slots().end());
    shuffle(slots, rng);
    for (int i = 0; i < kNumBlocks; ++i) {
        inst.goal[all_blocks()[i]] = slots[i];
    }
    for (const auto &[block, slot] : inst.goal) {
        inst.initial.placement[block] = {slot, SubOffset::anchor};
    }
    int misplaced = sample_range(p.min_misplaced, p.max_misplaced, rng);
    misplaced = std::clamp(misplaced, 0, kNumBlocks);
    std::vector<BlockId> blocks(all_blocks().begin(), all_blocks().end());
    shuffle(blocks, rng);
    static const SubOffset kSides[] = {SubOffset::north, SubOffset::east, SubOffset::south,
                                       SubOffset::west};
    for (int i = 0; i < misplaced; ++i) {
        BlockId block = blocks[i];
        SlotId goal_slot = inst.goal.at(block);
        SlotId slot;
        do {
            slot = static_cast<SlotId>(rng.index(kNumSlots));
        } while (slot == goal_slot);
        // Vacate first so occupancy reflects the other blocks only.
        inst.initial.placement.erase(block);
        SubOffset off = slot_empty(inst.initial, slot) ? SubOffset::anchor
                                                       : kSides[rng.index(4)];
        inst.initial.placement[block] = {slot, off};
    }
    return Instance{inst};
}

}  // namespace

Instance random_instance(const GenParams &params, Rng &rng, int max_retries) {
    for (int attempt = 0; attempt < max_retries; ++attempt) {
        std::optional<Instance> inst = std::visit(
            [&rng](const auto &p) -> std::optional<Instance> {
                using T = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<T, MazeGenParams>) {
                    return try_maze(p, rng);
                } else if constexpr (std::is_same_v<T, FetchGenParams>) {
                    return try_fetch(p, rng);
                } else {
                    return try_table(p, rng);
                }
            },
            params);
        if (inst) {
            return *inst;
        }
    }
    throw GenerationExhausted("no solvable instance found within the retry limit");
}

}  // namespace uniplan
