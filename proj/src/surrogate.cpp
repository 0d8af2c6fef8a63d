#include "uniplan/surrogate.hpp"

#include <algorithm>
#include <cmath>

namespace uniplan {

namespace {

const SubOffset kSides[] = {SubOffset::north, SubOffset::east, SubOffset::south, SubOffset::west};

MazeObs maze_wrong_effect(const MazeInstance &inst, const MazeObs &obs, const MazeMove &move,
                          const MazeObs &truth, Rng &rng) {
    Direction dirs[3];
    int n = 0;
    for (Direction d : {Direction::left, Direction::down, Direction::right, Direction::up}) {
        if (d != move.dir) {
            dirs[n++] = d;
        }
    }
    std::size_t start = rng.index(3);
    for (int i = 0; i < 3; ++i) {
        MazeObs cand = maze_step(inst, obs, Action{MazeMove{dirs[(start + i) % 3]}});
        if (cand.pos != truth.pos) {
            return cand;
        }
    }
    // All moves clamp to the same cell; fall back to any other cell.
    for (int r = 0; r < inst.rows; ++r) {
        for (int c = 0; c < inst.cols; ++c) {
            if (Cell{r, c} != truth.pos) {
                return make_maze_obs(inst, {r, c});
            }
        }
    }
    return truth;
}

FetchObs fetch_wrong_effect(const FetchInstance &inst, const FetchObs &obs, const FetchObs &truth,
                            Rng &rng) {
    std::vector<FetchObs> candidates;
    auto consider = [&](const FetchObs &cand) {
        if (cand == truth) {
            return;
        }
        if (std::find(candidates.begin(), candidates.end(), cand) == candidates.end()) {
            candidates.push_back(cand);
        }
    };
    for (const Action &a : action_alphabet(EnvKind::fetch)) {
        consider(fetch_step(inst, obs, a));
    }
    consider(obs);
    if (!obs.carrying && obs.apple_cell) {
        FetchObs false_pickup = obs;
        false_pickup.carrying = true;
        false_pickup.apple_cell.reset();
        consider(false_pickup);
    }
    if (candidates.empty()) {
        return truth;  // unreachable in any non-degenerate grid
    }
    return candidates[rng.index(candidates.size())];
}

TableObs table_move_to_slot(const TableObs &obs, BlockId block, SlotId slot, Rng &rng) {
    TableObs out = obs;
    out.placement.erase(block);
    SubOffset off = slot_empty(out, slot) ? SubOffset::anchor : kSides[rng.index(4)];
    out.placement[block] = {slot, off};
    return out;
}

TableObs table_wrong_effect(const TableObs &obs, const Action &a, Rng &rng) {
    SlotId issued_slot;
    BlockId src;
    if (const auto *move = std::get_if<MoveBlockToBlock>(&a)) {
        src = move->src;
        issued_slot = obs.placement.at(move->dst).slot;
    } else {
        const auto &place = std::get<MoveBlockToPosition>(a);
        src = place.src;
        issued_slot = place.dst;
    }
    if (rng.chance(0.5)) {
        // Wrong source block.
        std::vector<BlockId> others;
        for (const auto &[block, place] : obs.placement) {
            if (block != src) {
                others.push_back(block);
            }
        }
        if (!others.empty()) {
            BlockId wrong_src = others[rng.index(others.size())];
            TableObs cand = table_move_to_slot(obs, wrong_src, issued_slot, rng);
            if (!table_valid_next(obs, a, cand)) {
                return cand;
            }
        }
    }
    // Wrong destination slot; any slot other than the issued one is invalid.
    SlotId wrong_slot;
    do {
        wrong_slot = static_cast<SlotId>(rng.index(kNumSlots));
    } while (wrong_slot == issued_slot);
    return table_move_to_slot(obs, src, wrong_slot, rng);
}

Observation apply_delete(const Observation &valid, Rng &rng) {
    return std::visit(
        [&rng](auto o) -> Observation {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, MazeObs>) {
                o.gift_count = 0;
            } else if constexpr (std::is_same_v<T, FetchObs>) {
                o.apple_count = 0;
                o.apple_cell.reset();
                o.carrying = false;
                o.apple_on_table = false;
            } else {
                std::vector<BlockId> present;
                for (const auto &[block, place] : o.placement) {
                    present.push_back(block);
                }
                if (!present.empty()) {
                    o.placement.erase(present[rng.index(present.size())]);
                }
            }
            return o;
        },
        valid);
}

Observation apply_duplicate(const Observation &valid, Rng &rng) {
    return std::visit(
        [&rng](auto o) -> Observation {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, MazeObs>) {
                o.gift_count = 2;
            } else if constexpr (std::is_same_v<T, FetchObs>) {
                o.apple_count = 2;
            } else {
                std::vector<BlockId> present;
                for (const auto &[block, place] : o.placement) {
                    present.push_back(block);
                }
                if (!present.empty()) {
                    BlockId block = present[rng.index(present.size())];
                    auto slot = static_cast<SlotId>(rng.index(kNumSlots));
                    auto off = static_cast<SubOffset>(rng.index(5));
                    o.ghost = {block, Placement{slot, off}};
                }
            }
            return o;
        },
        valid);
}

Action maze_inverse(const MazeInstance &inst, const MazeObs &obs, const MazeObs &next) {
    if (next.pos == obs.pos) {
        return NoChange{};
    }
    if (obs.status != MazeStatus::alive) {
        return Inexplicable{};
    }
    for (Direction d : {Direction::left, Direction::down, Direction::right, Direction::up}) {
        if (maze_step(inst, obs, Action{MazeMove{d}}).pos == next.pos) {
            return MazeMove{d};
        }
    }
    return Inexplicable{};
}

// Count anomalies are deliberately invisible to the inverse model; the count
// check is the mechanism that catches them.
FetchObs fetch_core(FetchObs o) {
    o.apple_count = 1;
    return o;
}

Action fetch_inverse(const FetchInstance &inst, const FetchObs &obs, const FetchObs &next) {
    FetchObs next_core = fetch_core(next);
    if (next_core == fetch_core(obs)) {
        return NoChange{};
    }
    for (const Action &a : action_alphabet(EnvKind::fetch)) {
        if (fetch_core(fetch_step(inst, obs, a)) == next_core) {
            return a;
        }
    }
    return Inexplicable{};
}

Action table_inverse(const TableObs &obs, const TableObs &next) {
    if (next.ghost || next.placement.size() != obs.placement.size()) {
        return Inexplicable{};
    }
    std::vector<BlockId> changed;
    for (const auto &[block, place] : obs.placement) {
        auto it = next.placement.find(block);
        if (it == next.placement.end()) {
            return Inexplicable{};
        }
        if (it->second != place) {
            changed.push_back(block);
        }
    }
    if (changed.empty()) {
        return NoChange{};
    }
    if (changed.size() > 1) {
        return Inexplicable{};
    }
    BlockId src = changed[0];
    Placement dest = next.placement.at(src);
    if (dest.offset == SubOffset::anchor) {
        if (slot_empty(obs, dest.slot)) {
            return MoveBlockToPosition{src, dest.slot};
        }
        return Inexplicable{};
    }
    // Moved next to some block: name the slot's anchor (or lowest occupant).
    std::optional<BlockId> target;
    for (const auto &[block, place] : obs.placement) {
        if (block == src || place.slot != dest.slot) {
            continue;
        }
        if (place.offset == SubOffset::anchor) {
            target = block;
            break;
        }
        if (!target) {
            target = block;
        }
    }
    if (!target) {
        return Inexplicable{};
    }
    return MoveBlockToBlock{src, *target};
}

}  // namespace

std::string to_string(ErrorCategory c) {
    switch (c) {
        case ErrorCategory::valid: return "valid";
        case ErrorCategory::wrong_effect: return "wrong_effect";
        case ErrorCategory::del: return "delete";
        case ErrorCategory::dup: return "duplicate";
    }
    return "?";
}

void validate(const NoiseProfile &noise) {
    auto in_unit = [](double p) { return p >= 0 && p <= 1; };
    if (!in_unit(noise.p_wrong_effect) || !in_unit(noise.p_delete) || !in_unit(noise.p_duplicate) ||
        !in_unit(noise.q_inverse) || !in_unit(noise.counter_error) || !in_unit(noise.value_noise.p)) {
        throw InvalidConfig("noise probabilities must lie in [0,1]");
    }
    if (noise.p_wrong_effect + noise.p_delete + noise.p_duplicate > 1 + 1e-12) {
        throw InvalidConfig("forward error probabilities must sum to at most 1");
    }
    if (noise.value_noise.k < 0) {
        throw InvalidConfig("value noise magnitude must be non-negative");
    }
}

ForwardPrediction forward_predict_detail(const Instance &inst, const Observation &obs,
                                         const Action &a, const NoiseProfile &noise, Rng &rng) {
    double r = rng.real();
    ErrorCategory category;
    if (r < noise.p_wrong_effect) {
        category = ErrorCategory::wrong_effect;
    } else if (r < noise.p_wrong_effect + noise.p_delete) {
        category = ErrorCategory::del;
    } else if (r < noise.p_wrong_effect + noise.p_delete + noise.p_duplicate) {
        category = ErrorCategory::dup;
    } else {
        category = ErrorCategory::valid;
    }

    if (category == ErrorCategory::wrong_effect) {
        switch (env_kind_of(inst)) {
            case EnvKind::maze: {
                const auto &mi = std::get<MazeInstance>(inst);
                const auto &mo = std::get<MazeObs>(obs);
                MazeObs truth = maze_step(mi, mo, a);
                return {maze_wrong_effect(mi, mo, std::get<MazeMove>(a), truth, rng), category};
            }
            case EnvKind::fetch: {
                const auto &fi = std::get<FetchInstance>(inst);
                const auto &fo = std::get<FetchObs>(obs);
                return {fetch_wrong_effect(fi, fo, fetch_step(fi, fo, a), rng), category};
            }
            case EnvKind::table:
                return {table_wrong_effect(std::get<TableObs>(obs), a, rng), category};
        }
    }

    Observation valid = env_step(inst, obs, a, rng);
    if (category == ErrorCategory::del) {
        return {apply_delete(valid, rng), category};
    }
    if (category == ErrorCategory::dup) {
        return {apply_duplicate(valid, rng), category};
    }
    return {valid, ErrorCategory::valid};
}

Observation forward_predict(const Instance &inst, const Observation &obs, const Action &a,
                            const NoiseProfile &noise, Rng &rng) {
    return forward_predict_detail(inst, obs, a, noise, rng).obs;
}

Action inverse_oracle(const Instance &inst, const Observation &obs, const Observation &next_obs) {
    switch (env_kind_of(inst)) {
        case EnvKind::maze:
            return maze_inverse(std::get<MazeInstance>(inst), std::get<MazeObs>(obs),
                                std::get<MazeObs>(next_obs));
        case EnvKind::fetch:
            return fetch_inverse(std::get<FetchInstance>(inst), std::get<FetchObs>(obs),
                                 std::get<FetchObs>(next_obs));
        case EnvKind::table:
            return table_inverse(std::get<TableObs>(obs), std::get<TableObs>(next_obs));
    }
    return Inexplicable{};
}

Action inverse_infer(const Instance &inst, const Observation &obs, const Observation &next_obs,
                     const NoiseProfile &noise, Rng &rng) {
    Action exact = inverse_oracle(inst, obs, next_obs);
    if (rng.chance(noise.q_inverse)) {
        return exact;
    }
    const auto alphabet = action_alphabet(env_kind_of(inst));
    for (int attempt = 0; attempt < 64; ++attempt) {
        Action wrong = alphabet[rng.index(alphabet.size())];
        if (!actions_equal(wrong, exact)) {
            return wrong;
        }
    }
    return exact;
}

std::vector<Action> propose_actions(const Instance &inst, const Observation &obs, const Goal &goal,
                                    int action_branch, const PolicyParams &params, Rng &rng) {
    std::vector<Action> remaining = legal_actions(inst, obs);
    if (action_branch > static_cast<int>(remaining.size())) {
        throw InsufficientActions("action_branch exceeds the legal action count");
    }
    double tau = std::max(params.temperature, 1e-9);
    double current = value_oracle(inst, obs, goal).steps_remaining;

    auto successor_value = [&](const Action &a) {
        Rng scratch(0);  // table sub-offsets do not affect the slot-level value
        return value_oracle(inst, env_step(inst, obs, a, scratch), goal).steps_remaining;
    };
    std::vector<double> deltas;
    deltas.reserve(remaining.size());
    for (const Action &a : remaining) {
        deltas.push_back(successor_value(a) - current);
    }

    std::vector<Action> out;
    out.reserve(action_branch);
    for (int slot = 0; slot < action_branch; ++slot) {
        std::size_t pick;
        if (rng.chance(params.epsilon)) {
            pick = rng.index(remaining.size());
        } else {
            double best = *std::min_element(deltas.begin(), deltas.end());
            std::vector<double> weights(remaining.size());
            double total = 0;
            for (std::size_t i = 0; i < remaining.size(); ++i) {
                weights[i] = std::exp(-(deltas[i] - best) / tau);
                total += weights[i];
            }
            double r = rng.real() * total;
            pick = remaining.size() - 1;
            for (std::size_t i = 0; i < remaining.size(); ++i) {
                if (r < weights[i]) {
                    pick = i;
                    break;
                }
                r -= weights[i];
            }
        }
        out.push_back(remaining[pick]);
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
        deltas.erase(deltas.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    return out;
}

ValueEstimate estimate_value(const Instance &inst, const Observation &obs, const Goal &goal,
                             const NoiseProfile &noise, Rng &rng) {
    ValueEstimate v = value_oracle(inst, obs, goal);
    if (v.infeasible() || !noise.value_noise.enabled()) {
        return v;
    }
    if (rng.chance(noise.value_noise.p)) {
        auto magnitude = static_cast<double>(1 + rng.index(noise.value_noise.k));
        double sign = rng.index(2) == 0 ? 1.0 : -1.0;
        v.steps_remaining = std::max(0.0, v.steps_remaining + sign * magnitude);
        v.components.clear();
    }
    return v;
}

std::map<std::string, int> count_objects(const Observation &obs, const NoiseProfile &noise,
                                         Rng &rng) {
    std::map<std::string, int> counts;
    std::visit(
        [&counts](const auto &o) {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, MazeObs>) {
                counts["character"] = 1;
                counts["gift"] = o.gift_count;
            } else if constexpr (std::is_same_v<T, FetchObs>) {
                counts["agent"] = 1;
                counts["apple"] = o.apple_count;
            } else {
                for (BlockId b : all_blocks()) {
                    counts[to_string(b)] = 0;
                }
                for (const auto &[block, place] : o.placement) {
                    counts[to_string(block)] += 1;
                }
                if (o.ghost) {
                    counts[to_string(o.ghost->first)] += 1;
                }
            }
        },
        obs);
    for (auto &[category, count] : counts) {
        if (rng.chance(noise.counter_error)) {
            count += rng.index(2) == 0 ? 1 : -1;
            count = std::max(count, 0);
        }
    }
    return counts;
}

}  // namespace uniplan
