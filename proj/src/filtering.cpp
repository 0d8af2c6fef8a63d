#include "uniplan/filtering.hpp"

namespace uniplan {

std::string to_string(RejectReason r) {
    switch (r) {
        case RejectReason::none: return "none";
        case RejectReason::action_mismatch: return "action_mismatch";
        case RejectReason::count_mismatch: return "count_mismatch";
    }
    return "?";
}

bool actions_match(const Action &a, const Action &b) {
    return normalize_action(a) == normalize_action(b);
}

bool count_consistent(const Observation &obs, const Observation &predicted,
                      const NoiseProfile &noise, Rng &rng) {
    return count_objects(obs, noise, rng) == count_objects(predicted, noise, rng);
}

std::vector<TransitionCandidate> discriminate(const Instance &inst, const Observation &obs,
                                              const Action &a, int dynamics_branch,
                                              const NoiseProfile &noise, bool filtering_enabled,
                                              Rng &forward_rng, Rng &inverse_rng) {
    std::vector<TransitionCandidate> out;
    out.reserve(dynamics_branch);
    for (int j = 0; j < dynamics_branch; ++j) {
        ForwardPrediction pred = forward_predict_detail(inst, obs, a, noise, forward_rng);
        TransitionCandidate cand;
        cand.obs = obs;
        cand.action = a;
        cand.predicted = pred.obs;
        cand.category = pred.category;
        cand.ground_truth_valid = valid_successor(inst, obs, a, pred.obs);
        out.push_back(std::move(cand));
    }
    if (!filtering_enabled) {
        for (auto &cand : out) {
            cand.accepted = true;
        }
        return out;
    }
    for (auto &cand : out) {
        Rng check_rng(inverse_rng.next());
        if (!count_consistent(cand.obs, cand.predicted, noise, check_rng)) {
            cand.accepted = false;
            cand.reject_reason = RejectReason::count_mismatch;
            continue;
        }
        cand.inferred_action = inverse_infer(inst, cand.obs, cand.predicted, noise, check_rng);
        if (!actions_match(cand.inferred_action, cand.action)) {
            cand.accepted = false;
            cand.reject_reason = RejectReason::action_mismatch;
            continue;
        }
        cand.accepted = true;
        cand.reject_reason = RejectReason::none;
    }
    return out;
}

}  // namespace uniplan
