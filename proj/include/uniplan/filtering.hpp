#pragma once

#include "uniplan/surrogate.hpp"

namespace uniplan {

enum class RejectReason { none, action_mismatch, count_mismatch };

std::string to_string(RejectReason r);

struct TransitionCandidate {
    Observation obs;
    Action action;
    Observation predicted;
    bool accepted = false;
    RejectReason reject_reason = RejectReason::none;
    Action inferred_action = NoChange{};
    ErrorCategory category = ErrorCategory::valid;  // injected category, for logs
    bool ground_truth_valid = false;                // measured against the env
};

// Semantic action equality per normalized tuples.
bool actions_match(const Action &a, const Action &b);

bool count_consistent(const Observation &obs, const Observation &predicted,
                      const NoiseProfile &noise, Rng &rng);

// Samples dynamics_branch forward predictions for (obs, a) and verdicts each:
// object counts are checked first, then the inverse-inferred action. With
// filtering disabled every candidate is accepted unchecked. Each candidate's
// checks run on a sub-stream keyed by its index, so verdicts do not depend on
// the order in which candidates are examined.
std::vector<TransitionCandidate> discriminate(const Instance &inst, const Observation &obs,
                                              const Action &a, int dynamics_branch,
                                              const NoiseProfile &noise, bool filtering_enabled,
                                              Rng &forward_rng, Rng &inverse_rng);

}  // namespace uniplan
