#pragma once

#include "uniplan/envs.hpp"

namespace uniplan {

// Forward-model error categories; drawn mutually exclusively per prediction.
enum class ErrorCategory { valid, wrong_effect, del, dup };

std::string to_string(ErrorCategory c);

struct ValueNoise {
    double p = 0;  // probability of perturbing the oracle value
    int k = 0;     // perturbation magnitude bound, +-1..+-k

    bool enabled() const { return p > 0 && k > 0; }
};

struct NoiseProfile {
    double p_wrong_effect = 0;
    double p_delete = 0;
    double p_duplicate = 0;
    double q_inverse = 1;  // probability the inverse model reports the true diff
    ValueNoise value_noise;
    double counter_error = 0;
};

void validate(const NoiseProfile &noise);

struct PolicyParams {
    double epsilon = 0.1;    // uniform-legal mixing weight
    double temperature = 1;  // softmax temperature over -delta(oracle value)
};

struct InsufficientActions : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ForwardPrediction {
    Observation obs;
    ErrorCategory category = ErrorCategory::valid;
};

// Samples one next-observation prediction; the drawn error category decides
// whether it is a ground-truth sample or an injected hallucination.
ForwardPrediction forward_predict_detail(const Instance &inst, const Observation &obs,
                                         const Action &a, const NoiseProfile &noise, Rng &rng);

Observation forward_predict(const Instance &inst, const Observation &obs, const Action &a,
                            const NoiseProfile &noise, Rng &rng);

// Infers the action explaining the pair: with probability q_inverse the exact
// symbolic diff (NoChange when identical, Inexplicable when no single action
// fits), otherwise a uniformly drawn wrong action.
Action inverse_infer(const Instance &inst, const Observation &obs, const Observation &next_obs,
                     const NoiseProfile &noise, Rng &rng);

// Exact symbolic-diff inverse, independent of the noise profile.
Action inverse_oracle(const Instance &inst, const Observation &obs, const Observation &next_obs);

std::vector<Action> propose_actions(const Instance &inst, const Observation &obs, const Goal &goal,
                                    int action_branch, const PolicyParams &params, Rng &rng);

ValueEstimate estimate_value(const Instance &inst, const Observation &obs, const Goal &goal,
                             const NoiseProfile &noise, Rng &rng);

std::map<std::string, int> count_objects(const Observation &obs, const NoiseProfile &noise,
                                         Rng &rng);

}  // namespace uniplan
