#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "adaptest/concentration.hpp"

namespace adaptest {

enum class policy_kind { uniform, action_elimination, ucb, lucb };

// The handicap a challenger must overcome: the control plays with its mean
// estimate shifted by epsilon inside every policy bound.  Inference never
// sees the shift, so p-values stay valid for the unshifted hypothesis.
inline double apply_control_edge(double mean_estimate, double epsilon) {
    return mean_estimate + epsilon;
}

// Allocation-policy bookkeeping.  Policies see only arm statistics, never
// ground truth, and all tie-breaks resolve to the lowest arm id so that
// relabelling arms relabels the decisions and nothing else.
struct policy_state {
    policy_kind kind = policy_kind::uniform;
    bound_kind bound = bound_kind::adaptive_lil;
    std::vector<double> sigma;        // per-arm scale, indexed by arm id
    std::vector<int> active;          // surviving arms, ascending; AE shrinks this
    std::vector<int> last_choice;     // arms proposed by the most recent call
};

policy_state make_policy_state(policy_kind kind, bound_kind bound, std::vector<double> sigma);

// What the policy wants next: either a batch of arms to sample (in order),
// or a stop with a declared best arm.  lucb also reports the runner-up it
// certified against so the caller can extend the certificate.
struct policy_advice {
    std::vector<int> arms_to_sample;
    bool stopped = false;
    std::optional<int> declared_best;
    std::optional<int> runner_up;
};

// Index of the best and second-best entry of `values`, ties to the lower
// index.  Needs at least two entries.
std::pair<int, int> identify_best_second(std::span<const double> values);

// Round-robin over the active set: always proposes the active arm with the
// fewest samples (ties to the lowest id).  Never stops on its own.
policy_advice uniform_next(policy_state& state, std::span<const arm_stats> stats);

// Action elimination: drops every active arm whose UCB falls below the LCB
// of the empirically best active arm, then proposes the survivors.  Stops
// when one arm remains.  `control_edge` is added to arm 0's mean estimate
// inside the bounds (and only there).
policy_advice ae_step(policy_state& state, std::span<const arm_stats> stats, double delta_t,
                      double control_edge = 0.0);

// Optimistic sampling: proposes the arm with the highest UCB; stops when
// some arm's LCB weakly dominates every other UCB.
policy_advice ucb_next(policy_state& state, std::span<const arm_stats> stats, double delta_t,
                       double control_edge = 0.0);

// LUCB: proposes the empirical leader (by UCB) and its closest challenger;
// stops when the leader's LCB strictly exceeds the challenger's UCB.
policy_advice lucb_next(policy_state& state, std::span<const arm_stats> stats, double delta_t,
                        double control_edge = 0.0);

// Dispatch on state.kind.  uniform ignores delta_t and control_edge.
policy_advice advise(policy_state& state, std::span<const arm_stats> stats, double delta_t,
                     double control_edge = 0.0);

}  // namespace adaptest
