#include "adaptest/policies.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace adaptest {

namespace {

void validate_stats(const policy_state& state, std::span<const arm_stats> stats) {
    if (stats.size() != state.sigma.size())
        throw std::invalid_argument("expected statistics for " + std::to_string(state.sigma.size()) +
                                    " arms, got " + std::to_string(stats.size()));
    for (std::size_t i = 0; i < stats.size(); ++i)
        if (stats[i].arm_id != static_cast<int>(i))
            throw std::invalid_argument("arm statistics must be indexed by arm id");
}

struct arm_bounds {
    double mean = 0.0;
    double lcb = 0.0;
    double ucb = 0.0;
};

// Bounds at level delta_t, with the control edge folded into arm 0's mean.
// The edge shifts the whole interval; it never touches recorded samples.
arm_bounds bounds_for(const policy_state& state, const arm_stats& stats, double delta_t,
                      double control_edge) {
    double mean = empirical_mean(stats);
    if (stats.arm_id == 0) mean = apply_control_edge(mean, control_edge);
    const double r = radius(stats.n, delta_t, state.sigma[stats.arm_id], state.bound);
    return {mean, mean - r, mean + r};
}

}  // namespace

policy_state make_policy_state(policy_kind kind, bound_kind bound, std::vector<double> sigma) {
    if (sigma.size() < 2)
        throw std::invalid_argument("policies need at least two arms");
    for (double s : sigma)
        if (!(s > 0.0))
            throw std::invalid_argument("per-arm sigma must be positive");
    policy_state state;
    state.kind = kind;
    state.bound = bound;
    state.sigma = std::move(sigma);
    state.active.resize(state.sigma.size());
    for (std::size_t i = 0; i < state.active.size(); ++i) state.active[i] = static_cast<int>(i);
    return state;
}

std::pair<int, int> identify_best_second(std::span<const double> values) {
    if (values.size() < 2)
        throw std::invalid_argument("identify_best_second needs at least two values");
    int best = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] > values[best]) best = static_cast<int>(i);
    int second = best == 0 ? 1 : 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (static_cast<int>(i) == best) continue;
        if (values[i] > values[second]) second = static_cast<int>(i);
    }
    return {best, second};
}

policy_advice uniform_next(policy_state& state, std::span<const arm_stats> stats) {
    validate_stats(state, stats);
    if (state.active.empty())
        throw std::logic_error("uniform policy has no active arms");
    int pick = state.active.front();
    for (int a : state.active)
        if (stats[a].n < stats[pick].n) pick = a;
    policy_advice advice;
    advice.arms_to_sample = {pick};
    state.last_choice = advice.arms_to_sample;
    return advice;
}

policy_advice ae_step(policy_state& state, std::span<const arm_stats> stats, double delta_t,
                      double control_edge) {
    validate_stats(state, stats);
    if (state.active.empty())
        throw std::logic_error("action elimination has no active arms");
    policy_advice advice;
    if (state.active.size() == 1) {
        advice.stopped = true;
        advice.declared_best = state.active.front();
        state.last_choice.clear();
        return advice;
    }

    std::vector<arm_bounds> bounds(state.active.size());
    for (std::size_t i = 0; i < state.active.size(); ++i)
        bounds[i] = bounds_for(state, stats[state.active[i]], delta_t, control_edge);

    std::size_t ref = 0;
    for (std::size_t i = 1; i < state.active.size(); ++i)
        if (bounds[i].mean > bounds[ref].mean) ref = i;

    // One elimination pass against a single snapshot of the bounds: every
    // arm is compared to the same reference interval.
    std::vector<int> survivors;
    survivors.reserve(state.active.size());
    for (std::size_t i = 0; i < state.active.size(); ++i) {
        if (i == ref || !(bounds[i].ucb < bounds[ref].lcb))
            survivors.push_back(state.active[i]);
    }
    state.active = std::move(survivors);

    if (state.active.size() == 1) {
        advice.stopped = true;
        advice.declared_best = state.active.front();
        state.last_choice.clear();
        return advice;
    }
    advice.arms_to_sample = state.active;
    state.last_choice = advice.arms_to_sample;
    return advice;
}

policy_advice ucb_next(policy_state& state, std::span<const arm_stats> stats, double delta_t,
                       double control_edge) {
    validate_stats(state, stats);
    std::vector<arm_bounds> bounds(stats.size());
    for (std::size_t i = 0; i < stats.size(); ++i)
        bounds[i] = bounds_for(state, stats[i], delta_t, control_edge);

    int best_lcb = 0;
    for (std::size_t i = 1; i < bounds.size(); ++i)
        if (bounds[i].lcb > bounds[best_lcb].lcb) best_lcb = static_cast<int>(i);
    double rival_ucb = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < bounds.size(); ++i)
        if (static_cast<int>(i) != best_lcb) rival_ucb = std::max(rival_ucb, bounds[i].ucb);

    policy_advice advice;
    if (bounds[best_lcb].lcb >= rival_ucb) {
        advice.stopped = true;
        advice.declared_best = best_lcb;
        state.last_choice.clear();
        return advice;
    }
    int pick = 0;
    for (std::size_t i = 1; i < bounds.size(); ++i)
        if (bounds[i].ucb > bounds[pick].ucb) pick = static_cast<int>(i);
    advice.arms_to_sample = {pick};
    state.last_choice = advice.arms_to_sample;
    return advice;
}

policy_advice lucb_next(policy_state& state, std::span<const arm_stats> stats, double delta_t,
                        double control_edge) {
    validate_stats(state, stats);
    std::vector<arm_bounds> bounds(stats.size());
    std::vector<double> ucbs(stats.size());
    for (std::size_t i = 0; i < stats.size(); ++i) {
        bounds[i] = bounds_for(state, stats[i], delta_t, control_edge);
        ucbs[i] = bounds[i].ucb;
    }
    const auto [leader, runner] = identify_best_second(ucbs);

    policy_advice advice;
    advice.runner_up = runner;
    if (bounds[leader].lcb > bounds[runner].ucb) {
        advice.stopped = true;
        advice.declared_best = leader;
        state.last_choice.clear();
        return advice;
    }
    advice.arms_to_sample = {leader, runner};
    state.last_choice = advice.arms_to_sample;
    return advice;
}

policy_advice advise(policy_state& state, std::span<const arm_stats> stats, double delta_t,
                     double control_edge) {
    switch (state.kind) {
        case policy_kind::uniform:
            return uniform_next(state, stats);
        case policy_kind::action_elimination:
            return ae_step(state, stats, delta_t, control_edge);
        case policy_kind::ucb:
            return ucb_next(state, stats, delta_t, control_edge);
        case policy_kind::lucb:
            return lucb_next(state, stats, delta_t, control_edge);
    }
    throw std::logic_error("unknown policy kind");
}

}  // namespace adaptest
