#include "adaptest/engine.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace adaptest {

namespace {

// 6/pi^2 normalises the 1/r^2 schedule so the per-round budgets sum to delta.
constexpr double k_inverse_square_norm = 0.6079271018540267;

// Floor for coupled levels: alpha_t hits exact zero once wealth is spent,
// but confidence bounds need a positive level.
constexpr double k_level_floor = 1e-300;

}  // namespace

void engine_config::validate() const {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw std::invalid_argument("alpha must lie in (0,1), got " + std::to_string(alpha));
    if (!(delta > 0.0) || !(delta < 1.0))
        throw std::invalid_argument("delta must lie in (0,1), got " + std::to_string(delta));
    if (n_init < 2)
        throw std::invalid_argument("n_init must be at least 2, got " + std::to_string(n_init));
    if (!(epsilon_edge >= 0.0))
        throw std::invalid_argument("epsilon_edge must be non-negative");
    if (max_steps < 1)
        throw std::invalid_argument("max_steps must be positive");
    if (!(investing.initial >= 0.0))
        throw std::invalid_argument("alpha_investing.initial must be non-negative");
    if (!(investing.spend_fraction > 0.0) || !(investing.spend_fraction < 1.0))
        throw std::invalid_argument("alpha_investing.spend_fraction must lie in (0,1)");
    if (!(investing.payout > 0.0) || !(investing.payout <= alpha))
        throw std::invalid_argument("alpha_investing.payout must lie in (0, alpha]");
}

const char* stop_reason_name(stop_reason_kind reason) {
    switch (reason) {
        case stop_reason_kind::policy_certificate: return "policy_certificate";
        case stop_reason_kind::discovery: return "discovery";
        case stop_reason_kind::budget: return "budget";
    }
    return "unknown";
}

double sample_reward(const arm_spec& arm, rng_stream& rng) {
    if (arm.distribution == distribution_kind::bernoulli)
        return rng.uniform01() <= arm.mean ? 1.0 : 0.0;
    return arm.mean + arm.sigma * rng.standard_normal();
}

std::vector<arm_stats> warm_start(const engine_config& config, const problem_instance& instance,
                                  rng_stream& rng, std::vector<sample_record>* log) {
    config.validate();
    instance.validate();
    std::vector<arm_stats> stats(instance.arms.size());
    for (std::size_t a = 0; a < stats.size(); ++a) stats[a].arm_id = static_cast<int>(a);
    std::int64_t step = log ? static_cast<std::int64_t>(log->size()) : 0;
    for (int pass = 0; pass < config.n_init; ++pass) {
        for (const arm_spec& arm : instance.arms) {
            const double value = sample_reward(arm, rng);
            record_sample(stats[arm.id], value);
            if (log) log->push_back({++step, arm.id, value});
        }
    }
    return stats;
}

experiment::experiment(const engine_config& config, const problem_instance& instance,
                       std::uint64_t stream_id, run_options options)
    : cfg_(config),
      inst_(instance),
      opt_(options),
      rng_(config.seed, stream_id) {
    cfg_.validate();
    inst_.validate();
    const std::int64_t warm_total =
        static_cast<std::int64_t>(cfg_.n_init) * inst_.num_arms();
    if (cfg_.max_steps <= warm_total)
        throw std::invalid_argument("max_steps (" + std::to_string(cfg_.max_steps) +
                                    ") must exceed the warm-start total of " +
                                    std::to_string(warm_total));

    result_.stream_id = stream_id;
    stats_ = warm_start(cfg_, inst_, rng_, opt_.record_log ? &result_.draw_log : nullptr);
    steps_ = warm_total;

    std::vector<double> sigma(inst_.arms.size());
    for (const arm_spec& a : inst_.arms) sigma[a.id] = a.sigma;
    policy_ = make_policy_state(cfg_.policy, cfg_.bound, std::move(sigma));
    wealth_ = make_wealth(cfg_.investing.initial, cfg_.investing.spend_fraction,
                          cfg_.investing.payout);
}

double experiment::policy_level(double alpha_t) const {
    if (cfg_.couple_levels) return std::max(alpha_t, k_level_floor);
    const double r = static_cast<double>(round_);
    return cfg_.delta * k_inverse_square_norm / (r * r);
}

void experiment::draw_arm(int arm) {
    const double value = sample_reward(inst_.arms[arm], rng_);
    record_sample(stats_[arm], value);
    ++steps_;
    if (opt_.record_log) result_.draw_log.push_back({steps_, arm, value});
    push_event(event_kind::sample_drawn, arm);
}

void experiment::push_event(event_kind kind, int arm) {
    if (opt_.record_events) result_.events.push_back({round_, kind, arm});
}

void experiment::stop(stop_reason_kind reason, std::optional<int> declared, double level) {
    result_.declared_best = declared;
    result_.reason = reason;
    result_.stop_step = steps_;
    result_.rounds = round_;
    result_.stop_level = level;
    result_.final_p = pv_.current_min;
    result_.final_wealth = wealth_.wealth;
    result_.tests_performed = wealth_.tests;
    result_.final_stats = stats_;
    result_.per_arm_counts.clear();
    for (const arm_stats& s : stats_) result_.per_arm_counts.push_back(s.n);
    result_.discoveries = discoveries_;
    result_.trajectory_recorded = opt_.record_trajectory;
    if (opt_.record_trajectory) result_.p_trajectory = pv_.history;
    push_event(event_kind::stopped);
    done_ = true;
}

void experiment::run_round() {
    if (done_)
        throw std::logic_error("experiment already finished");
    ++round_;

    // (1) The test level is fixed from the wealth before any data arrives.
    const double alpha_t = next_level(wealth_);
    push_event(event_kind::level_fixed);
    const double level = policy_level(alpha_t);

    // (2) Policy proposal at the round's confidence level.
    policy_advice advice = advise(policy_, stats_, level, cfg_.epsilon_edge);
    std::vector<int> to_draw;
    if (advice.stopped) {
        const int best = *advice.declared_best;
        bool clears_control = true;
        if (cfg_.policy == policy_kind::lucb && best != 0) {
            // Extended certificate: beating the runner-up is not enough, the
            // declared arm must also separate from the control's interval
            // (with the control keeping its edge).
            const confidence_interval best_iv =
                interval(stats_[best], level, inst_.arms[best].sigma, cfg_.bound);
            const confidence_interval control_iv =
                interval(stats_[0], level, inst_.arms[0].sigma, cfg_.bound);
            clears_control =
                best_iv.lcb > apply_control_edge(control_iv.ucb, cfg_.epsilon_edge);
        }
        if (clears_control) {
            stop(stop_reason_kind::policy_certificate, best, level);
            return;
        }
        // Certificate incomplete: keep sampling the pair (lucb only).
        to_draw = {best, *advice.runner_up};
    } else {
        to_draw = advice.arms_to_sample;
    }
    if (to_draw.empty())
        throw std::logic_error("policy proposed no arms without stopping");

    // (3) Budget check happens before drawing so the cap is never exceeded.
    if (steps_ + static_cast<std::int64_t>(to_draw.size()) > cfg_.max_steps) {
        stop(stop_reason_kind::budget, std::nullopt, 0.0);
        return;
    }
    for (int arm : to_draw) draw_arm(arm);

    // (4) Fresh p-values at the new counts, folded into the running minimum.
    std::map<arm_pair, double> fresh;
    for (int k = 1; k < inst_.num_arms(); ++k)
        fresh[{0, k}] = single_comparison_pvalue(stats_[0], stats_[k], inst_.arms[0].sigma,
                                                 inst_.arms[k].sigma, cfg_.bound);
    update_anytime_pvalue(pv_, steps_, fresh);
    push_event(event_kind::pvalue_updated);

    // (5) One alpha-investing test per round, aimed at the strongest
    // comparison that has not already been discovered.  A comparison only
    // earns its payout once.
    double test_p = 2.0;
    arm_pair target{};
    bool have_target = false;
    for (const auto& [pair, pmin] : pv_.per_comparison_min) {
        if (already_discovered_.count(pair)) continue;
        if (pmin < test_p) {
            test_p = pmin;
            target = pair;
            have_target = true;
        }
    }
    bool rejected = false;
    if (have_target) {
        rejected = alpha_t > 0.0 && test_p <= alpha_t;
        settle_test(wealth_, rejected);
        push_event(event_kind::test_settled);
        if (rejected) {
            discoveries_.push_back({steps_, test_p, alpha_t, target});
            already_discovered_.insert(target);
        }
    }

    if (opt_.record_trajectory)
        result_.trajectory.push_back(
            {round_, steps_, to_draw, pv_.current_min, alpha_t, wealth_.wealth, rejected});

    if (rejected && cfg_.stop_on_discovery) {
        stop(stop_reason_kind::discovery, std::nullopt, 0.0);
        return;
    }
    if (steps_ >= cfg_.max_steps) stop(stop_reason_kind::budget, std::nullopt, 0.0);
}

experiment_result experiment::take_result() {
    if (!done_)
        throw std::logic_error("experiment still running");
    return std::move(result_);
}

experiment_result run_experiment(const engine_config& config, const problem_instance& instance,
                                 std::uint64_t stream_id, const run_options& options) {
    experiment e(config, instance, stream_id, options);
    while (!e.done()) e.run_round();
    return e.take_result();
}

}  // namespace adaptest
