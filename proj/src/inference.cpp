#include "adaptest/inference.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace adaptest {

namespace {

void check_stats(const arm_stats& stats, const char* role) {
    if (stats.n < 1)
        throw std::invalid_argument(std::string(role) + " arm has no samples");
}

// Fixed-sample bounds invert in closed form: the intervals separate at level
// gamma iff gap >= (sigma_0/sqrt(n_0) + sigma_k/sqrt(n_k)) * sqrt(2 ln(1/gamma)),
// so the sup level is exp(-gap^2 / (2 (sigma_0/sqrt(n_0) + sigma_k/sqrt(n_k))^2)).
double fixed_kind_pvalue(double gap, const arm_stats& control, const arm_stats& challenger,
                         double sigma_control, double sigma_challenger) {
    const double c = sigma_control / std::sqrt(static_cast<double>(control.n)) +
                     sigma_challenger / std::sqrt(static_cast<double>(challenger.n));
    const double p = std::exp(-gap * gap / (2.0 * c * c));
    return p < 1.0 ? p : 1.0;
}

// Adaptive bounds have no algebraic inverse because of the iterated-log
// term, but the combined radius is strictly increasing in the exponent a
// (where the level is 12 exp(-1.8 a)), so the sup level follows from a
// monotone bisection on a.
double adaptive_kind_pvalue(double gap, const arm_stats& control, const arm_stats& challenger,
                            double sigma_control, double sigma_challenger) {
    const double n0 = static_cast<double>(control.n);
    const double nk = static_cast<double>(challenger.n);
    const double b0 = 0.6 * detail::iterlog_term(control.n);
    const double bk = 0.6 * detail::iterlog_term(challenger.n);
    const auto combined_radius = [&](double a) {
        return sigma_control * std::sqrt((b0 + a) / n0) +
               sigma_challenger * std::sqrt((bk + a) / nk);
    };

    // a_min corresponds to level 1; radii only grow beyond it, so if even
    // the level-1 radii overlap the sup is over an empty set.
    const double a_min = std::log(12.0) / 1.8;
    if (combined_radius(a_min) >= gap) return 1.0;

    // combined_radius(a) >= sigma_0 sqrt(a / n_0), so a_hi below is past the
    // crossing and [a_min, a_hi] brackets the root.
    double lo = a_min;
    double hi = std::max(a_min + 1.0, gap * gap * n0 / (sigma_control * sigma_control) + 1.0);
    for (int iter = 0; iter < 64; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (combined_radius(mid) < gap)
            lo = mid;
        else
            hi = mid;
    }
    const double a_star = 0.5 * (lo + hi);
    const double p = 12.0 * std::exp(-1.8 * a_star);
    return p < 1.0 ? p : 1.0;
}

}  // namespace

double single_comparison_pvalue(const arm_stats& control, const arm_stats& challenger,
                                double sigma_control, double sigma_challenger, bound_kind kind) {
    check_stats(control, "control");
    check_stats(challenger, "challenger");
    if (!(sigma_control > 0.0) || !(sigma_challenger > 0.0))
        throw std::invalid_argument("sigma must be positive");
    const double gap = empirical_mean(challenger) - empirical_mean(control);
    if (gap <= 0.0) return 1.0;
    return kind == bound_kind::fixed_sample
               ? fixed_kind_pvalue(gap, control, challenger, sigma_control, sigma_challenger)
               : adaptive_kind_pvalue(gap, control, challenger, sigma_control, sigma_challenger);
}

double single_comparison_pvalue(const arm_stats& control, const arm_stats& challenger,
                                double sigma, bound_kind kind) {
    return single_comparison_pvalue(control, challenger, sigma, sigma, kind);
}

void update_anytime_pvalue(pvalue_state& state, std::int64_t step,
                           const std::map<arm_pair, double>& fresh) {
    if (step <= state.last_step)
        throw std::logic_error("p-value updates must advance the step counter (step " +
                               std::to_string(step) + " after " + std::to_string(state.last_step) + ")");
    for (const auto& [pair, p] : fresh) {
        if (!(p >= 0.0) || !(p <= 1.0))
            throw std::invalid_argument("p-value outside [0,1]: " + std::to_string(p));
        auto [it, inserted] = state.per_comparison_min.try_emplace(pair, p);
        if (!inserted && p < it->second) it->second = p;
        if (p < state.current_min) state.current_min = p;
    }
    state.history.emplace_back(step, state.current_min);
    state.last_step = step;
}

alpha_wealth make_wealth(double initial, double spend_fraction, double payout) {
    if (!(initial >= 0.0))
        throw std::invalid_argument("initial wealth must be non-negative");
    if (!(spend_fraction > 0.0) || !(spend_fraction < 1.0))
        throw std::invalid_argument("spend_fraction must lie in (0,1)");
    if (!(payout > 0.0))
        throw std::invalid_argument("payout must be positive");
    alpha_wealth w;
    w.wealth = initial;
    w.initial = initial;
    w.spend_fraction = spend_fraction;
    w.payout = payout;
    return w;
}

double next_level(const alpha_wealth& w) {
    const double phi = w.spend_fraction * w.wealth;
    return phi / (1.0 + phi);
}

void settle_test(alpha_wealth& w, bool rejected) {
    const double phi = w.spend_fraction * w.wealth;
    w.wealth = w.wealth - phi + (rejected ? w.payout : 0.0);
    w.tests += 1;
    w.ledger.push_back({phi, rejected});
}

double false_discovery_proportion(const std::map<arm_pair, bool>& is_null,
                                  const std::vector<discovery>& discoveries) {
    if (discoveries.empty()) return 0.0;
    std::int64_t false_count = 0;
    for (const discovery& d : discoveries) {
        const auto it = is_null.find(d.comparison);
        if (it == is_null.end())
            throw std::invalid_argument("discovery references a comparison with no null status");
        if (it->second) ++false_count;
    }
    return static_cast<double>(false_count) / static_cast<double>(discoveries.size());
}

}  // namespace adaptest
