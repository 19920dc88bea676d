#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "adaptest/concentration.hpp"

namespace adaptest {

// A one-sided comparison "challenger beats control": (control id, challenger id).
using arm_pair = std::pair<int, int>;

// Smallest significance level at which the challenger's lower confidence
// bound clears the control's upper confidence bound, i.e. the sup of levels
// gamma for which disjointness holds with per-side mass gamma.  Returns 1
// when no level separates the intervals (including any non-positive
// empirical gap).  Small values are evidence the challenger is better.
double single_comparison_pvalue(const arm_stats& control, const arm_stats& challenger,
                                double sigma_control, double sigma_challenger, bound_kind kind);

// Convenience overload for a shared scale.
double single_comparison_pvalue(const arm_stats& control, const arm_stats& challenger,
                                double sigma, bound_kind kind);

// Running minimum of comparison p-values across the experiment.  Because
// each fresh p-value is individually valid at every data-dependent time, the
// running minimum can be monitored continuously and thresholded at any step.
struct pvalue_state {
    double current_min = 1.0;
    std::map<arm_pair, double> per_comparison_min;
    std::vector<std::pair<std::int64_t, double>> history;  // (step, running min)
    std::int64_t last_step = 0;
};

// Folds one round of fresh p-values into the state.  `step` must strictly
// increase between calls; violations throw std::logic_error.
void update_anytime_pvalue(pvalue_state& state, std::int64_t step,
                           const std::map<arm_pair, double>& fresh);

// Alpha-investing ledger for online FDR control.  Each test spends
// phi = spend_fraction * wealth; a rejection pays the bounty back.
struct alpha_wealth {
    double wealth = 0.0;
    double initial = 0.0;
    double spend_fraction = 0.1;
    double payout = 0.0;
    std::int64_t tests = 0;

    struct entry {
        double phi = 0.0;
        bool rejected = false;
    };
    std::vector<entry> ledger;
};

alpha_wealth make_wealth(double initial, double spend_fraction, double payout);

// Test level for the next test: phi / (1 + phi) with phi = spend_fraction *
// wealth.  Pure; does not mutate the ledger.  Zero wealth yields level 0.
double next_level(const alpha_wealth& w);

// Records the outcome of one test: wealth -= phi, plus the payout when the
// test rejected.  Wealth can approach 0 but never goes negative.
void settle_test(alpha_wealth& w, bool rejected);

struct discovery {
    std::int64_t step = 0;
    double p = 0.0;
    double level = 0.0;
    arm_pair comparison{};
};

// False discovery proportion of one run: among the discoveries, the
// fraction whose comparison is a true null.  0 when nothing was discovered.
double false_discovery_proportion(const std::map<arm_pair, bool>& is_null,
                                  const std::vector<discovery>& discoveries);

}  // namespace adaptest
