#include "adaptest/difficulty.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace adaptest {

std::vector<double> compute_gaps(const problem_instance& instance) {
    instance.validate();
    double best = instance.arms[0].mean;
    for (const arm_spec& a : instance.arms) best = std::max(best, a.mean);
    int ties = 0;
    for (const arm_spec& a : instance.arms)
        if (a.mean == best) ++ties;
    if (ties > 1)
        throw std::invalid_argument("best mean is tied across " + std::to_string(ties) +
                                    " arms; gaps are undefined");
    std::vector<double> gaps;
    gaps.reserve(instance.arms.size() - 1);
    for (const arm_spec& a : instance.arms)
        if (a.mean != best) gaps.push_back(best - a.mean);
    std::sort(gaps.begin(), gaps.end());
    return gaps;
}

double gap_entropy(const std::vector<double>& gaps) {
    if (gaps.empty())
        throw std::invalid_argument("entropy needs at least one gap");
    double total = 0.0;
    for (double g : gaps) {
        if (!(g > 0.0))
            throw std::invalid_argument("gaps must be positive, got " + std::to_string(g));
        total += 1.0 / (g * g);
    }
    double h = 0.0;
    for (double g : gaps) {
        const double w = (1.0 / (g * g)) / total;
        h -= w * std::log(w);
    }
    return h;
}

difficulty_report complexity_terms(const std::vector<double>& gaps) {
    if (gaps.empty())
        throw std::invalid_argument("complexity needs at least one gap");
    difficulty_report report;
    report.gaps = gaps;
    std::sort(report.gaps.begin(), report.gaps.end());
    for (double g : report.gaps) {
        if (!(g > 0.0))
            throw std::invalid_argument("gaps must be positive, got " + std::to_string(g));
        report.total_complexity += 1.0 / (g * g);
    }
    const double min_gap = report.gaps.front();
    report.top_term = 1.0 / (min_gap * min_gap);
    report.entropy_surrogate = gap_entropy(report.gaps);
    const double e = std::exp(1.0);
    report.log_factor = std::log(std::max(e, std::log(std::max(e, 1.0 / min_gap))));
    return report;
}

}  // namespace adaptest
