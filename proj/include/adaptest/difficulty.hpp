#pragma once

#include <vector>

#include "adaptest/arms.hpp"

namespace adaptest {

// How hard an instance is for best-arm identification, summarised from its
// suboptimality gaps.  Sample complexity scales with sum 1/gap^2, with the
// smallest gap dominating.
struct difficulty_report {
    std::vector<double> gaps;        // ascending
    double total_complexity = 0.0;   // sum over gaps of 1/gap^2
    double top_term = 0.0;           // 1/min_gap^2
    double entropy_surrogate = 0.0;  // spread of the 1/gap^2 weights
    double log_factor = 0.0;         // ln(max(e, ln(max(e, 1/min_gap))))
};

// Gaps best_mean - mean_a for every non-best arm, sorted ascending.
// Throws std::invalid_argument when the best mean is tied (gap would be 0).
std::vector<double> compute_gaps(const problem_instance& instance);

// Shannon entropy of the weights w_j proportional to gap_j^-2.  0 for a
// single gap; ln(k) when all gaps are equal.
double gap_entropy(const std::vector<double>& gaps);

difficulty_report complexity_terms(const std::vector<double>& gaps);

}  // namespace adaptest
