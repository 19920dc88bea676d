#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "adaptest/arms.hpp"

namespace adaptest {

// Which concentration result backs a confidence bound.  fixed_sample is the
// classic Hoeffding bound, valid only when the sample size was chosen ahead
// of time.  adaptive_lil is a finite-sample iterated-logarithm bound on the
// whole random walk, so it stays valid when the number of samples is decided
// by peeking at the data.
enum class bound_kind { fixed_sample, adaptive_lil };

struct confidence_interval {
    double lcb = 0.0;
    double ucb = 0.0;
    std::int64_t n = 0;
    double delta = 0.0;
    bound_kind kind = bound_kind::fixed_sample;
};

// One-sided tail mass: P(mean estimate - mu >= eps) <= exp(-n eps^2 / (2 sigma^2)).
double hoeffding_tail(std::int64_t n, double eps, double sigma);

// Radius sigma * sqrt(2 ln(1/delta) / n), inverting the Hoeffding tail at
// mass delta per side.
double fixed_radius(std::int64_t n, double delta, double sigma);

// Radius sigma * sqrt((0.6 L(n) + a) / n) where L is the iterated-log term
// below and a solves 12 exp(-1.8 a) = delta.  Valid simultaneously over all n.
double adaptive_radius(std::int64_t n, double delta, double sigma);

double radius(std::int64_t n, double delta, double sigma, bound_kind kind);

// Two-sided interval around the empirical mean; each bound uses the radius
// at mass delta, so total two-sided miscoverage is at most 2 delta.
confidence_interval interval(const arm_stats& stats, double delta, double sigma, bound_kind kind);

namespace detail {

// ln(log_1.1(n) + 1) evaluated at max(n, 2) so that n = 1 is usable.
inline double iterlog_term(std::int64_t n) {
    const double m = static_cast<double>(std::max<std::int64_t>(n, 2));
    return std::log(std::log(m) / std::log(1.1) + 1.0);
}

// The adaptive radius with the tail inversion already done: a is the
// exponent solving 12 exp(-1.8 a) = delta.  The p-value search reuses this
// to walk in a-space without re-deriving a from delta each probe.
inline double adaptive_radius_at(std::int64_t n, double a, double sigma) {
    return sigma * std::sqrt((0.6 * iterlog_term(n) + a) / static_cast<double>(n));
}

}  // namespace detail

}  // namespace adaptest
