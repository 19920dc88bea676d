#include "adaptest/concentration.hpp"

#include <stdexcept>
#include <string>

namespace adaptest {

namespace {

void check_n(std::int64_t n) {
    if (n < 1)
        throw std::invalid_argument("sample count must be positive, got " + std::to_string(n));
}

void check_sigma(double sigma) {
    if (!(sigma > 0.0))
        throw std::invalid_argument("sigma must be positive, got " + std::to_string(sigma));
}

void check_delta(double delta) {
    if (!(delta > 0.0) || !(delta < 1.0))
        throw std::invalid_argument("delta must lie in (0,1), got " + std::to_string(delta));
}

}  // namespace

double hoeffding_tail(std::int64_t n, double eps, double sigma) {
    check_n(n);
    check_sigma(sigma);
    if (eps < 0.0)
        throw std::invalid_argument("eps must be non-negative, got " + std::to_string(eps));
    return std::exp(-static_cast<double>(n) * eps * eps / (2.0 * sigma * sigma));
}

double fixed_radius(std::int64_t n, double delta, double sigma) {
    check_n(n);
    check_sigma(sigma);
    check_delta(delta);
    return sigma * std::sqrt(2.0 * std::log(1.0 / delta) / static_cast<double>(n));
}

double adaptive_radius(std::int64_t n, double delta, double sigma) {
    check_n(n);
    check_sigma(sigma);
    check_delta(delta);
    const double a = std::log(12.0 / delta) / 1.8;
    return detail::adaptive_radius_at(n, a, sigma);
}

double radius(std::int64_t n, double delta, double sigma, bound_kind kind) {
    return kind == bound_kind::fixed_sample ? fixed_radius(n, delta, sigma)
                                            : adaptive_radius(n, delta, sigma);
}

confidence_interval interval(const arm_stats& stats, double delta, double sigma, bound_kind kind) {
    const double mean = empirical_mean(stats);  // throws on n == 0
    const double r = radius(stats.n, delta, sigma, kind);
    return confidence_interval{mean - r, mean + r, stats.n, delta, kind};
}

}  // namespace adaptest
