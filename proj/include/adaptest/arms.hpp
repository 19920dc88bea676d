#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace adaptest {

enum class distribution_kind { gaussian, bernoulli };

// Ground-truth description of one arm.  Only the reward simulator reads
// `mean`; policies and inference operate purely on arm_stats.
struct arm_spec {
    int id = 0;
    double mean = 0.0;
    // Sub-gaussian scale used by every bound.  Bernoulli arms are pinned to
    // 1/2, the scale under which any [0,1]-valued variable is sub-gaussian.
    double sigma = 1.0;
    distribution_kind distribution = distribution_kind::gaussian;
    bool is_control = false;
};

struct problem_instance {
    std::vector<arm_spec> arms;  // ids 0..k in positional order; arm 0 is the control
    std::string label;

    int num_arms() const { return static_cast<int>(arms.size()); }

    // Throws std::invalid_argument when the instance breaks a structural
    // rule: fewer than two arms, ids out of order, control missing or not
    // at id 0, non-positive sigma, or a bernoulli arm with mean outside
    // [0,1] or sigma != 1/2.
    void validate() const;
};

// JSON instance files.  Unknown keys are rejected rather than ignored so a
// typo in a field name cannot silently change an experiment.
problem_instance parse_instance_json(const std::string& text);
problem_instance load_instance(const std::string& path);
std::string instance_to_json(const problem_instance& instance);

// Sufficient statistics for one arm: draw count and running sum.  All
// policies and p-values are functions of these two numbers only.
struct arm_stats {
    int arm_id = 0;
    std::int64_t n = 0;
    double sum = 0.0;
};

void record_sample(arm_stats& stats, double value);

// sum / n; throws std::invalid_argument("no samples") when n == 0.
double empirical_mean(const arm_stats& stats);

// One entry of the raw draw log, in experiment order.
struct sample_record {
    std::int64_t step = 0;  // 1-based position among all draws
    int arm_id = 0;
    double value = 0.0;
};

// Rebuilds per-arm statistics from a draw log.  Replaying the log of a run
// must reproduce the run's final statistics exactly.
std::vector<arm_stats> replay(const std::vector<sample_record>& log, int num_arms);

}  // namespace adaptest
