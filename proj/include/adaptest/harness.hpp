#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "adaptest/engine.hpp"

namespace adaptest {

// Ground-truth views of an instance, used to score results.
std::map<arm_pair, bool> null_comparisons(const problem_instance& instance);
bool is_best_arm(const problem_instance& instance, int arm);

struct batch_report {
    std::int64_t replications = 0;
    double misidentification_rate = 0.0;  // declared runs that declared a non-best arm
    double mean_stop_step = 0.0;
    double median_stop_step = 0.0;
    double empirical_fdr = 0.0;           // mean per-run false discovery proportion
    double anytime_crossing_rate = 0.0;   // runs whose running-min p ever reached alpha
    std::int64_t stops_certificate = 0;
    std::int64_t stops_discovery = 0;
    std::int64_t stops_budget = 0;
};

struct batch_options {
    int threads = 0;                  // 0 = hardware concurrency
    std::int64_t trajectory_reps = 0; // record trajectories for streams [0, trajectory_reps)
};

struct batch_results {
    batch_report report;
    std::vector<experiment_result> results;  // indexed by stream id
};

// Runs replications 0..m-1 on streams 0..m-1.  Workers may run concurrently;
// results land in a pre-sized vector slot per stream and the report is folded
// in stream order, so the outcome is identical to a sequential run.  A failed
// replication aborts the batch naming the offending stream.
batch_results run_replications(const engine_config& config, const problem_instance& instance,
                               std::int64_t m, const batch_options& options = {});

// Mean false discovery proportion across runs (0 when `results` is empty).
double aggregate_fdr(const std::vector<experiment_result>& results,
                     const std::map<arm_pair, bool>& is_null);

// Writes summary.json and replications.csv into out_dir, plus
// trajectory_<stream>.csv for every run that recorded one and optionally
// plotdata.csv (long-format series for plotting).  Output depends only on
// the inputs, never on wall-clock state, so reruns are byte-identical.
void emit_results(const batch_results& batch, const engine_config& config,
                  const problem_instance& instance, const std::string& out_dir,
                  bool plotdata = false);

struct policy_row {
    policy_kind policy = policy_kind::uniform;
    double misidentification_rate = 0.0;
    double median_stop_step = 0.0;
    double mean_stop_step = 0.0;
};

// Same instance, same seed, same stream ids for every policy, so rows differ
// only through policy behaviour.
std::vector<policy_row> compare_policies(const engine_config& base,
                                         const problem_instance& instance,
                                         const std::vector<policy_kind>& policies,
                                         std::int64_t m, const batch_options& options = {});

}  // namespace adaptest
