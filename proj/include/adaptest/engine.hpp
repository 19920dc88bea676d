#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "adaptest/arms.hpp"
#include "adaptest/inference.hpp"
#include "adaptest/policies.hpp"
#include "adaptest/rng.hpp"

namespace adaptest {

struct alpha_investing_config {
    double initial = 0.025;        // W(0)
    double spend_fraction = 0.1;   // gamma
    double payout = 0.05;          // omega, credited on each rejection

    // The conventional parametrisation at FDR level alpha:
    // W(0) = alpha/2, gamma = 0.1, omega = alpha.
    static alpha_investing_config defaults_for(double alpha) {
        return {alpha / 2.0, 0.1, alpha};
    }
};

struct engine_config {
    policy_kind policy = policy_kind::lucb;
    bound_kind bound = bound_kind::adaptive_lil;
    double alpha = 0.05;   // online FDR budget for the discovery stream
    double delta = 0.1;    // misidentification budget for the policy certificate
    int n_init = 5;        // warm-start rounds: every arm gets n_init samples
    double epsilon_edge = 0.0;
    std::int64_t max_steps = 100000;  // total sample budget, warm start included
    alpha_investing_config investing;
    std::uint64_t seed = 0;
    bool stop_on_discovery = false;
    // When set, the policy's confidence level in round t is the alpha-investing
    // level alpha_t of the same round instead of the delta / t^2 schedule.
    bool couple_levels = false;

    void validate() const;  // throws std::invalid_argument on the first violation
};

enum class stop_reason_kind { policy_certificate, discovery, budget };
const char* stop_reason_name(stop_reason_kind reason);

// One completed sampling round, for trajectory output.
struct round_record {
    std::int64_t round = 0;
    std::int64_t step = 0;  // total draws after this round
    std::vector<int> arms_drawn;
    double p_anytime = 1.0;
    double alpha_t = 0.0;
    double wealth = 0.0;
    bool rejected = false;
};

enum class event_kind { level_fixed, sample_drawn, pvalue_updated, test_settled, stopped };

struct engine_event {
    std::int64_t round = 0;
    event_kind kind = event_kind::level_fixed;
    int arm = -1;  // payload for sample_drawn
};

struct experiment_result {
    std::uint64_t stream_id = 0;
    std::optional<int> declared_best;  // unset on budget or discovery stops
    stop_reason_kind reason = stop_reason_kind::budget;
    std::int64_t stop_step = 0;
    std::int64_t rounds = 0;
    double stop_level = 0.0;  // policy confidence level of the certifying round
    double final_p = 1.0;     // anytime p-value at the stop
    double final_wealth = 0.0;
    std::int64_t tests_performed = 0;
    std::vector<std::int64_t> per_arm_counts;
    std::vector<arm_stats> final_stats;
    std::vector<discovery> discoveries;
    std::optional<bool> correct;  // filled by the harness from ground truth

    // Populated only when requested through run_options.  trajectory holds
    // one row per completed sampling round; a run whose certificate fires at
    // the very first advice has none, which trajectory_recorded tells apart
    // from a run that never recorded at all.
    bool trajectory_recorded = false;
    std::vector<std::pair<std::int64_t, double>> p_trajectory;
    std::vector<round_record> trajectory;
    std::vector<engine_event> events;
    std::vector<sample_record> draw_log;
};

struct run_options {
    bool record_trajectory = false;
    bool record_events = false;
    bool record_log = false;
};

// Draws one reward from an arm.  Gaussian arms return mean + sigma * z;
// bernoulli arms return the indicator of u <= mean.
double sample_reward(const arm_spec& arm, rng_stream& rng);

// n_init passes over all arms in id order, so every policy starts from
// fully populated statistics.  Appends to `log` when it is non-null.
std::vector<arm_stats> warm_start(const engine_config& config, const problem_instance& instance,
                                  rng_stream& rng, std::vector<sample_record>* log = nullptr);

// One experiment, advanced round by round.  Each round fixes the test level
// from the current wealth, consults the policy, draws the proposed samples,
// refreshes p-values, and settles at most one alpha-investing test.
class experiment {
  public:
    experiment(const engine_config& config, const problem_instance& instance,
               std::uint64_t stream_id = 0, run_options options = {});

    bool done() const { return done_; }
    void run_round();          // throws std::logic_error once done
    experiment_result take_result();

    // Introspection for tests and callers that drive rounds manually.
    const std::vector<arm_stats>& stats() const { return stats_; }
    const alpha_wealth& wealth() const { return wealth_; }
    const pvalue_state& pvalues() const { return pv_; }
    std::int64_t steps() const { return steps_; }
    std::int64_t rounds() const { return round_; }

  private:
    double policy_level(double alpha_t) const;
    void draw_arm(int arm);
    void stop(stop_reason_kind reason, std::optional<int> declared, double level);
    void push_event(event_kind kind, int arm = -1);

    engine_config cfg_;
    problem_instance inst_;
    run_options opt_;
    rng_stream rng_;
    std::vector<arm_stats> stats_;
    policy_state policy_;
    pvalue_state pv_;
    alpha_wealth wealth_;
    std::set<arm_pair> already_discovered_;
    std::vector<discovery> discoveries_;
    std::int64_t steps_ = 0;
    std::int64_t round_ = 0;
    bool done_ = false;
    experiment_result result_;
};

experiment_result run_experiment(const engine_config& config, const problem_instance& instance,
                                 std::uint64_t stream_id = 0, const run_options& options = {});

}  // namespace adaptest
