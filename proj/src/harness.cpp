#include "adaptest/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "adaptest/config.hpp"

namespace adaptest {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Shortest round-trip representation; keeps CSV output compact and stable.
std::string fmt(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double best_mean(const problem_instance& instance) {
    double best = instance.arms[0].mean;
    for (const arm_spec& a : instance.arms) best = std::max(best, a.mean);
    return best;
}

double median_of(std::vector<double> values) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    if (values.size() % 2 == 1) return values[mid];
    return 0.5 * (values[mid - 1] + values[mid]);
}

batch_report fold_report(const engine_config& config, const problem_instance& instance,
                         const std::vector<experiment_result>& results) {
    batch_report report;
    report.replications = static_cast<std::int64_t>(results.size());
    if (results.empty()) return report;

    const auto nulls = null_comparisons(instance);
    std::vector<double> stops;
    stops.reserve(results.size());
    std::int64_t wrong = 0;
    std::int64_t crossed = 0;
    for (const experiment_result& r : results) {
        stops.push_back(static_cast<double>(r.stop_step));
        report.mean_stop_step += static_cast<double>(r.stop_step);
        if (r.correct.has_value() && !*r.correct) ++wrong;
        if (r.final_p <= config.alpha) ++crossed;
        switch (r.reason) {
            case stop_reason_kind::policy_certificate: ++report.stops_certificate; break;
            case stop_reason_kind::discovery: ++report.stops_discovery; break;
            case stop_reason_kind::budget: ++report.stops_budget; break;
        }
    }
    const double m = static_cast<double>(results.size());
    report.misidentification_rate = static_cast<double>(wrong) / m;
    report.mean_stop_step /= m;
    report.median_stop_step = median_of(std::move(stops));
    report.anytime_crossing_rate = static_cast<double>(crossed) / m;
    report.empirical_fdr = aggregate_fdr(results, nulls);
    return report;
}

void write_file(const fs::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << contents;
    if (!out)
        throw std::runtime_error("failed writing '" + path.string() + "'");
}

json config_echo(const engine_config& config) {
    json j;
    j["policy"] = policy_name(config.policy);
    j["bound"] = bound_name(config.bound);
    j["alpha"] = config.alpha;
    j["delta"] = config.delta;
    j["n_init"] = config.n_init;
    j["epsilon_edge"] = config.epsilon_edge;
    j["max_steps"] = config.max_steps;
    j["seed"] = config.seed;
    j["stop_on_discovery"] = config.stop_on_discovery;
    j["couple_levels"] = config.couple_levels;
    j["alpha_investing"] = {{"initial", config.investing.initial},
                            {"spend_fraction", config.investing.spend_fraction},
                            {"payout", config.investing.payout}};
    return j;
}

}  // namespace

std::map<arm_pair, bool> null_comparisons(const problem_instance& instance) {
    instance.validate();
    std::map<arm_pair, bool> nulls;
    for (int k = 1; k < instance.num_arms(); ++k)
        nulls[{0, k}] = instance.arms[k].mean <= instance.arms[0].mean;
    return nulls;
}

bool is_best_arm(const problem_instance& instance, int arm) {
    if (arm < 0 || arm >= instance.num_arms())
        throw std::invalid_argument("arm id out of range");
    return instance.arms[arm].mean == best_mean(instance);
}

batch_results run_replications(const engine_config& config, const problem_instance& instance,
                               std::int64_t m, const batch_options& options) {
    if (m < 1)
        throw std::invalid_argument("replication count must be positive");
    config.validate();
    instance.validate();

    batch_results batch;
    batch.results.resize(static_cast<std::size_t>(m));

    int threads = options.threads;
    if (threads <= 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<int>(std::min<std::int64_t>(threads, m));

    std::atomic<std::int64_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    std::int64_t failed_stream = -1;

    const auto worker = [&] {
        for (;;) {
            const std::int64_t i = next.fetch_add(1);
            if (i >= m) return;
            if (first_error) return;  // another stream already failed
            try {
                run_options opts;
                opts.record_trajectory = i < options.trajectory_reps;
                batch.results[static_cast<std::size_t>(i)] =
                    run_experiment(config, instance, static_cast<std::uint64_t>(i), opts);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) {
                    first_error = std::current_exception();
                    failed_stream = i;
                }
                return;
            }
        }
    };

    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    if (first_error) {
        try {
            std::rethrow_exception(first_error);
        } catch (const std::exception& e) {
            throw std::runtime_error("replication on stream " + std::to_string(failed_stream) +
                                     " failed: " + e.what());
        }
    }

    for (experiment_result& r : batch.results)
        if (r.declared_best.has_value())
            r.correct = is_best_arm(instance, *r.declared_best);

    batch.report = fold_report(config, instance, batch.results);
    return batch;
}

double aggregate_fdr(const std::vector<experiment_result>& results,
                     const std::map<arm_pair, bool>& is_null) {
    if (results.empty()) return 0.0;
    double total = 0.0;
    for (const experiment_result& r : results)
        total += false_discovery_proportion(is_null, r.discoveries);
    return total / static_cast<double>(results.size());
}

void emit_results(const batch_results& batch, const engine_config& config,
                  const problem_instance& instance, const std::string& out_dir,
                  bool plotdata) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec)
        throw std::runtime_error("cannot create output directory '" + out_dir +
                                 "': " + ec.message());

    const batch_report& report = batch.report;
    json summary;
    summary["replications"] = report.replications;
    summary["misidentification_rate"] = report.misidentification_rate;
    summary["mean_stop_step"] = report.mean_stop_step;
    summary["median_stop_step"] = report.median_stop_step;
    summary["empirical_fdr"] = report.empirical_fdr;
    summary["anytime_crossing_rate"] = report.anytime_crossing_rate;
    summary["stop_reasons"] = {{"policy_certificate", report.stops_certificate},
                               {"discovery", report.stops_discovery},
                               {"budget", report.stops_budget}};
    summary["config"] = config_echo(config);
    summary["instance"] = {{"label", instance.label}, {"arms", instance.num_arms()}};
    write_file(fs::path(out_dir) / "summary.json", summary.dump(2) + "\n");

    std::string csv = "replication,declared_best,correct,stop_reason,stop_step,rounds,tests,"
                      "discoveries,final_p,final_wealth";
    for (int a = 0; a < instance.num_arms(); ++a) csv += ",n_arm_" + std::to_string(a);
    csv += "\n";
    for (const experiment_result& r : batch.results) {
        csv += std::to_string(r.stream_id) + ",";
        csv += (r.declared_best ? std::to_string(*r.declared_best) : std::string{}) + ",";
        csv += (r.correct ? (*r.correct ? "1" : "0") : std::string{}) + ",";
        csv += std::string(stop_reason_name(r.reason)) + ",";
        csv += std::to_string(r.stop_step) + "," + std::to_string(r.rounds) + ",";
        csv += std::to_string(r.tests_performed) + ",";
        csv += std::to_string(r.discoveries.size()) + ",";
        csv += fmt(r.final_p) + "," + fmt(r.final_wealth);
        for (const std::int64_t n : r.per_arm_counts) csv += "," + std::to_string(n);
        csv += "\n";
    }
    write_file(fs::path(out_dir) / "replications.csv", csv);

    std::string plot;
    if (plotdata) plot = "replication,step,series,value\n";
    for (const experiment_result& r : batch.results) {
        if (!r.trajectory_recorded) continue;
        std::string traj = "round,step,arms,p_anytime,alpha_t,wealth,rejected\n";
        for (const round_record& row : r.trajectory) {
            std::string arms;
            for (int a : row.arms_drawn) {
                if (!arms.empty()) arms += ';';
                arms += std::to_string(a);
            }
            traj += std::to_string(row.round) + "," + std::to_string(row.step) + "," + arms +
                    "," + fmt(row.p_anytime) + "," + fmt(row.alpha_t) + "," + fmt(row.wealth) +
                    "," + (row.rejected ? "1" : "0") + "\n";
            if (plotdata) {
                const std::string prefix =
                    std::to_string(r.stream_id) + "," + std::to_string(row.step) + ",";
                plot += prefix + "p_anytime," + fmt(row.p_anytime) + "\n";
                plot += prefix + "alpha_t," + fmt(row.alpha_t) + "\n";
                plot += prefix + "wealth," + fmt(row.wealth) + "\n";
            }
        }
        write_file(fs::path(out_dir) / ("trajectory_" + std::to_string(r.stream_id) + ".csv"),
                   traj);
    }
    if (plotdata) write_file(fs::path(out_dir) / "plotdata.csv", plot);
}

std::vector<policy_row> compare_policies(const engine_config& base,
                                         const problem_instance& instance,
                                         const std::vector<policy_kind>& policies,
                                         std::int64_t m, const batch_options& options) {
    if (policies.empty())
        throw std::invalid_argument("compare_policies needs at least one policy");
    std::vector<policy_row> rows;
    rows.reserve(policies.size());
    for (policy_kind p : policies) {
        engine_config config = base;
        config.policy = p;
        const batch_results batch = run_replications(config, instance, m, options);
        rows.push_back({p, batch.report.misidentification_rate, batch.report.median_stop_step,
                        batch.report.mean_stop_step});
    }
    return rows;
}

}  // namespace adaptest
