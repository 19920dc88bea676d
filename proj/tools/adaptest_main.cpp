#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "adaptest/config.hpp"
#include "adaptest/difficulty.hpp"
#include "adaptest/harness.hpp"

namespace {

using namespace adaptest;
namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

// Instance paths inside a config file resolve against the config file's
// directory, so a config bundle can be moved around as a unit.
std::string resolve_instance_path(const std::string& config_path, const std::string& instance) {
    fs::path p(instance);
    if (p.is_absolute()) return instance;
    return (fs::path(config_path).parent_path() / p).string();
}

struct cli_options {
    std::string config_path;
    std::string instance_path;
    std::string out_dir = "out";
    std::string format = "csv";
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::int64_t reps = 0;
    bool reps_set = false;
    std::int64_t trajectories = -1;
    double epsilon_edge = -1.0;
    bool stop_on_discovery = false;
    bool couple_levels = false;
    bool plotdata = false;
    int threads = 0;
};

run_spec load_spec(const cli_options& opt) {
    run_spec spec = load_run_spec(opt.config_path);
    if (!opt.instance_path.empty())
        spec.instance_path = opt.instance_path;
    else
        spec.instance_path = resolve_instance_path(opt.config_path, spec.instance_path);
    if (opt.seed_set) spec.engine.seed = opt.seed;
    if (opt.reps_set) spec.reps = opt.reps;
    if (opt.trajectories >= 0) spec.trajectories = opt.trajectories;
    if (opt.epsilon_edge >= 0.0) spec.engine.epsilon_edge = opt.epsilon_edge;
    if (opt.stop_on_discovery) spec.engine.stop_on_discovery = true;
    if (opt.couple_levels) spec.engine.couple_levels = true;
    return spec;
}

void print_report(const batch_report& report, const std::string& format) {
    if (format == "json") {
        json j;
        j["replications"] = report.replications;
        j["misidentification_rate"] = report.misidentification_rate;
        j["mean_stop_step"] = report.mean_stop_step;
        j["median_stop_step"] = report.median_stop_step;
        j["empirical_fdr"] = report.empirical_fdr;
        j["anytime_crossing_rate"] = report.anytime_crossing_rate;
        j["stop_reasons"] = {{"policy_certificate", report.stops_certificate},
                             {"discovery", report.stops_discovery},
                             {"budget", report.stops_budget}};
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::cout << "metric,value\n"
              << "replications," << report.replications << "\n"
              << "misidentification_rate," << fmt(report.misidentification_rate) << "\n"
              << "mean_stop_step," << fmt(report.mean_stop_step) << "\n"
              << "median_stop_step," << fmt(report.median_stop_step) << "\n"
              << "empirical_fdr," << fmt(report.empirical_fdr) << "\n"
              << "anytime_crossing_rate," << fmt(report.anytime_crossing_rate) << "\n"
              << "stops_certificate," << report.stops_certificate << "\n"
              << "stops_discovery," << report.stops_discovery << "\n"
              << "stops_budget," << report.stops_budget << "\n";
}

int cmd_run(const cli_options& opt) {
    const run_spec spec = load_spec(opt);
    const problem_instance instance = load_instance(spec.instance_path);
    batch_options options;
    options.threads = opt.threads;
    options.trajectory_reps = spec.trajectories;
    const batch_results batch = run_replications(spec.engine, instance, spec.reps, options);
    emit_results(batch, spec.engine, instance, opt.out_dir, opt.plotdata);
    print_report(batch.report, opt.format);
    return 0;
}

int cmd_compare(const cli_options& opt) {
    const run_spec spec = load_spec(opt);
    const problem_instance instance = load_instance(spec.instance_path);
    batch_options options;
    options.threads = opt.threads;
    const auto rows =
        compare_policies(spec.engine, instance, spec.policies, spec.reps, options);

    std::string csv = "policy,misidentification_rate,median_stop_step,mean_stop_step\n";
    json rows_json = json::array();
    for (const policy_row& row : rows) {
        csv += std::string(policy_name(row.policy)) + "," + fmt(row.misidentification_rate) +
               "," + fmt(row.median_stop_step) + "," + fmt(row.mean_stop_step) + "\n";
        rows_json.push_back({{"policy", policy_name(row.policy)},
                             {"misidentification_rate", row.misidentification_rate},
                             {"median_stop_step", row.median_stop_step},
                             {"mean_stop_step", row.mean_stop_step}});
    }
    if (opt.format == "json")
        std::cout << rows_json.dump(2) << "\n";
    else
        std::cout << csv;

    if (!opt.out_dir.empty() && opt.out_dir != "-") {
        std::error_code ec;
        fs::create_directories(opt.out_dir, ec);
        if (ec)
            throw std::runtime_error("cannot create output directory '" + opt.out_dir +
                                     "': " + ec.message());
        std::ofstream out(fs::path(opt.out_dir) / "compare.csv", std::ios::binary);
        if (!out) throw std::runtime_error("cannot write compare.csv in '" + opt.out_dir + "'");
        out << csv;
    }
    return 0;
}

int cmd_complexity(const std::string& instance_path, const std::string& format) {
    const problem_instance instance = load_instance(instance_path);
    const difficulty_report report = complexity_terms(compute_gaps(instance));
    if (format == "json") {
        json j;
        j["gaps"] = report.gaps;
        j["total_complexity"] = report.total_complexity;
        j["top_term"] = report.top_term;
        j["entropy_surrogate"] = report.entropy_surrogate;
        j["log_factor"] = report.log_factor;
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::string gaps;
    for (double g : report.gaps) {
        if (!gaps.empty()) gaps += ';';
        gaps += fmt(g);
    }
    std::cout << "metric,value\n"
              << "gaps," << gaps << "\n"
              << "total_complexity," << fmt(report.total_complexity) << "\n"
              << "top_term," << fmt(report.top_term) << "\n"
              << "entropy_surrogate," << fmt(report.entropy_surrogate) << "\n"
              << "log_factor," << fmt(report.log_factor) << "\n";
    return 0;
}

struct pvalue_options {
    std::int64_t n0 = 0;
    std::int64_t nk = 0;
    double mean0 = 0.0;
    double meank = 0.0;
    double sigma = 1.0;
    double sigma0 = -1.0;
    double sigmak = -1.0;
    std::string bound = "adaptive_lil";
    std::string format = "csv";
};

int cmd_pvalue(const pvalue_options& opt) {
    arm_stats control{0, opt.n0, opt.mean0 * static_cast<double>(opt.n0)};
    arm_stats challenger{1, opt.nk, opt.meank * static_cast<double>(opt.nk)};
    const double s0 = opt.sigma0 > 0.0 ? opt.sigma0 : opt.sigma;
    const double sk = opt.sigmak > 0.0 ? opt.sigmak : opt.sigma;
    const double p =
        single_comparison_pvalue(control, challenger, s0, sk, bound_from_name(opt.bound));
    if (opt.format == "json")
        std::cout << json{{"p", p}}.dump() << "\n";
    else
        std::cout << fmt(p) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"adaptest: adaptive best-arm experiments with always-valid inference"};
    app.require_subcommand(1);

    cli_options opt;
    pvalue_options pv;
    std::string complexity_instance;
    std::string complexity_format = "csv";

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", opt.config_path, "experiment config (JSON)")
            ->required();
        cmd->add_option("--instance", opt.instance_path,
                        "instance file overriding the config's reference");
        cmd->add_option("--seed", opt.seed, "base RNG seed override")
            ->each([&](const std::string&) { opt.seed_set = true; });
        cmd->add_option("--reps", opt.reps, "replication count override")
            ->check(CLI::PositiveNumber)
            ->each([&](const std::string&) { opt.reps_set = true; });
        cmd->add_option("--threads", opt.threads, "worker threads (0 = all cores)");
        cmd->add_option("--format", opt.format, "stdout report format")
            ->check(CLI::IsMember({"csv", "json"}));
    };

    CLI::App* run = app.add_subcommand("run", "run one experiment batch and write artifacts");
    add_common(run);
    run->add_option("--out", opt.out_dir, "output directory (default: out)");
    run->add_option("--trajectories", opt.trajectories,
                    "how many replications keep full trajectories")
        ->check(CLI::NonNegativeNumber);
    run->add_option("--epsilon-edge", opt.epsilon_edge,
                    "control handicap added inside policy bounds")
        ->check(CLI::NonNegativeNumber);
    run->add_flag("--stop-on-discovery", opt.stop_on_discovery,
                  "stop a run at its first discovery");
    run->add_flag("--couple-levels", opt.couple_levels,
                  "drive policy confidence levels from the alpha-investing level");
    run->add_flag("--plotdata", opt.plotdata, "also write plotdata.csv (long format)");

    CLI::App* compare =
        app.add_subcommand("compare", "run the configured policies on matched streams");
    add_common(compare);
    compare->add_option("--out", opt.out_dir, "directory for compare.csv ('-' = stdout only)");

    CLI::App* complexity =
        app.add_subcommand("complexity", "print instance difficulty terms");
    complexity->add_option("--instance", complexity_instance, "instance file (JSON)")
        ->required();
    complexity->add_option("--format", complexity_format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));

    CLI::App* pvalue =
        app.add_subcommand("pvalue", "p-value for one control/challenger comparison");
    pvalue->add_option("--n0", pv.n0, "control sample count")->required()->check(CLI::PositiveNumber);
    pvalue->add_option("--mean0", pv.mean0, "control empirical mean")->required();
    pvalue->add_option("--nk", pv.nk, "challenger sample count")
        ->required()
        ->check(CLI::PositiveNumber);
    pvalue->add_option("--meank", pv.meank, "challenger empirical mean")->required();
    pvalue->add_option("--sigma", pv.sigma, "shared sub-gaussian scale (default 1)");
    pvalue->add_option("--sigma0", pv.sigma0, "control scale override");
    pvalue->add_option("--sigmak", pv.sigmak, "challenger scale override");
    pvalue->add_option("--bound", pv.bound, "bound family")
        ->check(CLI::IsMember({"fixed_sample", "adaptive_lil"}));
    pvalue->add_option("--format", pv.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);  // --help and friends
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (run->parsed()) return cmd_run(opt);
        if (compare->parsed()) return cmd_compare(opt);
        if (complexity->parsed()) return cmd_complexity(complexity_instance, complexity_format);
        if (pvalue->parsed()) return cmd_pvalue(pv);
        std::cerr << "no subcommand selected\n";
        return 1;
    } catch (const config_error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
