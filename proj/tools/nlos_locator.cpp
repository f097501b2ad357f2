#include "nlos/config.hpp"
#include "nlos/report.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

namespace {

struct CommonOptions {
    std::string config;
    std::optional<std::size_t> trials;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> workers;
    std::string out = "out";
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--config", opt.config, "experiment file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--trials", opt.trials, "Monte-Carlo trials (overrides the file)");
    cmd->add_option("--seed", opt.seed, "base seed (overrides the file)");
    cmd->add_option("--workers", opt.workers, "worker threads, 0 for one per core");
    cmd->add_option("--out", opt.out, "output directory");
}

nlos::ExperimentConfig load(const CommonOptions& opt) {
    nlos::ExperimentConfig cfg = nlos::load_config(opt.config);
    if (opt.trials) cfg.scenario.trials = *opt.trials;
    if (opt.seed) cfg.scenario.seed = *opt.seed;
    if (opt.workers) cfg.workers = *opt.workers;
    return cfg;
}

void print_summary(const std::vector<nlos::BenchmarkResult>& results) {
    std::cout << std::setprecision(6);
    for (const auto& r : results) {
        std::cout << nlos::sweep_param_name(r.param) << "=" << r.value << "  rmse " << r.rmse;
        if (!r.baseline_records.empty()) std::cout << "  baseline " << r.baseline_rmse;
        if (r.crlb) std::cout << "  crlb " << *r.crlb;
        std::cout << "  faults " << r.fault_count << "/" << r.records.size();
        if (r.flagged) std::cout << "  FLAGGED";
        std::cout << '\n';
    }
}

int run_command(const CommonOptions& opt, const nlos::Sweep& sweep) {
    const auto cfg = load(opt);
    const auto results = nlos::run_benchmark(cfg, sweep);
    nlos::write_benchmark_outputs(opt.out, results);
    print_summary(results);
    std::cout << "wrote " << opt.out << "/{records,summary,cdf}.csv\n";
    return 0;
}

int trace_command(const CommonOptions& opt, std::size_t trial) {
    const auto cfg = load(opt);
    auto t = nlos::run_trial(cfg, trial, nlos::SweepParam::None, 0.0, true);
    if (!t.measurements) {
        std::cerr << "trial " << trial << " rejected: " << t.rejection << '\n';
        return 1;
    }
    std::filesystem::create_directories(opt.out);
    const auto path = std::filesystem::path(opt.out) / ("trace_" + std::to_string(trial) + ".csv");
    std::ofstream os(path);
    nlos::write_trajectory_csv(os, t.robust->trajectory);
    if (t.robust->status == nlos::RunStatus::Faulted) std::cerr << "faulted: " << t.robust->fault << '\n';
    std::cout << "wrote " << path.string() << " (" << t.robust->trajectory.size() << " samples)\n";
    return t.robust->status == nlos::RunStatus::Converged ? 0 : 1;
}

int timing_command(const std::vector<std::size_t>& sizes, std::size_t reps, std::size_t steps, const std::string& out) {
    const auto table = nlos::timing_scaling(sizes, reps, steps);
    std::filesystem::create_directories(out);
    std::ofstream os(std::filesystem::path(out) / "timing.csv");
    os << "sensors,mean_step_seconds\n" << std::setprecision(6);
    std::cout << std::setprecision(6);
    for (const auto& row : table.rows) {
        os << row.sensor_count << ',' << row.mean_step_seconds << '\n';
        std::cout << "L=" << row.sensor_count << "  " << row.mean_step_seconds * 1e6 << " us/step\n";
    }
    if (table.slope) std::cout << "log-log slope " << *table.slope << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"TDOA source localization under NLOS bias with a projection neural network"};
    app.require_subcommand(1);

    CommonOptions run_opt;
    auto* run = app.add_subcommand("run", "Monte-Carlo benchmark at the configured point");
    add_common(run, run_opt);

    CommonOptions sweep_opt;
    std::string param;
    std::vector<double> values;
    auto* sweep = app.add_subcommand("sweep", "benchmark over a grid of sigma or NLOS bound b");
    add_common(sweep, sweep_opt);
    sweep->add_option("--param", param, "swept parameter")->required()->check(CLI::IsMember({"sigma", "b"}));
    sweep->add_option("--values", values, "comma-separated grid")->required()->delimiter(',');

    CommonOptions trace_opt;
    std::size_t trial = 0;
    auto* trace = app.add_subcommand("trace", "convergence trace of one trial");
    add_common(trace, trace_opt);
    trace->add_option("--trial", trial, "0-based trial index")->required();

    std::vector<std::size_t> sizes{10, 20, 40, 80};
    std::size_t reps = 3;
    std::size_t steps = 20000;
    std::string timing_out = "out";
    auto* timing = app.add_subcommand("timing", "per-step cost versus sensor count");
    timing->add_option("--sizes", sizes, "sensor counts")->delimiter(',');
    timing->add_option("--reps", reps, "repetitions per size");
    timing->add_option("--steps", steps, "Euler steps per repetition");
    timing->add_option("--out", timing_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return run_command(run_opt, {});
        if (*sweep)
            return run_command(sweep_opt,
                               {param == "sigma" ? nlos::SweepParam::Sigma : nlos::SweepParam::NlosBound, values});
        if (*trace) return trace_command(trace_opt, trial);
        if (*timing) return timing_command(sizes, reps, steps, timing_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
