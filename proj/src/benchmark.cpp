#include "nlos/bench.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <numeric>
#include <random>
#include <thread>

namespace nlos {

namespace {

enum SeedStream : std::uint64_t { kGeometryStream = 1, kNoiseStream = 2, kNlosStream = 3 };

constexpr double kFlagFraction = 0.10;

RunRecord make_record(std::size_t trial, SolverKind kind, const Deployment& deployment,
                      const SolveResult& result) {
    RunRecord r;
    r.trial_index = trial;
    r.solver = kind;
    r.deployment = deployment;
    r.truth = deployment.source();
    r.steps = result.steps;
    r.wall_time = result.wall_time;
    r.status = result.status;
    r.fault = result.fault;
    if (result.status == RunStatus::Converged) {
        r.estimate = result.position_estimate(deployment.dimension());
        r.onset_estimate = result.onset_estimate();
        r.error = (*r.estimate - r.truth).norm();
        r.kkt = result.kkt;
    }
    return r;
}

RunRecord rejected_record(std::size_t trial, SolverKind kind, const Deployment& deployment,
                          const std::string& why) {
    RunRecord r;
    r.trial_index = trial;
    r.solver = kind;
    r.deployment = deployment;
    r.truth = deployment.source();
    r.status = RunStatus::Faulted;
    r.fault = why;
    return r;
}

std::size_t count_faults(const std::vector<RunRecord>& records) {
    return static_cast<std::size_t>(
        std::count_if(records.begin(), records.end(), [](const RunRecord& r) { return !r.converged(); }));
}

}  // namespace

const char* sweep_param_name(SweepParam param) {
    switch (param) {
        case SweepParam::None: return "none";
        case SweepParam::Sigma: return "sigma";
        case SweepParam::NlosBound: return "b";
    }
    return "?";
}

const char* solver_name(SolverKind kind) {
    return kind == SolverKind::RobustL1 ? "l1-pnn" : "l2-baseline";
}

double rmse(const std::vector<RunRecord>& records) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& r : records) {
        if (!r.converged()) continue;
        sum += r.error * r.error;
        ++n;
    }
    return n ? std::sqrt(sum / static_cast<double>(n)) : 0.0;
}

std::vector<std::pair<double, double>> empirical_cdf(const std::vector<RunRecord>& records) {
    std::vector<double> errors;
    for (const auto& r : records)
        if (r.converged()) errors.push_back(r.error);
    std::sort(errors.begin(), errors.end());
    std::vector<std::pair<double, double>> cdf;
    const auto n = static_cast<double>(errors.size());
    for (std::size_t i = 0; i < errors.size(); ++i) {
        // Ties collapse onto the last occurrence.
        if (i + 1 < errors.size() && errors[i + 1] == errors[i]) continue;
        cdf.emplace_back(errors[i], static_cast<double>(i + 1) / n);
    }
    return cdf;
}

double cdf_at(const std::vector<std::pair<double, double>>& cdf, double level) {
    auto it = std::upper_bound(cdf.begin(), cdf.end(), level,
                               [](double v, const std::pair<double, double>& p) { return v < p.first; });
    if (it == cdf.begin()) return 0.0;
    return std::prev(it)->second;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index),
                      static_cast<std::uint32_t>(index >> 32)};
    std::array<std::uint32_t, 2> out{};
    seq.generate(out.begin(), out.end());
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

Deployment trial_deployment(const ScenarioSpec& spec, std::size_t trial) {
    if (spec.kind == ScenarioKind::DeterministicPerimeter)
        return build_deterministic(spec.sensor_count, spec.region_side, *spec.source, spec.onset_time,
                                   spec.propagation_speed);
    const int k = spec.source ? static_cast<int>(spec.source->size()) : 2;
    Deployment drawn = build_random(spec.sensor_count, spec.region_side,
                                    derive_seed(spec.seed, kGeometryStream, trial), k, spec.onset_time,
                                    spec.propagation_speed);
    if (!spec.source) return drawn;
    // Fixed source with random sensors.
    return Deployment(drawn.sensors(), *spec.source, spec.onset_time, spec.propagation_speed);
}

NoiseSpec trial_noise(const ScenarioSpec& spec, std::size_t trial, double sigma) {
    if (!(spec.redraw_nlos && spec.kind == ScenarioKind::RandomSquare)) return make_noise(spec, sigma);

    std::vector<std::size_t> order(spec.sensor_count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(derive_seed(spec.seed, kNlosStream, trial));
    std::shuffle(order.begin(), order.end(), rng);
    NoiseSpec noise(spec.sensor_count, sigma);
    for (std::size_t n = 0; n < spec.nlos_pattern.size(); ++n) noise.set_nlos(order[n], spec.nlos_pattern[n].second);
    return noise;
}

SolveResult l2_baseline_solve(const ProblemInstance& inst, const IntegratorConfig& config) {
    return solve(inst.with_loss(Loss::Squared), config);
}

TrialOutcome run_trial(const ExperimentConfig& config, std::size_t trial, SweepParam param, double value,
                       bool keep_trajectory) {
    ScenarioSpec spec = config.scenario;
    double sigma = config.sigma;
    if (param == SweepParam::Sigma) sigma = value;
    if (param == SweepParam::NlosBound)
        for (auto& entry : spec.nlos_pattern) entry.second = value;

    TrialOutcome out{trial_deployment(spec, trial), std::nullopt, std::nullopt, std::nullopt, {}};
    const NoiseSpec noise = trial_noise(spec, trial, sigma);
    try {
        out.measurements = generate_measurements(out.deployment, noise, derive_seed(spec.seed, kNoiseStream, trial));
    } catch (const MeasurementError& e) {
        out.rejection = e.what();
        return out;
    }

    IntegratorConfig integrator = config.solver.integrator;
    if (!keep_trajectory) integrator.record_stride = 0.0;
    const ProblemInstance inst(*out.measurements, out.deployment, config.solver.gamma, config.solver.rho);
    out.robust = solve(inst, integrator);
    if (config.solver.run_baseline) out.baseline = l2_baseline_solve(inst, integrator);
    return out;
}

std::vector<BenchmarkResult> run_benchmark(const ExperimentConfig& config, const Sweep& sweep) {
    config.scenario.validate();
    config.solver.integrator.validate();

    std::vector<double> values = sweep.values;
    if (sweep.param == SweepParam::None) values = {config.sigma};
    if (values.empty()) throw std::invalid_argument("run_benchmark: empty sweep grid");

    std::size_t workers = config.workers ? config.workers : std::thread::hardware_concurrency();
    workers = std::max<std::size_t>(1, std::min(workers, config.scenario.trials));

    std::vector<BenchmarkResult> results;
    for (const double value : values) {
        const std::size_t trials = config.scenario.trials;
        std::vector<std::optional<RunRecord>> robust(trials);
        std::vector<std::optional<RunRecord>> baseline(trials);
        std::vector<std::optional<double>> bound(trials);

        ScenarioSpec point_spec = config.scenario;
        double point_sigma = config.sigma;
        if (sweep.param == SweepParam::Sigma) point_sigma = value;
        if (sweep.param == SweepParam::NlosBound)
            for (auto& entry : point_spec.nlos_pattern) entry.second = value;
        const bool los = std::all_of(point_spec.nlos_pattern.begin(), point_spec.nlos_pattern.end(),
                                     [](const auto& e) { return e.second == 0.0; });

        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t n = next++; n < trials; n = next++) {
                TrialOutcome t = run_trial(config, n, sweep.param, value);
                if (!t.measurements) {
                    robust[n] = rejected_record(n, SolverKind::RobustL1, t.deployment, t.rejection);
                    if (config.solver.run_baseline)
                        baseline[n] = rejected_record(n, SolverKind::BaselineL2, t.deployment, t.rejection);
                } else {
                    robust[n] = make_record(n, SolverKind::RobustL1, t.deployment, *t.robust);
                    if (t.baseline) baseline[n] = make_record(n, SolverKind::BaselineL2, t.deployment, *t.baseline);
                }
                if (los && point_sigma > 0.0) {
                    try {
                        bound[n] = crlb_los(t.deployment, point_sigma);
                    } catch (const std::domain_error&) {
                    }
                }
            }
        };
        std::vector<std::thread> pool;
        for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
        worker();
        for (auto& th : pool) th.join();

        BenchmarkResult res;
        res.scenario = point_spec;
        res.param = sweep.param;
        res.value = value;
        for (auto& r : robust) res.records.push_back(std::move(*r));
        for (auto& r : baseline)
            if (r) res.baseline_records.push_back(std::move(*r));
        res.rmse = rmse(res.records);
        res.baseline_rmse = rmse(res.baseline_records);
        res.cdf = empirical_cdf(res.records);
        res.baseline_cdf = empirical_cdf(res.baseline_records);
        res.fault_count = count_faults(res.records);
        res.baseline_fault_count = count_faults(res.baseline_records);
        res.flagged = static_cast<double>(res.fault_count) > kFlagFraction * static_cast<double>(trials);
        if (los && point_sigma > 0.0) {
            double sum = 0.0;
            std::size_t n = 0;
            for (const auto& b : bound)
                if (b) {
                    sum += *b * *b;
                    ++n;
                }
            if (n) res.crlb = std::sqrt(sum / static_cast<double>(n));
        }
        results.push_back(std::move(res));
    }
    return results;
}

}  // namespace nlos
