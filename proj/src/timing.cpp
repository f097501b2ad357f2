#include "nlos/bench.hpp"

#include <chrono>
#include <cmath>

namespace nlos {

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("log_log_slope: need >= 2 paired points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

TimingTable timing_scaling(const std::vector<std::size_t>& sensor_counts, std::size_t repetitions,
                           std::size_t steps, double tau, std::uint64_t seed) {
    TimingTable table;
    if (repetitions == 0 || steps == 0) return table;

    IntegratorConfig config;
    config.tau = tau;
    config.validate();

    for (const std::size_t L : sensor_counts) {
        const Deployment dep = build_random(L, 20.0, seed + L);
        const MeasurementSet m = generate_measurements(dep, NoiseSpec(L, 0.0), seed);
        const ProblemInstance inst(m, dep);

        double total = 0.0;
        // rep 0 is an untimed warm-up.
        for (std::size_t rep = 0; rep <= repetitions; ++rep) {
            // Started at the noiseless equilibrium so long runs stay finite at any L;
            // the arithmetic per step does not depend on the state.
            NetworkState state = NetworkState::zeros(inst.dims());
            state.z = inst.pack_point(dep.source(), dep.onset_time());
            StateDerivative d;
            const auto began = std::chrono::steady_clock::now();
            for (std::size_t n = 0; n < steps; ++n) {
                rhs_into(state, inst, d);
                state.z += tau * d.dz;
                state.mu += tau * d.dmu;
                state.lambda += tau * d.dlambda;
                state.time += tau;
            }
            if (rep > 0) total += std::chrono::duration<double>(std::chrono::steady_clock::now() - began).count();
        }
        table.rows.push_back({L, total / static_cast<double>(repetitions * steps)});
    }
    if (table.rows.size() >= 2) {
        std::vector<double> xs, ys;
        for (const auto& r : table.rows) {
            xs.push_back(static_cast<double>(r.sensor_count));
            ys.push_back(r.mean_step_seconds);
        }
        table.slope = log_log_slope(xs, ys);
    }
    return table;
}

}  // namespace nlos
