#include "nlos/dynamics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>

namespace nlos {

void IntegratorConfig::validate() const {
    if (!(tau > 0.0 && tau <= 0.1)) throw std::invalid_argument("integrator: tau must lie in (0, 0.1]");
    if (!(horizon >= 0.0) || !std::isfinite(horizon)) throw std::invalid_argument("integrator: horizon must be >= 0");
    if (alpha != 1.0) throw std::invalid_argument("integrator: alpha is fixed to 1");
    if (adaptive && !(adaptive_tol > 0.0)) throw std::invalid_argument("integrator: adaptive_tol must be > 0");
}

namespace {

void euler_update(NetworkState& state, const StateDerivative& d, double h) {
    state.z += h * d.dz;
    state.mu += h * d.dmu;
    state.lambda += h * d.dlambda;
    state.time += h;
}

TrajectorySample sample(const NetworkState& state, const StateDerivative& d, int k, Eigen::Index L) {
    return TrajectorySample{state.time, state.z[0], state.z.segment(1, k), state.z.segment(1 + k, L),
                            d.inf_norm()};
}

double state_distance(const NetworkState& a, const NetworkState& b) {
    double n = (a.z - b.z).lpNorm<Eigen::Infinity>();
    if (a.mu.size()) n = std::max(n, (a.mu - b.mu).lpNorm<Eigen::Infinity>());
    if (a.lambda.size()) n = std::max(n, (a.lambda - b.lambda).lpNorm<Eigen::Infinity>());
    return n;
}

double state_scale(const NetworkState& a) {
    double n = a.z.lpNorm<Eigen::Infinity>();
    if (a.mu.size()) n = std::max(n, a.mu.lpNorm<Eigen::Infinity>());
    if (a.lambda.size()) n = std::max(n, a.lambda.lpNorm<Eigen::Infinity>());
    return n;
}

void check_dims(const NetworkState& s, const ProblemInstance& inst) {
    const auto& d = inst.dims();
    if (static_cast<std::size_t>(s.z.size()) != d.N || static_cast<std::size_t>(s.mu.size()) != d.K ||
        static_cast<std::size_t>(s.lambda.size()) != d.M)
        throw std::invalid_argument("network state dimensions do not match the problem");
}

void integrate_fixed(NetworkState& state, const ProblemInstance& inst, const IntegratorConfig& config,
                     SolveResult& out) {
    const int k = inst.dimension();
    const auto L = static_cast<Eigen::Index>(inst.sensor_count());
    const auto total = static_cast<std::size_t>(std::llround(config.horizon / config.tau));
    const std::size_t stride =
        config.record_stride > 0.0
            ? std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(config.record_stride / config.tau)))
            : 0;
    const double start = state.time;

    StateDerivative d;
    for (std::size_t n = 0; n < total; ++n) {
        rhs_into(state, inst, d);
        if (stride && n % stride == 0) out.trajectory.push_back(sample(state, d, k, L));
        euler_update(state, d, config.tau);
        state.time = start + static_cast<double>(n + 1) * config.tau;
        ++out.steps;
    }
    rhs_into(state, inst, d);
    if (stride) out.trajectory.push_back(sample(state, d, k, L));
}

void integrate_adaptive(NetworkState& state, const ProblemInstance& inst, const IntegratorConfig& config,
                        SolveResult& out) {
    constexpr double kMaxStep = 0.1;
    constexpr double kMinStep = 1e-10;
    const int k = inst.dimension();
    const auto L = static_cast<Eigen::Index>(inst.sensor_count());
    const double end = state.time + config.horizon;
    const double stride = config.record_stride;
    double next_record = state.time;
    double h = config.tau;

    StateDerivative d0;
    StateDerivative d1;
    while (true) {
        rhs_into(state, inst, d0);
        if (stride > 0.0 && state.time >= next_record - 1e-12) {
            out.trajectory.push_back(sample(state, d0, k, L));
            next_record += stride;
        }
        if (state.time >= end - 1e-12) break;

        double target = end;
        if (stride > 0.0) target = std::min(target, next_record);
        const double h_try = std::min(h, target - state.time);

        NetworkState full = state;
        euler_update(full, d0, h_try);
        NetworkState half = state;
        euler_update(half, d0, 0.5 * h_try);
        rhs_into(half, inst, d1);
        euler_update(half, d1, 0.5 * h_try);

        const double err = state_distance(full, half) / (1.0 + state_scale(half));
        if (err <= config.adaptive_tol || h_try <= kMinStep) {
            state = std::move(half);
            if (std::abs(state.time - target) < 1e-12) state.time = target;
            ++out.steps;
        }
        const double factor = err > 0.0 ? 0.9 * std::sqrt(config.adaptive_tol / err) : 2.0;
        h = std::clamp(h_try * std::clamp(factor, 0.2, 2.0), kMinStep, kMaxStep);
    }
    if (stride > 0.0 && (out.trajectory.empty() || out.trajectory.back().time < state.time))
        out.trajectory.push_back(sample(state, d0, k, L));
}

}  // namespace

NetworkState step(const NetworkState& state, const ProblemInstance& inst, const IntegratorConfig& config) {
    config.validate();
    check_dims(state, inst);
    StateDerivative d;
    rhs_into(state, inst, d);
    NetworkState next = state;
    euler_update(next, d, config.tau);
    return next;
}

SolveResult solve(const ProblemInstance& inst, const IntegratorConfig& config, std::optional<NetworkState> init) {
    config.validate();
    SolveResult out;
    NetworkState state = init ? std::move(*init) : NetworkState::zeros(inst.dims());
    check_dims(state, inst);

    const auto began = std::chrono::steady_clock::now();
    try {
        if (config.adaptive)
            integrate_adaptive(state, inst, config, out);
        else
            integrate_fixed(state, inst, config, out);
        out.kkt = kkt::residuals(state, inst, config.alpha);
    } catch (const DynamicsFault& fault) {
        out.status = RunStatus::Faulted;
        out.fault = fault.what();
    }
    out.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - began).count();
    out.final_state = std::move(state);
    return out;
}

void write_trajectory_csv(std::ostream& os, const std::vector<TrajectorySample>& trajectory) {
    const auto k = trajectory.empty() ? 0 : trajectory.front().x.size();
    const auto L = trajectory.empty() ? 0 : trajectory.front().d.size();
    os << "time_constant,t0";
    for (Eigen::Index a = 0; a < k; ++a) os << ",x" << a + 1;
    for (Eigen::Index i = 0; i < L; ++i) os << ",d" << i + 1;
    os << ",kkt_inf_norm\n";

    const auto flags = os.flags();
    const auto precision = os.precision();
    os << std::setprecision(12);
    for (const auto& s : trajectory) {
        os << s.time << ',' << s.t0;
        for (Eigen::Index a = 0; a < k; ++a) os << ',' << s.x[a];
        for (Eigen::Index i = 0; i < L; ++i) os << ',' << s.d[i];
        os << ',' << s.kkt_inf_norm << '\n';
    }
    os.flags(flags);
    os.precision(precision);
}

}  // namespace nlos
