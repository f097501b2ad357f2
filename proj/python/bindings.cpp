#include "nlos/bench.hpp"
#include "nlos/config.hpp"
#include "nlos/kkt.hpp"
#include "nlos/report.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace nlos;

namespace {

py::dict kkt_dict(const KktReport& r) {
    py::dict d;
    d["stationarity"] = r.stationarity_inf_norm;
    d["projection_residual"] = r.projection_residual_inf_norm;
    d["equality_residual"] = r.primal_equality_inf_norm;
    d["licq_min_sv"] = r.licq_min_singular_value;
    d["licq_max_sv"] = r.licq_max_singular_value;
    d["active_inequalities"] = r.active_inequality_count;
    return d;
}

std::string csv_of(void (*writer)(std::ostream&, const std::vector<BenchmarkResult>&),
                   const std::vector<BenchmarkResult>& results) {
    std::ostringstream os;
    writer(os, results);
    return os.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Robust TDOA source localization with a projection neural network";

    py::register_exception<MeasurementError>(m, "MeasurementError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::enum_<Loss>(m, "Loss").value("SMOOTHED_L1", Loss::SmoothedL1).value("SQUARED", Loss::Squared);
    py::enum_<RunStatus>(m, "RunStatus")
        .value("CONVERGED", RunStatus::Converged)
        .value("FAULTED", RunStatus::Faulted);

    py::class_<Deployment>(m, "Deployment")
        .def(py::init<Eigen::MatrixXd, Eigen::VectorXd, double, double>(), py::arg("sensors"), py::arg("source"),
             py::arg("onset_time") = 0.1, py::arg("propagation_speed") = 1.0)
        .def_property_readonly("sensors", &Deployment::sensors)
        .def_property_readonly("source", &Deployment::source)
        .def_property_readonly("onset_time", &Deployment::onset_time)
        .def_property_readonly("propagation_speed", &Deployment::propagation_speed)
        .def_property_readonly("sensor_count", &Deployment::sensor_count);

    py::class_<NoiseSpec>(m, "NoiseSpec")
        .def(py::init<std::size_t, double>(), py::arg("sensor_count"), py::arg("sigma"))
        .def("set_nlos", &NoiseSpec::set_nlos, py::arg("sensor"), py::arg("upper"),
             py::return_value_policy::reference_internal)
        .def_readwrite("sigma", &NoiseSpec::sigma)
        .def_readwrite("nlos_upper", &NoiseSpec::nlos_upper);

    py::class_<MeasurementSet>(m, "MeasurementSet")
        .def_readonly("timestamps", &MeasurementSet::timestamps)
        .def_readonly("tdoas", &MeasurementSet::tdoas)
        .def_readonly("noise", &MeasurementSet::noise)
        .def_readonly("nlos", &MeasurementSet::nlos);

    m.def("build_deterministic", &build_deterministic, py::arg("sensor_count"), py::arg("region_side"),
          py::arg("source"), py::arg("onset_time") = 0.1, py::arg("propagation_speed") = 1.0);
    m.def("build_random", &build_random, py::arg("sensor_count"), py::arg("region_side"), py::arg("seed"),
          py::arg("dimension") = 2, py::arg("onset_time") = 0.1, py::arg("propagation_speed") = 1.0);
    m.def("generate_measurements", &generate_measurements, py::arg("deployment"), py::arg("noise"),
          py::arg("seed"));

    py::class_<ProblemInstance>(m, "ProblemInstance")
        .def(py::init<const MeasurementSet&, const Deployment&, double, double, Loss>(), py::arg("measurements"),
             py::arg("deployment"), py::arg("gamma") = ProblemInstance::kDefaultGamma,
             py::arg("rho") = ProblemInstance::kDefaultRho, py::arg("loss") = Loss::SmoothedL1)
        .def(py::init<Eigen::VectorXd, Eigen::MatrixXd, double, double, double, Loss>(), py::arg("timestamps"),
             py::arg("sensors"), py::arg("propagation_speed") = 1.0, py::arg("gamma") = ProblemInstance::kDefaultGamma,
             py::arg("rho") = ProblemInstance::kDefaultRho, py::arg("loss") = Loss::SmoothedL1)
        .def_property_readonly("timestamps", &ProblemInstance::timestamps)
        .def_property_readonly("sensors", &ProblemInstance::sensors)
        .def_property_readonly("dims", [](const ProblemInstance& p) {
            return py::make_tuple(p.dims().N, p.dims().K, p.dims().M);
        })
        .def("pack_point", &ProblemInstance::pack_point, py::arg("x"), py::arg("t0"))
        .def("objective", [](const ProblemInstance& p, const Eigen::VectorXd& z) { return objective(z, p); })
        .def("inequalities", [](const ProblemInstance& p, const Eigen::VectorXd& z) { return eval_inequalities(z, p); })
        .def("equalities", [](const ProblemInstance& p, const Eigen::VectorXd& z) { return eval_equalities(z, p); })
        .def(
            "augmented_lagrangian",
            [](const ProblemInstance& p, const Eigen::VectorXd& z, const Eigen::VectorXd& mu,
               const Eigen::VectorXd& lambda) { return augmented_lagrangian(z, {mu, lambda}, p); },
            py::arg("z"), py::arg("mu"), py::arg("lambda_"))
        .def(
            "gradient",
            [](const ProblemInstance& p, const Eigen::VectorXd& z, const Eigen::VectorXd& mu,
               const Eigen::VectorXd& lambda) { return lagrangian_gradient(z, {mu, lambda}, p); },
            py::arg("z"), py::arg("mu"), py::arg("lambda_"))
        .def(
            "kkt",
            [](const ProblemInstance& p, const Eigen::VectorXd& z, const Eigen::VectorXd& mu,
               const Eigen::VectorXd& lambda) { return kkt_dict(kkt::residuals(z, {mu, lambda}, p)); },
            py::arg("z"), py::arg("mu"), py::arg("lambda_"));

    py::class_<IntegratorConfig>(m, "IntegratorConfig")
        .def(py::init<>())
        .def_readwrite("tau", &IntegratorConfig::tau)
        .def_readwrite("horizon", &IntegratorConfig::horizon)
        .def_readwrite("record_stride", &IntegratorConfig::record_stride)
        .def_readwrite("alpha", &IntegratorConfig::alpha)
        .def_readwrite("adaptive", &IntegratorConfig::adaptive)
        .def_readwrite("adaptive_tol", &IntegratorConfig::adaptive_tol);

    py::class_<SolveResult>(m, "SolveResult")
        .def_property_readonly("z", [](const SolveResult& r) { return r.final_state.z; })
        .def_property_readonly("mu", [](const SolveResult& r) { return r.final_state.mu; })
        .def_property_readonly("lambda_", [](const SolveResult& r) { return r.final_state.lambda; })
        .def_property_readonly("position", [](const SolveResult& r) {
            return r.position_estimate(static_cast<int>(r.final_state.z.size() - 1 - r.final_state.lambda.size()));
        })
        .def_property_readonly("onset_time", &SolveResult::onset_estimate)
        .def_property_readonly("kkt", [](const SolveResult& r) { return kkt_dict(r.kkt); })
        .def_readonly("steps", &SolveResult::steps)
        .def_readonly("status", &SolveResult::status)
        .def_readonly("fault", &SolveResult::fault)
        .def_property_readonly("trajectory", [](const SolveResult& r) {
            std::ostringstream os;
            write_trajectory_csv(os, r.trajectory);
            return os.str();
        });

    m.def(
        "solve", [](const ProblemInstance& inst, const IntegratorConfig& cfg) { return solve(inst, cfg); },
        py::arg("instance"), py::arg("config") = IntegratorConfig{}, py::call_guard<py::gil_scoped_release>());
    m.def("l2_baseline_solve", &l2_baseline_solve, py::arg("instance"), py::arg("config") = IntegratorConfig{},
          py::call_guard<py::gil_scoped_release>());

    m.def(
        "projection_equivalence_check",
        [](double mu, double g, double alpha) {
            const auto c = kkt::projection_equivalence_check(mu, g, alpha);
            return py::make_tuple(c.complementarity_holds, c.projection_holds);
        },
        py::arg("mu"), py::arg("g"), py::arg("alpha") = 1.0);

    m.def("crlb_los", &crlb_los, py::arg("deployment"), py::arg("sigma"));
    m.def(
        "grid_oracle",
        [](const ProblemInstance& inst, double resolution) {
            const auto o = grid_oracle(inst, resolution);
            return py::make_tuple(Eigen::VectorXd(o.position), o.onset_time, o.objective);
        },
        py::arg("instance"), py::arg("resolution"));

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def_readwrite("sigma", &ExperimentConfig::sigma)
        .def_readwrite("workers", &ExperimentConfig::workers)
        .def_property(
            "trials", [](const ExperimentConfig& c) { return c.scenario.trials; },
            [](ExperimentConfig& c, std::size_t n) { c.scenario.trials = n; })
        .def_property(
            "seed", [](const ExperimentConfig& c) { return c.scenario.seed; },
            [](ExperimentConfig& c, std::uint64_t s) { c.scenario.seed = s; })
        .def_property(
            "baseline", [](const ExperimentConfig& c) { return c.solver.run_baseline; },
            [](ExperimentConfig& c, bool b) { c.solver.run_baseline = b; })
        .def_property(
            "integrator", [](const ExperimentConfig& c) { return c.solver.integrator; },
            [](ExperimentConfig& c, const IntegratorConfig& i) { c.solver.integrator = i; });
    m.def("load_config", &load_config, py::arg("path"));
    m.def(
        "parse_config",
        [](const std::string& text) {
            std::istringstream in(text);
            return parse_config(in);
        },
        py::arg("text"));

    py::class_<BenchmarkResult>(m, "BenchmarkResult")
        .def_readonly("value", &BenchmarkResult::value)
        .def_readonly("rmse", &BenchmarkResult::rmse)
        .def_readonly("baseline_rmse", &BenchmarkResult::baseline_rmse)
        .def_readonly("crlb", &BenchmarkResult::crlb)
        .def_readonly("cdf", &BenchmarkResult::cdf)
        .def_readonly("baseline_cdf", &BenchmarkResult::baseline_cdf)
        .def_readonly("fault_count", &BenchmarkResult::fault_count)
        .def_readonly("flagged", &BenchmarkResult::flagged)
        .def_property_readonly("errors", [](const BenchmarkResult& r) {
            std::vector<double> e;
            for (const auto& rec : r.records)
                if (rec.converged()) e.push_back(rec.error);
            return e;
        });

    m.def(
        "run_benchmark",
        [](const ExperimentConfig& cfg, const std::string& param, const std::vector<double>& values) {
            Sweep sweep;
            if (param == "sigma")
                sweep.param = SweepParam::Sigma;
            else if (param == "b")
                sweep.param = SweepParam::NlosBound;
            else if (!param.empty())
                throw py::value_error("param must be 'sigma', 'b' or empty");
            sweep.values = values;
            py::gil_scoped_release release;
            return run_benchmark(cfg, sweep);
        },
        py::arg("config"), py::arg("param") = "", py::arg("values") = std::vector<double>{});
    m.def("records_csv", [](const std::vector<BenchmarkResult>& r) { return csv_of(&write_records_csv, r); });
    m.def("summary_csv", [](const std::vector<BenchmarkResult>& r) { return csv_of(&write_summary_csv, r); });
    m.def("cdf_csv", [](const std::vector<BenchmarkResult>& r) { return csv_of(&write_cdf_csv, r); });

    m.def(
        "timing_scaling",
        [](const std::vector<std::size_t>& sizes, std::size_t reps, std::size_t steps) {
            TimingTable t;
            {
                py::gil_scoped_release release;
                t = timing_scaling(sizes, reps, steps);
            }
            std::vector<std::pair<std::size_t, double>> rows;
            for (const auto& r : t.rows) rows.emplace_back(r.sensor_count, r.mean_step_seconds);
            return py::make_tuple(rows, t.slope);
        },
        py::arg("sizes"), py::arg("repetitions") = 3, py::arg("steps") = 20000);
}
