#include "nlos/report.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace nlos {

namespace {

constexpr int kPrecision = 12;

struct PrecisionGuard {
    explicit PrecisionGuard(std::ostream& os) : os_(os), flags_(os.flags()), precision_(os.precision()) {
        os_ << std::setprecision(kPrecision);
    }
    ~PrecisionGuard() {
        os_.flags(flags_);
        os_.precision(precision_);
    }
    std::ostream& os_;
    std::ios::fmtflags flags_;
    std::streamsize precision_;
};

Eigen::Index dimension_of(const std::vector<BenchmarkResult>& results) {
    for (const auto& res : results)
        for (const auto& r : res.records)
            if (r.truth.size()) return r.truth.size();
    return 2;
}

void write_record(std::ostream& os, double value, const RunRecord& r, Eigen::Index k) {
    os << value << ',' << solver_name(r.solver) << ',' << r.trial_index << ','
       << (r.converged() ? "converged" : "faulted");
    if (r.converged() && r.estimate) {
        for (Eigen::Index a = 0; a < k; ++a) os << ',' << (*r.estimate)[a];
        os << ',' << r.onset_estimate.value_or(0.0);
    } else {
        for (Eigen::Index a = 0; a <= k; ++a) os << ',';
    }
    for (Eigen::Index a = 0; a < k; ++a) os << ',' << r.truth[a];
    if (r.converged()) {
        os << ',' << r.error << ',' << r.kkt.stationarity_inf_norm << ',' << r.kkt.projection_residual_inf_norm
           << ',' << r.kkt.primal_equality_inf_norm << ',' << r.kkt.licq_min_singular_value << ','
           << r.kkt.active_inequality_count;
    } else {
        os << ",,,,,,";
    }
    os << ',' << r.steps << '\n';
}

}  // namespace

void write_records_csv(std::ostream& os, const std::vector<BenchmarkResult>& results) {
    const Eigen::Index k = dimension_of(results);
    os << "param_value,solver,trial_index,status";
    for (Eigen::Index a = 0; a < k; ++a) os << ",est_x" << a + 1;
    os << ",est_t0";
    for (Eigen::Index a = 0; a < k; ++a) os << ",true_x" << a + 1;
    os << ",error,stationarity,projection_residual,equality_residual,licq_min_sv,active_inequalities,steps\n";

    PrecisionGuard guard(os);
    for (const auto& res : results) {
        for (const auto& r : res.records) write_record(os, res.value, r, k);
        for (const auto& r : res.baseline_records) write_record(os, res.value, r, k);
    }
}

void write_summary_csv(std::ostream& os, const std::vector<BenchmarkResult>& results) {
    os << "param,value,trials,rmse,baseline_rmse,crlb,fault_count,baseline_fault_count,flagged\n";
    PrecisionGuard guard(os);
    for (const auto& res : results) {
        os << sweep_param_name(res.param) << ',' << res.value << ',' << res.records.size() << ',' << res.rmse << ',';
        if (!res.baseline_records.empty()) os << res.baseline_rmse;
        os << ',';
        if (res.crlb) os << *res.crlb;
        os << ',' << res.fault_count << ',';
        if (!res.baseline_records.empty()) os << res.baseline_fault_count;
        os << ',' << (res.flagged ? "true" : "false") << '\n';
    }
}

void write_cdf_csv(std::ostream& os, const std::vector<BenchmarkResult>& results) {
    os << "value,solver,error,fraction\n";
    PrecisionGuard guard(os);
    for (const auto& res : results) {
        for (const auto& [e, f] : res.cdf) os << res.value << ',' << solver_name(SolverKind::RobustL1) << ',' << e << ',' << f << '\n';
        for (const auto& [e, f] : res.baseline_cdf)
            os << res.value << ',' << solver_name(SolverKind::BaselineL2) << ',' << e << ',' << f << '\n';
    }
}

void write_benchmark_outputs(const std::string& dir, const std::vector<BenchmarkResult>& results) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    auto open = [&](const char* name) {
        std::ofstream out(fs::path(dir) / name);
        if (!out) throw std::runtime_error(std::string("cannot write ") + (fs::path(dir) / name).string());
        return out;
    };
    auto records = open("records.csv");
    write_records_csv(records, results);
    auto summary = open("summary.csv");
    write_summary_csv(summary, results);
    auto cdf = open("cdf.csv");
    write_cdf_csv(cdf, results);
}

}  // namespace nlos
