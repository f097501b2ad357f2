#include "nlos/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace nlos {

namespace {

namespace pt = boost::property_tree;

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string strip_comment(const std::string& value) {
    const auto at = value.find(';');
    return trim(at == std::string::npos ? value : value.substr(0, at));
}

[[noreturn]] void fail(const std::string& key, const std::string& what) {
    throw ConfigError("config: " + key + ": " + what);
}

double to_double(const std::string& key, const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        fail(key, "expected a number, got '" + text + "'");
    }
    if (used != text.size() || !std::isfinite(v)) fail(key, "expected a number, got '" + text + "'");
    return v;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& text) {
    if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
        fail(key, "expected a non-negative integer, got '" + text + "'");
    try {
        return std::stoull(text);
    } catch (const std::exception&) {
        fail(key, "integer out of range: '" + text + "'");
    }
}

bool to_bool(const std::string& key, const std::string& text) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    fail(key, "expected true or false, got '" + text + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& text) {
    if (text.size() < 2 || text.front() != '[' || text.back() != ']')
        fail(key, "expected a bracketed list such as [1, 2], got '" + text + "'");
    std::vector<double> out;
    const std::string body = trim(text.substr(1, text.size() - 2));
    if (body.empty()) return out;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
    return out;
}

struct Pending {
    std::vector<double> nlos_sensors;
    std::vector<double> nlos_upper;
    bool have_sigma = false;
    bool have_variance = false;
};

void apply_scenario(ExperimentConfig& cfg, Pending& pending, const std::string& name, const std::string& key,
                    const std::string& v) {
    ScenarioSpec& s = cfg.scenario;
    if (name == "kind") {
        if (v == "deterministic-perimeter")
            s.kind = ScenarioKind::DeterministicPerimeter;
        else if (v == "random-square")
            s.kind = ScenarioKind::RandomSquare;
        else
            fail(key, "expected deterministic-perimeter or random-square, got '" + v + "'");
    } else if (name == "region_side") {
        s.region_side = to_double(key, v);
    } else if (name == "sensors") {
        s.sensor_count = to_unsigned(key, v);
    } else if (name == "source") {
        if (v == "random") {
            s.source.reset();
        } else {
            const auto xs = to_list(key, v);
            if (xs.size() != 2 && xs.size() != 3) fail(key, "source must have 2 or 3 coordinates");
            s.source = Eigen::Map<const Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
        }
    } else if (name == "nlos_sensors") {
        pending.nlos_sensors = to_list(key, v);
    } else if (name == "nlos_upper") {
        pending.nlos_upper = v.empty() || v.front() != '[' ? std::vector<double>{to_double(key, v)} : to_list(key, v);
    } else if (name == "trials") {
        s.trials = to_unsigned(key, v);
    } else if (name == "seed") {
        s.seed = to_unsigned(key, v);
    } else if (name == "onset_time") {
        s.onset_time = to_double(key, v);
    } else if (name == "speed") {
        s.propagation_speed = to_double(key, v);
    } else if (name == "redraw_nlos") {
        s.redraw_nlos = to_bool(key, v);
    } else {
        fail(key, "unknown key");
    }
}

void apply_noise(ExperimentConfig& cfg, Pending& pending, const std::string& name, const std::string& key,
                 const std::string& v) {
    if (name == "sigma") {
        cfg.sigma = to_double(key, v);
        pending.have_sigma = true;
    } else if (name == "variance") {
        const double var = to_double(key, v);
        if (var < 0.0) fail(key, "variance must be >= 0");
        cfg.sigma = std::sqrt(var);
        pending.have_variance = true;
    } else {
        fail(key, "unknown key");
    }
    if (pending.have_sigma && pending.have_variance) fail(key, "give sigma or variance, not both");
}

void apply_solver(ExperimentConfig& cfg, const std::string& name, const std::string& key, const std::string& v) {
    SolverConfig& s = cfg.solver;
    if (name == "gamma")
        s.gamma = to_double(key, v);
    else if (name == "rho")
        s.rho = to_double(key, v);
    else if (name == "tau")
        s.integrator.tau = to_double(key, v);
    else if (name == "horizon")
        s.integrator.horizon = to_double(key, v);
    else if (name == "record_stride")
        s.integrator.record_stride = to_double(key, v);
    else if (name == "adaptive")
        s.integrator.adaptive = to_bool(key, v);
    else if (name == "adaptive_tol")
        s.integrator.adaptive_tol = to_double(key, v);
    else if (name == "baseline")
        s.run_baseline = to_bool(key, v);
    else if (name == "workers")
        cfg.workers = to_unsigned(key, v);
    else
        fail(key, "unknown key");
}

void resolve_nlos(ExperimentConfig& cfg, const Pending& pending) {
    const auto& labels = pending.nlos_sensors;
    auto bounds = pending.nlos_upper;
    if (labels.empty() && bounds.empty()) return;
    if (labels.empty()) fail("scenario.nlos_upper", "given without scenario.nlos_sensors");
    if (bounds.size() == 1) bounds.assign(labels.size(), bounds.front());
    if (bounds.size() != labels.size())
        fail("scenario.nlos_upper", "needs one bound per NLOS sensor or a single shared bound");

    std::set<std::size_t> seen;
    cfg.scenario.nlos_pattern.clear();
    for (std::size_t n = 0; n < labels.size(); ++n) {
        const double label = labels[n];
        if (label < 1.0 || label != std::floor(label) || label > static_cast<double>(cfg.scenario.sensor_count))
            fail("scenario.nlos_sensors", "labels must be integers in 1.." + std::to_string(cfg.scenario.sensor_count));
        const auto index = static_cast<std::size_t>(label) - 1;
        if (!seen.insert(index).second) fail("scenario.nlos_sensors", "duplicate label");
        if (!(bounds[n] >= 0.0)) fail("scenario.nlos_upper", "bounds must be >= 0");
        cfg.scenario.nlos_pattern.emplace_back(index, bounds[n]);
    }
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("config: line " + std::to_string(e.line()) + ": " + e.message());
    }

    ExperimentConfig cfg;
    Pending pending;
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty()) fail(section, "key outside any section");
        if (section != "scenario" && section != "noise" && section != "solver") fail(section, "unknown section");
        for (const auto& [name, node] : body) {
            const std::string key = section + "." + name;
            const std::string value = strip_comment(node.data());
            if (section == "scenario")
                apply_scenario(cfg, pending, name, key, value);
            else if (section == "noise")
                apply_noise(cfg, pending, name, key, value);
            else
                apply_solver(cfg, name, key, value);
        }
    }
    resolve_nlos(cfg, pending);

    if (cfg.sigma < 0.0) fail("noise.sigma", "must be >= 0");
    try {
        cfg.scenario.validate();
        cfg.solver.integrator.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (!(cfg.solver.gamma > 0.0)) fail("solver.gamma", "must be > 0");
    if (!(cfg.solver.rho > 0.0)) fail("solver.rho", "must be > 0");
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    return parse_config(in);
}

}  // namespace nlos
