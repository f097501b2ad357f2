#pragma once

#include "nlos/bench.hpp"

#include <istream>
#include <stdexcept>
#include <string>

namespace nlos {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parses an experiment file with sections [scenario], [noise], [solver].
///
///   [scenario]
///   kind = deterministic-perimeter | random-square
///   region_side = 20
///   sensors = 8
///   source = [2, 3] | random
///   nlos_sensors = [1, 5]      ; 1-based labels
///   nlos_upper = [5, 5]        ; one bound per label, or a single shared bound
///   trials = 100
///   seed = 1
///   onset_time = 0.1
///   speed = 1
///   redraw_nlos = false
///
///   [noise]
///   sigma = 0.316227766        ; or variance = 0.1, not both
///
///   [solver]
///   gamma = 100
///   rho = 5
///   tau = 2e-5
///   horizon = 40
///   record_stride = 0.1
///   adaptive = false
///   adaptive_tol = 1e-8
///   baseline = true
///   workers = 1                ; 0: one per hardware thread
///
/// Every key is optional. Unknown sections or keys are errors.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

}  // namespace nlos
