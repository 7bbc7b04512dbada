// Copyright 2026 The qtransfer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qtr {

enum class ExperimentKind {
    stirap,
    oct_standard,
    oct_constrained,
    robustness_alpha,
    robustness_beta,
    four_level,
    calibrate,
};

const char* kind_name(ExperimentKind kind);

struct SystemConfig {
    int levels = 3;
    double t_total_fs = 100.0;
    int n_steps = 2000;
    std::vector<double> detunings;  // one per level; empty means all zero
};

struct StirapSection {
    double sigma_fs = 12.0;
    double delay_fs = 24.0;
    std::optional<double> omega_max;  // overrides adiabaticity when present
    double adiabaticity = 100.0;
};

struct OctSection {
    double lambda0 = 0.0;         // required
    double lambda_b = 0.0;
    int max_iterations = 1000;
    double convergence_tol = 1e-7;
    double guess_amplitude = 0.0;  // required
    double guess_sigma_fs = 12.0;
    double guess_delay_fs = -24.0;  // negative = pump before Stokes
    std::optional<int> target_level;  // 1-based
    std::vector<int> allowed_levels;  // 1-based; empty means first and last
};

struct RobustnessSection {
    std::vector<double> ladder;  // required, strictly increasing, >= 0
    int realizations = 50;
    bool match_energy = true;
    std::vector<double> stirap_adiabaticities;  // extra fixed-energy curves
    int decay_level = 2;  // 1-based
};

struct CalibrateSection {
    std::vector<double> lambda0_grid;   // required
    std::vector<double> lambda_b_grid;  // required
    double yield_min = 0.9;
    double peak_forbidden_max = 0.01;
    int max_iterations = 500;
};

/// Parsed and validated experiment description.  Parsing is strict: unknown
/// sections or keys, keys that do not apply to the configured kind, duplicate
/// keys, and malformed values are all rejected with a ConfigError that names
/// the offending line.
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::stirap;
    std::uint64_t seed = 20260824;
    std::string out_dir = "out";
    SystemConfig system;
    std::optional<StirapSection> stirap;
    std::optional<OctSection> oct;
    std::optional<RobustnessSection> robustness;
    std::optional<CalibrateSection> calibrate;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

} // namespace qtr
