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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qtr/config.hpp"
#include "qtr/krotov.hpp"
#include "qtr/pulse_analysis.hpp"
#include "qtr/robustness.hpp"

namespace qtr {

struct RunOptions {
    std::optional<std::string> out_dir;    // overrides the config value
    std::optional<std::uint64_t> seed;     // overrides the config value
    int threads = 0;                       // 0 = pick from the hardware
};

struct PeakInfo {
    int level;  // 0-based
    double population;
    double time_fs;
};

struct StraddlingReport {
    bool intermediate_has_largest_peak;
    bool overlaps_pump;
    bool overlaps_stokes;
    bool verdict;
};

struct SweepCurve {
    std::string label;
    SweepResult result;
};

/// Everything an experiment produced, mirroring the files written to disk.
/// Artifacts: populations.csv and fields.csv always; convergence.csv when an
/// optimization ran; sweep.csv (plus sweep_<label>.csv and fields_stirap.csv)
/// for robustness kinds; summary.json always.
struct ExperimentResult {
    ExperimentKind kind = ExperimentKind::stirap;
    TimeGrid grid{1.0, 2};
    Eigen::VectorXd final_populations;
    double final_norm = 0.0;
    std::vector<PeakInfo> intermediate_peaks;
    OrderingReport ordering;
    double primary_field_energy = 0.0;
    std::optional<double> stirap_adiabaticity;
    std::optional<KrotovRun> oct;
    std::vector<SweepCurve> sweeps;              // first entry is the optimized field set
    std::optional<double> pulse_width_ratio;     // STIRAP FWHM over optimized FWHM
    std::optional<StraddlingReport> straddling;
    nlohmann::json summary;
    std::filesystem::path out_path;
};

struct CalibrationRow {
    double lambda0;
    double lambda_b;
    double yield;
    double peak_forbidden;
    int iterations;
    bool converged;
    bool monotonic;
    bool meets;
};

struct CalibrationResult {
    std::vector<CalibrationRow> table;
    bool success;
    double lambda0;  // valid when success
    double lambda_b;
    nlohmann::json report;
    std::filesystem::path out_path;
};

/// Runs a non-calibration experiment and writes its artifacts.  Never throws
/// for a non-monotonic optimizer run; inspect result.oct->monotonic.
ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& opts = {});

/// Scans the lambda grids and selects the smallest lambda_b whose best run
/// meets the thresholds; ties break toward higher yield, then smaller
/// lambda0.  Writes calibration.csv and calibration.json.  success is false
/// when no grid point qualifies.
CalibrationResult run_calibration(const ExperimentConfig& config, const RunOptions& opts = {});

} // namespace qtr
