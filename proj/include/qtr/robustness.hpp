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
#include <vector>

#include "qtr/level_system.hpp"
#include "qtr/stirap.hpp"

namespace qtr {

/// Additive amplitude noise E'(t) = E(t) + alpha * zeta(t) with zeta drawn
/// uniformly from [-1, 1], independently per grid point and per channel.
/// Replay is deterministic: the channel label and the seed fix the stream.
struct NoiseSpec {
    double alpha = 0.0;  // rad/fs
    std::uint64_t seed = 0;
};

/// Perturbed copies of the fields; alpha = 0 returns them bit-identical.
std::vector<ControlField> perturb_fields(const std::vector<ControlField>& fields,
                                         const NoiseSpec& spec);

/// Total field energy sum_c integral E_c(t)^2 dt (trapezoid), in rad^2/fs.
double field_energy(const std::vector<ControlField>& fields);

/// Rescales omega_max so the sampled pulse pair carries the target energy.
/// Exact, since the energy is proportional to omega_max^2.
StirapParams match_energy(const StirapParams& params, const TimeGrid& grid, double target_energy);

enum class SweepAxis { alpha, beta };

struct SweepSettings {
    SweepAxis axis = SweepAxis::alpha;
    std::vector<double> ladder;   // noise amplitudes or decay strengths beta
    int n_realizations = 50;      // ensemble size per alpha value
    std::uint64_t seed = 0;
    int target_level = -1;        // 0-based; -1 selects the last level
    int decay_level = 1;          // 0-based level that decays on the beta axis
    double gamma = -1.0;          // base rate; -1 selects 1 / T
    int threads = 1;
};

struct SweepResult {
    SweepAxis axis;
    std::vector<double> parameter_values;
    std::vector<double> mean_p_target;
    std::vector<double> sd_p_target;  // sample deviation; zero on the beta axis
    int n_realizations;               // 1 on the deterministic beta axis
    double field_energy;              // of the unperturbed input fields
};

/// Final target-level population versus noise amplitude (ensemble mean and
/// deviation over n_realizations deterministic sub-seeds, shared across the
/// ladder) or versus decay strength beta, where level decay_level acquires
/// the rate beta * gamma.  Starts from level 1.
SweepResult sweep(const LevelSystem& system, const std::vector<ControlField>& fields,
                  const SweepSettings& settings);

/// Mean channel FWHM of the first field set over mean channel FWHM of the
/// second; used to compare pulse durations between methods.
double fwhm_ratio(const std::vector<ControlField>& numerator_fields,
                  const std::vector<ControlField>& denominator_fields);

} // namespace qtr
