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

#include <utility>

#include "qtr/control_field.hpp"
#include "qtr/time_grid.hpp"

namespace qtr {

/// Gaussian pump/Stokes pair in the counterintuitive order: the Stokes pulse
/// peaks at T/2 - delay/2, the pump pulse at T/2 + delay/2, both with a
/// common width sigma and amplitude omega_max.
struct StirapParams {
    double omega_max;   // rad/fs
    double sigma_fs;    // Gaussian width
    double delay_fs;    // pump center minus Stokes center, > 0
    double t_total_fs;  // window length T

    double stokes_center() const { return 0.5 * (t_total_fs - delay_fs); }
    double pump_center() const { return 0.5 * (t_total_fs + delay_fs); }
    void validate() const;
};

/// Gaussian envelope sampled on a grid.
ControlField gaussian_field(const TimeGrid& grid, Channel label, double amplitude,
                            double center_fs, double sigma_fs);

/// The (pump, Stokes) pair of params sampled on the grid; grid.t_end() must
/// equal params.t_total_fs.
std::pair<ControlField, ControlField> make_stirap_fields(const StirapParams& params,
                                                         const TimeGrid& grid);

/// Effective overlap time tau of the two envelopes: the integral of their
/// product normalized by the product of the peak amplitudes.  For the
/// Gaussian pair this is sigma * sqrt(pi) * exp(-delay^2 / (4 sigma^2)), so
/// tau shrinks to zero as the pulses separate and is independent of
/// omega_max.
double overlap_time(const StirapParams& params);

/// Adiabaticity product omega_max * tau; exactly linear in omega_max.
double adiabaticity(const StirapParams& params);

/// Params with omega_max chosen so that adiabaticity(params) == omega_tau.
StirapParams params_for_adiabaticity(double omega_tau, double sigma_fs, double delay_fs,
                                     double t_total_fs);

} // namespace qtr
