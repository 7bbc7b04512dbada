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

#include "qtr/stirap.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qtr {

void StirapParams::validate() const {
    if (!(t_total_fs > 0.0))
        throw std::invalid_argument("StirapParams: total time must be positive");
    if (!(omega_max > 0.0))
        throw std::invalid_argument("StirapParams: omega_max must be positive");
    if (!(sigma_fs > 0.0))
        throw std::invalid_argument("StirapParams: sigma must be positive");
    if (!(delay_fs > 0.0) || !(delay_fs < t_total_fs))
        throw std::invalid_argument("StirapParams: delay must lie in (0, T)");
}

ControlField gaussian_field(const TimeGrid& grid, Channel label, double amplitude,
                            double center_fs, double sigma_fs) {
    if (!(sigma_fs > 0.0))
        throw std::invalid_argument("gaussian_field: sigma must be positive");
    Eigen::VectorXd samples(grid.n_points());
    for (int k = 0; k < grid.n_points(); ++k) {
        const double x = (grid.time(k) - center_fs) / sigma_fs;
        samples[k] = amplitude * std::exp(-0.5 * x * x);
    }
    return ControlField(grid, label, std::move(samples));
}

std::pair<ControlField, ControlField> make_stirap_fields(const StirapParams& params,
                                                         const TimeGrid& grid) {
    params.validate();
    if (grid.t_end() != params.t_total_fs)
        throw std::invalid_argument("make_stirap_fields: grid length must equal t_total_fs");
    return {gaussian_field(grid, Channel::pump, params.omega_max, params.pump_center(),
                           params.sigma_fs),
            gaussian_field(grid, Channel::stokes, params.omega_max, params.stokes_center(),
                           params.sigma_fs)};
}

double overlap_time(const StirapParams& params) {
    params.validate();
    const double d = params.delay_fs / params.sigma_fs;
    return params.sigma_fs * std::sqrt(std::numbers::pi) * std::exp(-0.25 * d * d);
}

double adiabaticity(const StirapParams& params) {
    return params.omega_max * overlap_time(params);
}

StirapParams params_for_adiabaticity(double omega_tau, double sigma_fs, double delay_fs,
                                     double t_total_fs) {
    if (!(omega_tau > 0.0))
        throw std::invalid_argument("params_for_adiabaticity: target must be positive");
    StirapParams p{1.0, sigma_fs, delay_fs, t_total_fs};
    p.validate();
    p.omega_max = omega_tau / overlap_time(p);
    return p;
}

} // namespace qtr
