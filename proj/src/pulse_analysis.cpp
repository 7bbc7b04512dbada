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

#include "qtr/pulse_analysis.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

namespace qtr {

namespace {

// Linear-interpolated time where the intensity crosses "level" between the
// peak index and the window edge; nullopt if it never drops below.
std::optional<double> crossing(const TimeGrid& grid, const Eigen::VectorXd& intensity,
                               int peak_index, int direction, double level) {
    for (int k = peak_index; k + direction >= 0 && k + direction < grid.n_points(); k += direction) {
        const double a = intensity[k];
        const double b = intensity[k + direction];
        if (b <= level && a > level) {
            const double frac = (a - level) / (a - b);
            return grid.time(k) + direction * frac * grid.dt();
        }
    }
    return std::nullopt;
}

} // namespace

PulseDiagnostics analyze_pulse(const ControlField& field) {
    const TimeGrid& grid = field.grid();
    const Eigen::VectorXd intensity = field.samples().cwiseAbs2();
    const double peak = intensity.maxCoeff();
    if (peak <= 0.0)
        throw std::invalid_argument("analyze_pulse: all-zero field");

    int peak_index = 0;
    intensity.maxCoeff(&peak_index);

    // Trapezoid moments of the intensity.
    double m0 = 0.0;
    double m1 = 0.0;
    const double dt = grid.dt();
    for (int k = 0; k < grid.n_steps(); ++k) {
        const double ia = intensity[k];
        const double ib = intensity[k + 1];
        m0 += 0.5 * dt * (ia + ib);
        m1 += 0.5 * dt * (ia * grid.time(k) + ib * grid.time(k + 1));
    }

    const double half = 0.5 * peak;
    const double lo = crossing(grid, intensity, peak_index, -1, half).value_or(0.0);
    const double hi = crossing(grid, intensity, peak_index, +1, half).value_or(grid.t_end());

    PulseDiagnostics d;
    d.label = field.label();
    d.centroid_fs = m1 / m0;
    d.half_lo_fs = lo;
    d.half_hi_fs = hi;
    d.fwhm_fs = hi - lo;
    d.peak_amplitude = std::sqrt(peak);
    d.peak_time_fs = grid.time(peak_index);
    return d;
}

OrderingReport pulse_ordering(const std::vector<ControlField>& fields) {
    OrderingReport report;
    std::optional<double> pump_centroid;
    std::optional<double> stokes_centroid;
    for (const auto& f : fields) {
        report.channels.push_back(analyze_pulse(f));
        if (f.label() == Channel::pump) pump_centroid = report.channels.back().centroid_fs;
        if (f.label() == Channel::stokes) stokes_centroid = report.channels.back().centroid_fs;
    }
    if (!pump_centroid || !stokes_centroid)
        throw std::invalid_argument("pulse_ordering: needs a pump and a stokes field");
    report.verdict = (*stokes_centroid < *pump_centroid) ? PulseOrdering::counterintuitive
                                                         : PulseOrdering::intuitive;
    return report;
}

} // namespace qtr
