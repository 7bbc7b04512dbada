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

#include <stdexcept>
#include <vector>

namespace qtr {

/// Uniform time grid on [0, T].  Times are femtoseconds, energies and Rabi
/// frequencies rad/fs (hbar = 1).  Sampled quantities (control fields,
/// trajectories, source terms) carry one value per grid point, i.e.
/// n_steps() + 1 samples including both endpoints.
class TimeGrid {
public:
    TimeGrid(double t_end_fs, int n_steps) : t_end_(t_end_fs), n_steps_(n_steps) {
        if (!(t_end_fs > 0.0))
            throw std::invalid_argument("TimeGrid: total time must be positive");
        if (n_steps < 2)
            throw std::invalid_argument("TimeGrid: need at least 2 steps");
    }

    double t_end() const { return t_end_; }
    int n_steps() const { return n_steps_; }
    int n_points() const { return n_steps_ + 1; }
    double dt() const { return t_end_ / n_steps_; }

    /// Time of grid point k; time(0) == 0 and time(n_steps) == t_end exactly.
    double time(int k) const { return t_end_ * (static_cast<double>(k) / n_steps_); }

    std::vector<double> times() const {
        std::vector<double> t(static_cast<std::size_t>(n_points()));
        for (int k = 0; k < n_points(); ++k) t[static_cast<std::size_t>(k)] = time(k);
        return t;
    }

    bool operator==(const TimeGrid&) const = default;

private:
    double t_end_;
    int n_steps_;
};

} // namespace qtr
