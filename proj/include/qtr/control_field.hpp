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

#include <Eigen/Dense>
#include <stdexcept>
#include <utility>

#include "qtr/time_grid.hpp"

namespace qtr {

/// Identifies which coupling of the level chain a field drives.
enum class Channel { pump = 0, intermediate = 1, stokes = 2 };

inline const char* channel_name(Channel c) {
    switch (c) {
        case Channel::pump: return "pump";
        case Channel::intermediate: return "intermediate";
        case Channel::stokes: return "stokes";
    }
    throw std::invalid_argument("channel_name: unknown channel");
}

/// One control envelope Omega_c(t) in rad/fs, sampled on every grid point.
class ControlField {
public:
    ControlField(TimeGrid grid, Channel label, Eigen::VectorXd samples)
        : grid_(grid), label_(label), samples_(std::move(samples)) {
        if (samples_.size() != grid_.n_points())
            throw std::invalid_argument("ControlField: sample count must equal grid points");
        if (!samples_.allFinite())
            throw std::invalid_argument("ControlField: samples must be finite");
    }

    const TimeGrid& grid() const { return grid_; }
    Channel label() const { return label_; }
    const Eigen::VectorXd& samples() const { return samples_; }
    double operator[](int k) const { return samples_[k]; }

    /// Field value assigned to step interval k, the mean of its two samples.
    double midpoint_value(int interval) const {
        return 0.5 * (samples_[interval] + samples_[interval + 1]);
    }

    ControlField with_samples(Eigen::VectorXd samples) const {
        return ControlField(grid_, label_, std::move(samples));
    }

private:
    TimeGrid grid_;
    Channel label_;
    Eigen::VectorXd samples_;
};

} // namespace qtr
