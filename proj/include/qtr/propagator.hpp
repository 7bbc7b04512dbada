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

#include <vector>

#include "qtr/level_system.hpp"
#include "qtr/time_grid.hpp"

namespace qtr {

/// States sampled on every grid point, together with derived populations and
/// norms.  states[k] belongs to time grid.time(k) for forward and backward
/// runs alike.
struct Trajectory {
    TimeGrid grid;
    std::vector<StateVector> states;
    Eigen::MatrixXd populations_history; // n_points x n_levels
    Eigen::VectorXd norm_history;        // n_points, 2-norm

    const StateVector& initial_state() const { return states.front(); }
    const StateVector& final_state() const { return states.back(); }
};

/// Driving term s(t) of an inhomogeneous equation of motion, sampled on every
/// grid point and interpolated linearly in between.
struct InhomogeneousSource {
    TimeGrid grid;
    std::vector<StateVector> vectors;
};

struct PropagateOptions {
    bool require_normalized = true;
};

/// Which invariant the assembled trajectory must satisfy.
enum class NormGuard { conserve, contract, none };

/// Builds a Trajectory (populations, norms) from raw states and enforces the
/// requested norm invariant; throws PhysicsError on violation.
Trajectory assemble_trajectory(const TimeGrid& grid, std::vector<StateVector> states,
                               NormGuard guard);

/// One-interval step operator exp(-i dt H) for the Hamiltonian built from the
/// given per-channel values.  Unitary when the system has no decay.
Eigen::MatrixXcd step_operator(const LevelSystem& system, const Eigen::VectorXd& channel_values,
                               double dt);

/// Backward counterpart exp(+i dt H^dagger); reduces to the inverse of
/// step_operator for decay-free systems.
Eigen::MatrixXcd backward_step_operator(const LevelSystem& system,
                                        const Eigen::VectorXd& channel_values, double dt);

/// Integrates i d/dt psi = H(t) psi from t = 0 to t = T.  The Hamiltonian is
/// frozen on each step interval at the mean of the two adjacent field
/// samples, and each interval is advanced by the exact matrix exponential of
/// that frozen Hamiltonian (second order accurate in dt for smooth fields,
/// exact for fields that are constant per interval).
Trajectory propagate_forward(const LevelSystem& system, const std::vector<ControlField>& fields,
                             const StateVector& initial, const PropagateOptions& opts = {});

/// Integrates the adjoint-generator equation d/dt psi = -i H^dagger psi from
/// t = T down to t = 0, so that the overlap with any forward trajectory of
/// the same fields is conserved step by step.  Identical to running
/// propagate_forward in reverse when the system has no decay.
Trajectory propagate_backward(const LevelSystem& system, const std::vector<ControlField>& fields,
                              const StateVector& final_state);

/// Same as propagate_backward but for the driven equation
///   d/dt psi = -i H^dagger psi + s(t),
/// with s(t) linear between grid samples.  Each interval is advanced exactly
/// (for the frozen Hamiltonian and linear source) through the exponential of
/// an augmented matrix, so the step is regular for H = 0 as well.
Trajectory propagate_backward_inhomogeneous(const LevelSystem& system,
                                            const std::vector<ControlField>& fields,
                                            const StateVector& final_state,
                                            const InhomogeneousSource& source);

} // namespace qtr
