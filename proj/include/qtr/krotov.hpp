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

#include "qtr/propagator.hpp"

namespace qtr {

/// Settings of the monotonically convergent optimizer.  The functional being
/// maximized is
///
///   J = |<target|psi(T)>|^2
///       - sum_c integral lambda0 / S(t) * (E_c(t) - E_ref,c(t))^2 dt
///       + lambda_b * integral <psi(t)| D |psi(t)> dt
///
/// with the shape S(t) = sin^2(pi t / T) pinning the fields at both window
/// edges, E_ref the fields of the previous iteration, and D the projector
/// onto the allowed levels.  lambda_b = 0 recovers the unconstrained scheme.
struct OctConfig {
    double lambda0 = 1.0;   // field-change penalty weight, > 0
    double lambda_b = 0.0;  // allowed-subspace reward weight, >= 0
    int max_iterations = 1000;
    double convergence_tol = 1e-7;  // on the change of J per iteration
    int convergence_window = 5;     // consecutive small changes required
    double monotonic_slack = 1e-9;  // tolerated numerical decrease of J
    int target_level = -1;          // 0-based; -1 selects the last level
    std::vector<int> allowed_levels;  // 0-based; empty selects first and last
    bool record_field_history = true;
};

struct FunctionalValue {
    double j_total;
    double yield;
    double penalty;
    double constraint;
};

struct IterationRecord {
    double j_total;
    double yield;
    double penalty;
    double constraint;
    // Per-channel samples in topology order; empty when history is disabled.
    std::vector<Eigen::VectorXd> field_samples;
};

struct KrotovRun {
    std::vector<IterationRecord> iterations;  // entry 0 describes the guess
    bool converged;
    bool monotonic;
    std::vector<ControlField> final_fields;  // topology order
    Trajectory final_trajectory;
};

/// Penalty shape S at grid point k; exactly zero at both window edges.
double shape_at(const TimeGrid& grid, int k);

/// Gaussian guess fields, one per coupling, with peak times spread linearly
/// from T/2 + delay/2 (first coupling) to T/2 - delay/2 (last coupling); a
/// negative delay therefore orders the pump pulse before the Stokes pulse.
std::vector<ControlField> gaussian_guess(const LevelSystem& system, const TimeGrid& grid,
                                         double amplitude, double sigma_fs, double delay_fs);

/// Value of J for a trajectory that was produced by the given fields, with
/// the field penalty taken relative to reference_fields (matched by label).
FunctionalValue evaluate_functional(const OctConfig& config, const Trajectory& trajectory,
                                    const std::vector<ControlField>& fields,
                                    const std::vector<ControlField>& reference_fields);

/// Runs the optimizer from level 1 toward the target level, starting from the
/// guess fields.  Each iteration is one backward costate propagation followed
/// by one forward sweep with immediate field replacement, which guarantees
/// (up to monotonic_slack roundoff) a non-decreasing J.  The run stops on
/// convergence, at max_iterations, or at the first monotonicity violation (in
/// which case monotonic is false; no exception is thrown here).
KrotovRun krotov_iterate(const LevelSystem& system, const OctConfig& config,
                         const std::vector<ControlField>& guess);

} // namespace qtr
