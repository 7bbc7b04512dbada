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

#include "qtr/krotov.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace qtr {

namespace {

using Complex = std::complex<double>;

int resolve_target(const OctConfig& cfg, int n_levels) {
    const int t = cfg.target_level < 0 ? n_levels - 1 : cfg.target_level;
    if (t < 0 || t >= n_levels)
        throw std::invalid_argument("OctConfig: target level out of range");
    return t;
}

// Diagonal of the allowed-subspace projector D.
Eigen::VectorXd allowed_diagonal(const OctConfig& cfg, int n_levels) {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(n_levels);
    if (cfg.allowed_levels.empty()) {
        d[0] = 1.0;
        d[n_levels - 1] = 1.0;
        return d;
    }
    for (int lvl : cfg.allowed_levels) {
        if (lvl < 0 || lvl >= n_levels)
            throw std::invalid_argument("OctConfig: allowed level out of range");
        if (d[lvl] != 0.0)
            throw std::invalid_argument("OctConfig: allowed levels must be distinct");
        d[lvl] = 1.0;
    }
    return d;
}

void validate_config(const OctConfig& cfg) {
    if (!(cfg.lambda0 > 0.0))
        throw std::invalid_argument("OctConfig: lambda0 must be positive");
    if (cfg.lambda_b < 0.0)
        throw std::invalid_argument("OctConfig: lambda_b must be non-negative");
    if (cfg.max_iterations < 1)
        throw std::invalid_argument("OctConfig: max_iterations must be at least 1");
    if (!(cfg.convergence_tol > 0.0))
        throw std::invalid_argument("OctConfig: convergence_tol must be positive");
    if (cfg.convergence_window < 1)
        throw std::invalid_argument("OctConfig: convergence_window must be at least 1");
}

// Im <chi| mu_b |psi> for the coupling operator of bond b.
double im_bond(const StateVector& chi, const StateVector& psi, int b) {
    const Complex v = std::conj(chi[b]) * psi[b + 1] + std::conj(chi[b + 1]) * psi[b];
    return v.imag();
}

std::vector<Eigen::VectorXd> snapshot(const std::vector<ControlField>& fields, bool enabled) {
    std::vector<Eigen::VectorXd> out;
    if (!enabled) return out;
    out.reserve(fields.size());
    for (const auto& f : fields) out.push_back(f.samples());
    return out;
}

} // namespace

double shape_at(const TimeGrid& grid, int k) {
    if (k <= 0 || k >= grid.n_steps()) return 0.0;
    const double s = std::sin(std::numbers::pi * static_cast<double>(k) / grid.n_steps());
    return s * s;
}

std::vector<ControlField> gaussian_guess(const LevelSystem& system, const TimeGrid& grid,
                                         double amplitude, double sigma_fs, double delay_fs) {
    const int nb = system.n_levels() - 1;
    const double t_mid = 0.5 * grid.t_end();
    std::vector<ControlField> fields;
    fields.reserve(static_cast<std::size_t>(nb));
    for (int b = 0; b < nb; ++b) {
        const double frac = nb == 1 ? 0.5 : static_cast<double>(b) / (nb - 1);
        const double center = t_mid + 0.5 * delay_fs - frac * delay_fs;
        Eigen::VectorXd samples(grid.n_points());
        for (int k = 0; k < grid.n_points(); ++k) {
            const double x = (grid.time(k) - center) / sigma_fs;
            samples[k] = amplitude * std::exp(-0.5 * x * x);
        }
        fields.emplace_back(grid, system.channels()[static_cast<std::size_t>(b)],
                            std::move(samples));
    }
    return fields;
}

FunctionalValue evaluate_functional(const OctConfig& config, const Trajectory& trajectory,
                                    const std::vector<ControlField>& fields,
                                    const std::vector<ControlField>& reference_fields) {
    validate_config(config);
    const int n = static_cast<int>(trajectory.states.front().size());
    const int target = resolve_target(config, n);
    const Eigen::VectorXd d = allowed_diagonal(config, n);
    const TimeGrid& grid = trajectory.grid;
    const double dt = grid.dt();

    if (fields.size() != reference_fields.size())
        throw std::invalid_argument("evaluate_functional: field list sizes differ");

    double penalty = 0.0;
    for (const auto& f : fields) {
        const ControlField* ref = nullptr;
        for (const auto& r : reference_fields)
            if (r.label() == f.label()) ref = &r;
        if (ref == nullptr)
            throw std::invalid_argument("evaluate_functional: reference field missing for a label");
        if (!(f.grid() == grid) || !(ref->grid() == grid))
            throw std::invalid_argument("evaluate_functional: fields must live on the trajectory grid");
        // S vanishes at both edges and the fields are pinned there, so the
        // trapezoid reduces to the interior sum.
        for (int k = 1; k < grid.n_steps(); ++k) {
            const double diff = f[k] - (*ref)[k];
            if (diff != 0.0) penalty += config.lambda0 / shape_at(grid, k) * diff * diff * dt;
        }
    }

    double constraint = 0.0;
    if (config.lambda_b > 0.0) {
        auto weighted = [&](int k) { return trajectory.populations_history.row(k).dot(d); };
        double acc = 0.5 * (weighted(0) + weighted(grid.n_steps()));
        for (int k = 1; k < grid.n_steps(); ++k) acc += weighted(k);
        constraint = config.lambda_b * acc * dt;
    }

    const Complex amp = trajectory.final_state()[target];
    const double yield = std::norm(amp);
    return FunctionalValue{yield - penalty + constraint, yield, penalty, constraint};
}

KrotovRun krotov_iterate(const LevelSystem& system, const OctConfig& config,
                         const std::vector<ControlField>& guess) {
    validate_config(config);
    const int n = system.n_levels();
    const int nb = n - 1;
    const int target = resolve_target(config, n);
    const Eigen::VectorXd d = allowed_diagonal(config, n);

    // Topology-ordered working copy of the guess.
    std::vector<ControlField> fields;
    {
        const auto by_bond = fields_by_bond(system, guess);
        double max_abs = 0.0;
        for (const auto* f : by_bond) max_abs = std::max(max_abs, f->samples().cwiseAbs().maxCoeff());
        if (max_abs == 0.0)
            throw std::invalid_argument("krotov_iterate: guess fields are identically zero");
        for (const auto* f : by_bond) fields.push_back(*f);
    }
    const TimeGrid grid = fields.front().grid();
    const double dt = grid.dt();

    StateVector psi0 = StateVector::Zero(n);
    psi0[0] = 1.0;

    Trajectory traj = propagate_forward(system, fields, psi0);

    KrotovRun run{{}, false, true, fields, traj};
    {
        const FunctionalValue fv = evaluate_functional(config, traj, fields, fields);
        run.iterations.push_back(IterationRecord{fv.j_total, fv.yield, fv.penalty, fv.constraint,
                                                 snapshot(fields, config.record_field_history)});
    }

    int small_change_streak = 0;
    for (int it = 1; it <= config.max_iterations; ++it) {
        // Costate: terminal condition |target><target|psi(T)>, propagated
        // backward; the allowed-subspace reward enters as a source term.
        StateVector chi_t = StateVector::Zero(n);
        chi_t[target] = traj.final_state()[target];
        Trajectory chi = [&] {
            if (config.lambda_b > 0.0) {
                const Eigen::VectorXcd weight = (-config.lambda_b * d).cast<Complex>();
                InhomogeneousSource source{grid, {}};
                source.vectors.resize(static_cast<std::size_t>(grid.n_points()));
                for (int k = 0; k < grid.n_points(); ++k)
                    source.vectors[static_cast<std::size_t>(k)] =
                        weight.cwiseProduct(traj.states[static_cast<std::size_t>(k)]);
                return propagate_backward_inhomogeneous(system, fields, chi_t, source);
            }
            return propagate_backward(system, fields, chi_t);
        }();

        // Forward sweep with immediate replacement.  The new sample at k+1
        // solves a small fixed point: it feeds back into the midpoint value
        // of the step that produces the state it is computed from.  Keeping
        // the last evaluated pair (field, state) makes the stored trajectory
        // exactly the one generated by the stored fields.
        std::vector<Eigen::VectorXd> new_samples;
        new_samples.reserve(static_cast<std::size_t>(nb));
        for (int b = 0; b < nb; ++b) new_samples.push_back(fields[static_cast<std::size_t>(b)].samples());

        std::vector<StateVector> states(static_cast<std::size_t>(grid.n_points()));
        states[0] = psi0;
        StateVector psi = psi0;
        Eigen::VectorXd e_left(nb), e(nb), e_new(nb), mid(nb);
        for (int k = 0; k < grid.n_steps(); ++k) {
            const double s_next = shape_at(grid, k + 1) / config.lambda0;
            const StateVector& chi_next = chi.states[static_cast<std::size_t>(k) + 1];
            for (int b = 0; b < nb; ++b) {
                e_left[b] = new_samples[static_cast<std::size_t>(b)][k];
                e[b] = fields[static_cast<std::size_t>(b)][k + 1];
            }
            StateVector psi_trial;
            for (int round = 0;; ++round) {
                mid = 0.5 * (e_left + e);
                psi_trial = step_operator(system, mid, dt) * psi;
                bool accepted = true;
                if (s_next > 0.0) {
                    for (int b = 0; b < nb; ++b)
                        e_new[b] = fields[static_cast<std::size_t>(b)][k + 1] +
                                   s_next * im_bond(chi_next, psi_trial, b);
                    const double delta = (e_new - e).cwiseAbs().maxCoeff();
                    const double scale = std::max(1.0, e.cwiseAbs().maxCoeff());
                    accepted = delta <= 1e-13 * scale || round >= 4;
                    if (!accepted) e = e_new;
                }
                if (accepted) break;
            }
            for (int b = 0; b < nb; ++b) new_samples[static_cast<std::size_t>(b)][k + 1] = e[b];
            psi = psi_trial;
            states[static_cast<std::size_t>(k) + 1] = psi;
        }

        std::vector<ControlField> new_fields;
        new_fields.reserve(static_cast<std::size_t>(nb));
        for (int b = 0; b < nb; ++b)
            new_fields.push_back(fields[static_cast<std::size_t>(b)].with_samples(
                std::move(new_samples[static_cast<std::size_t>(b)])));

        Trajectory new_traj = assemble_trajectory(
            grid, std::move(states), system.has_decay() ? NormGuard::contract : NormGuard::conserve);

        const FunctionalValue fv = evaluate_functional(config, new_traj, new_fields, fields);
        const double j_prev = run.iterations.back().j_total;
        run.iterations.push_back(IterationRecord{fv.j_total, fv.yield, fv.penalty, fv.constraint,
                                                 snapshot(new_fields, config.record_field_history)});

        fields = std::move(new_fields);
        traj = std::move(new_traj);

        if (fv.j_total < j_prev - config.monotonic_slack) {
            run.monotonic = false;
            break;
        }
        if (std::abs(fv.j_total - j_prev) < config.convergence_tol) {
            if (++small_change_streak >= config.convergence_window) {
                run.converged = true;
                break;
            }
        } else {
            small_change_streak = 0;
        }
    }

    run.final_fields = std::move(fields);
    run.final_trajectory = std::move(traj);
    return run;
}

} // namespace qtr
