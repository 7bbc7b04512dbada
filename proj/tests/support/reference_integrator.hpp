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

// Slow but independent reference integration used only by the tests: classic
// fixed-step RK4 on the raw equations of motion, with the Hamiltonian either
// frozen per interval (to validate the production stepping convention with a
// much finer step) or evaluated from analytic field functions (to measure
// the convergence order of the production scheme).

#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "qtr/level_system.hpp"
#include "qtr/propagator.hpp"

namespace qtr::testing {

using Complex = std::complex<double>;
using Rhs = std::function<Eigen::VectorXcd(double, const Eigen::VectorXcd&)>;
using FieldFn = std::function<double(double)>;

inline Eigen::VectorXcd rk4(const Rhs& f, Eigen::VectorXcd y, double t0, double t1, int steps) {
    const double h = (t1 - t0) / steps;
    for (int i = 0; i < steps; ++i) {
        const double t = t0 + i * h;
        const Eigen::VectorXcd k1 = f(t, y);
        const Eigen::VectorXcd k2 = f(t + 0.5 * h, y + (0.5 * h) * k1);
        const Eigen::VectorXcd k3 = f(t + 0.5 * h, y + (0.5 * h) * k2);
        const Eigen::VectorXcd k4 = f(t + h, y + h * k3);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return y;
}

inline Eigen::VectorXd midpoint_values(const std::vector<const ControlField*>& by_bond,
                                       int interval) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(by_bond.size()));
    for (std::size_t b = 0; b < by_bond.size(); ++b)
        v[static_cast<Eigen::Index>(b)] = by_bond[b]->midpoint_value(interval);
    return v;
}

/// States at all grid points for the production convention (frozen midpoint
/// Hamiltonian per interval), integrated with RK4 substeps per interval.
inline std::vector<Eigen::VectorXcd> forward_reference(const LevelSystem& system,
                                                       const std::vector<ControlField>& fields,
                                                       const Eigen::VectorXcd& initial,
                                                       int substeps) {
    const auto by_bond = fields_by_bond(system, fields);
    const TimeGrid& grid = by_bond.front()->grid();
    std::vector<Eigen::VectorXcd> states;
    states.reserve(static_cast<std::size_t>(grid.n_points()));
    states.push_back(initial);
    for (int k = 0; k < grid.n_steps(); ++k) {
        const Eigen::MatrixXcd h = hamiltonian(system, midpoint_values(by_bond, k));
        const Rhs f = [&h](double, const Eigen::VectorXcd& y) {
            return (Complex(0.0, -1.0) * (h * y)).eval();
        };
        states.push_back(rk4(f, states.back(), 0.0, grid.dt(), substeps));
    }
    return states;
}

/// Backward counterpart of forward_reference for the adjoint-generator
/// equation, optionally with the linear-in-t source used by the costate.
inline std::vector<Eigen::VectorXcd> backward_reference(
    const LevelSystem& system, const std::vector<ControlField>& fields,
    const Eigen::VectorXcd& final_state, int substeps,
    const std::vector<Eigen::VectorXcd>* source = nullptr) {
    const auto by_bond = fields_by_bond(system, fields);
    const TimeGrid& grid = by_bond.front()->grid();
    const double h = grid.dt();
    std::vector<Eigen::VectorXcd> states(static_cast<std::size_t>(grid.n_points()));
    states.back() = final_state;
    for (int k = grid.n_steps() - 1; k >= 0; --k) {
        Eigen::MatrixXcd hk = hamiltonian(system, midpoint_values(by_bond, k));
        hk.adjointInPlace();
        Eigen::VectorXcd s_lo, s_hi;
        if (source != nullptr) {
            s_lo = (*source)[static_cast<std::size_t>(k)];
            s_hi = (*source)[static_cast<std::size_t>(k) + 1];
        }
        // Reversed time u runs from t_{k+1} down to t_k.
        const Rhs f = [&](double u, const Eigen::VectorXcd& y) {
            Eigen::VectorXcd rhs = Complex(0.0, 1.0) * (hk * y);
            if (source != nullptr) rhs -= s_hi + (u / h) * (s_lo - s_hi);
            return rhs.eval();
        };
        states[static_cast<std::size_t>(k)] =
            rk4(f, states[static_cast<std::size_t>(k) + 1], 0.0, h, substeps);
    }
    return states;
}

/// Fully continuous reference: analytic per-bond field functions, RK4 over
/// the whole window with total_steps steps.
inline Eigen::VectorXcd forward_analytic(const LevelSystem& system,
                                         const std::vector<FieldFn>& bond_fields,
                                         Eigen::VectorXcd initial, double t_end,
                                         int total_steps) {
    const Rhs f = [&](double t, const Eigen::VectorXcd& y) {
        Eigen::VectorXd values(static_cast<Eigen::Index>(bond_fields.size()));
        for (std::size_t b = 0; b < bond_fields.size(); ++b)
            values[static_cast<Eigen::Index>(b)] = bond_fields[b](t);
        const Eigen::MatrixXcd h = hamiltonian(system, values);
        return (Complex(0.0, -1.0) * (h * y)).eval();
    };
    return rk4(f, std::move(initial), 0.0, t_end, total_steps);
}

} // namespace qtr::testing
