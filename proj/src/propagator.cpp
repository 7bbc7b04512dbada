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

#include "qtr/propagator.hpp"

#include <cmath>
#include <complex>
#include <unsupported/Eigen/MatrixFunctions>

#include "qtr/errors.hpp"

namespace qtr {

namespace {

using Complex = std::complex<double>;

// exp(-i dt H) of a real symmetric H through its spectral decomposition;
// unitary to machine precision.
Eigen::MatrixXcd hermitian_exponential(const Eigen::MatrixXd& h, double dt) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    const Eigen::VectorXd& w = es.eigenvalues();
    const Eigen::MatrixXd& v = es.eigenvectors();
    Eigen::VectorXcd phases(w.size());
    for (Eigen::Index j = 0; j < w.size(); ++j)
        phases[j] = std::exp(Complex(0.0, -dt * w[j]));
    return (v * phases.asDiagonal() * v.transpose()).eval();
}

Eigen::MatrixXcd exponential_of(const LevelSystem& system, const Eigen::VectorXd& values,
                                double dt, bool adjoint) {
    if (!system.has_decay()) {
        // H real symmetric; the adjoint step is the same exponential with
        // reversed time direction.
        return hermitian_exponential(real_hamiltonian(system, values), adjoint ? -dt : dt);
    }
    Eigen::MatrixXcd h = hamiltonian(system, values);
    if (adjoint) h.adjointInPlace();
    const Eigen::MatrixXcd a = Complex(0.0, adjoint ? dt : -dt) * h;
    return a.exp();
}

struct BondLayout {
    std::vector<const ControlField*> fields;
    TimeGrid grid;
    int n_bonds;

    Eigen::VectorXd midpoint_values(int interval) const {
        Eigen::VectorXd v(n_bonds);
        for (int b = 0; b < n_bonds; ++b) v[b] = fields[static_cast<std::size_t>(b)]->midpoint_value(interval);
        return v;
    }
};

BondLayout make_layout(const LevelSystem& system, const std::vector<ControlField>& fields) {
    auto by_bond = fields_by_bond(system, fields);
    const TimeGrid grid = by_bond.front()->grid();
    return BondLayout{std::move(by_bond), grid, system.n_levels() - 1};
}

} // namespace

Trajectory assemble_trajectory(const TimeGrid& grid, std::vector<StateVector> states,
                               NormGuard guard) {
    if (static_cast<int>(states.size()) != grid.n_points())
        throw std::invalid_argument("assemble_trajectory: one state per grid point required");
    const int n_points = grid.n_points();
    const auto n = states.front().size();
    Eigen::MatrixXd pops(n_points, n);
    Eigen::VectorXd norms(n_points);
    for (int k = 0; k < n_points; ++k) {
        const StateVector& s = states[static_cast<std::size_t>(k)];
        if (!s.allFinite())
            throw PhysicsError("propagation produced a non-finite state");
        pops.row(k) = s.cwiseAbs2();
        norms[k] = s.norm();
    }
    if (guard == NormGuard::conserve) {
        const double ref = norms[0];
        for (int k = 0; k < n_points; ++k)
            if (std::abs(norms[k] - ref) > 1e-6 * std::max(1.0, ref))
                throw PhysicsError("norm drifted during decay-free propagation");
    } else if (guard == NormGuard::contract) {
        for (int k = 1; k < n_points; ++k)
            if (norms[k] > norms[k - 1] + 1e-9 * (1.0 + norms[k - 1]))
                throw PhysicsError("norm grew under decay");
    }
    return Trajectory{grid, std::move(states), std::move(pops), std::move(norms)};
}

Eigen::MatrixXcd step_operator(const LevelSystem& system, const Eigen::VectorXd& channel_values,
                               double dt) {
    return exponential_of(system, channel_values, dt, false);
}

Eigen::MatrixXcd backward_step_operator(const LevelSystem& system,
                                        const Eigen::VectorXd& channel_values, double dt) {
    return exponential_of(system, channel_values, dt, true);
}

Trajectory propagate_forward(const LevelSystem& system, const std::vector<ControlField>& fields,
                             const StateVector& initial, const PropagateOptions& opts) {
    const auto layout = make_layout(system, fields);
    if (initial.size() != system.n_levels())
        throw std::invalid_argument("propagate_forward: state size does not match system");
    if (opts.require_normalized && std::abs(initial.norm() - 1.0) > 1e-8)
        throw std::invalid_argument("propagate_forward: initial state must be normalized");

    std::vector<StateVector> states(static_cast<std::size_t>(layout.grid.n_points()));
    states[0] = initial;
    const double dt = layout.grid.dt();
    for (int k = 0; k < layout.grid.n_steps(); ++k) {
        const Eigen::MatrixXcd u = exponential_of(system, layout.midpoint_values(k), dt, false);
        states[static_cast<std::size_t>(k) + 1] = u * states[static_cast<std::size_t>(k)];
    }
    return assemble_trajectory(layout.grid, std::move(states),
                    system.has_decay() ? NormGuard::contract : NormGuard::conserve);
}

Trajectory propagate_backward(const LevelSystem& system, const std::vector<ControlField>& fields,
                              const StateVector& final_state) {
    const auto layout = make_layout(system, fields);
    if (final_state.size() != system.n_levels())
        throw std::invalid_argument("propagate_backward: state size does not match system");

    std::vector<StateVector> states(static_cast<std::size_t>(layout.grid.n_points()));
    states.back() = final_state;
    const double dt = layout.grid.dt();
    for (int k = layout.grid.n_steps() - 1; k >= 0; --k) {
        const Eigen::MatrixXcd u = exponential_of(system, layout.midpoint_values(k), dt, true);
        states[static_cast<std::size_t>(k)] = u * states[static_cast<std::size_t>(k) + 1];
    }
    // The adjoint generator makes the backward norm non-decreasing toward
    // earlier times when decay is present.
    return assemble_trajectory(layout.grid, std::move(states),
                    system.has_decay() ? NormGuard::none : NormGuard::conserve);
}

Trajectory propagate_backward_inhomogeneous(const LevelSystem& system,
                                            const std::vector<ControlField>& fields,
                                            const StateVector& final_state,
                                            const InhomogeneousSource& source) {
    const auto layout = make_layout(system, fields);
    const int n = system.n_levels();
    if (final_state.size() != n)
        throw std::invalid_argument("propagate_backward_inhomogeneous: state size mismatch");
    if (!(source.grid == layout.grid))
        throw std::invalid_argument("propagate_backward_inhomogeneous: source grid mismatch");
    if (static_cast<int>(source.vectors.size()) != layout.grid.n_points())
        throw std::invalid_argument("propagate_backward_inhomogeneous: one source vector per grid point");
    for (const auto& v : source.vectors)
        if (v.size() != n || !v.allFinite())
            throw std::invalid_argument("propagate_backward_inhomogeneous: bad source vector");

    std::vector<StateVector> states(static_cast<std::size_t>(layout.grid.n_points()));
    states.back() = final_state;
    const double h = layout.grid.dt();
    // In the reversed time u = t_{k+1} - t the equation reads
    //   d psi / du = i H^dagger psi - s(t_{k+1} - u),
    // a linear system with a source that is linear in u.  Augmenting the state
    // with the monomials (u, 1) turns one interval into a single matrix
    // exponential, exact for the frozen Hamiltonian.
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n + 2, n + 2);
    Eigen::VectorXcd y(n + 2);
    for (int k = layout.grid.n_steps() - 1; k >= 0; --k) {
        Eigen::MatrixXcd hk = hamiltonian(system, layout.midpoint_values(k));
        hk.adjointInPlace();
        const StateVector& s_lo = source.vectors[static_cast<std::size_t>(k)];
        const StateVector& s_hi = source.vectors[static_cast<std::size_t>(k) + 1];
        m.topLeftCorner(n, n) = Complex(0.0, 1.0) * hk;
        m.col(n).head(n) = (s_hi - s_lo) / h;
        m.col(n + 1).head(n) = -s_hi;
        m(n, n + 1) = 1.0;
        y.head(n) = states[static_cast<std::size_t>(k) + 1];
        y[n] = 0.0;
        y[n + 1] = 1.0;
        const Eigen::MatrixXcd step = (m * h).exp();
        states[static_cast<std::size_t>(k)] = (step * y).head(n);
    }
    return assemble_trajectory(layout.grid, std::move(states), NormGuard::none);
}

} // namespace qtr
