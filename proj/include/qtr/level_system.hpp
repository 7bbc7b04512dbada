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
#include <complex>
#include <vector>

#include "qtr/control_field.hpp"

namespace qtr {

using StateVector = Eigen::VectorXcd;

/// A chain of n levels coupled sequentially: level i couples only to level
/// i + 1, and each coupling is driven by one labelled control channel.  In
/// the rotating-wave picture the diagonal holds two-photon detunings (level 1
/// defines the zero of energy) and an optional decay rate gamma_i enters as
/// -i * gamma_i on the diagonal.
class LevelSystem {
public:
    LevelSystem(Eigen::VectorXd detunings, Eigen::VectorXd decay_rates,
                std::vector<Channel> channels);

    /// Three levels, pump coupling 1-2 and Stokes coupling 2-3, with a single
    /// one-photon detuning on level 2.
    static LevelSystem lambda_system(double detuning = 0.0, double decay_rate = 0.0);

    /// Sequential chain with the standard channel layout: pump on the first
    /// coupling, Stokes on the last, intermediate in between (4 levels).
    static LevelSystem sequential_chain(int n_levels, Eigen::VectorXd detunings,
                                        Eigen::VectorXd decay_rates);

    int n_levels() const { return static_cast<int>(detunings_.size()); }
    const Eigen::VectorXd& detunings() const { return detunings_; }
    const Eigen::VectorXd& decay_rates() const { return decay_rates_; }
    const std::vector<Channel>& channels() const { return channels_; }
    bool has_decay() const { return decay_rates_.maxCoeff() > 0.0; }

    /// Index of the coupling (bond) driven by the given channel.
    int bond_of(Channel c) const;

    /// Copy of this system with the decay rate of one level replaced.
    LevelSystem with_decay(int level, double rate) const;

private:
    Eigen::VectorXd detunings_;
    Eigen::VectorXd decay_rates_;
    std::vector<Channel> channels_;
};

/// Coupling operator mu_c of a channel: ones at the two off-diagonal entries
/// of the bond it drives, zero elsewhere.
Eigen::MatrixXd coupling_operator(const LevelSystem& system, Channel channel);

/// Hermitian part of the Hamiltonian (detunings + couplings, no decay) for
/// one value of each channel, ordered like system.channels().
Eigen::MatrixXd real_hamiltonian(const LevelSystem& system, const Eigen::VectorXd& channel_values);

/// Full Hamiltonian including -i * gamma decay terms on the diagonal.
Eigen::MatrixXcd hamiltonian(const LevelSystem& system, const Eigen::VectorXd& channel_values);

/// Hamiltonian sampled at grid point step_index.  Exactly one field per
/// coupling must be supplied; fields are matched to couplings by label.
Eigen::MatrixXcd build_hamiltonian(const LevelSystem& system,
                                   const std::vector<ControlField>& fields, int step_index);

/// Populations |a_i|^2 of a state.
Eigen::VectorXd populations(const StateVector& state);

/// Reorders pointers to the fields so entry b drives bond b of the system.
/// Throws if a coupling is missing a field, a label repeats, a field's label
/// is not part of the topology, or the fields live on different grids.
std::vector<const ControlField*> fields_by_bond(const LevelSystem& system,
                                                const std::vector<ControlField>& fields);

} // namespace qtr
