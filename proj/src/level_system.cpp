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

#include "qtr/level_system.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace qtr {

LevelSystem::LevelSystem(Eigen::VectorXd detunings, Eigen::VectorXd decay_rates,
                         std::vector<Channel> channels)
    : detunings_(std::move(detunings)), decay_rates_(std::move(decay_rates)),
      channels_(std::move(channels)) {
    const auto n = detunings_.size();
    if (n < 2)
        throw std::invalid_argument("LevelSystem: need at least 2 levels");
    if (decay_rates_.size() != n)
        throw std::invalid_argument("LevelSystem: one decay rate per level required");
    if (static_cast<Eigen::Index>(channels_.size()) != n - 1)
        throw std::invalid_argument("LevelSystem: need exactly one channel per coupling");
    if (!detunings_.allFinite() || !decay_rates_.allFinite())
        throw std::invalid_argument("LevelSystem: detunings and decay rates must be finite");
    if (decay_rates_.minCoeff() < 0.0)
        throw std::invalid_argument("LevelSystem: decay rates must be non-negative");
    for (std::size_t a = 0; a < channels_.size(); ++a)
        for (std::size_t b = a + 1; b < channels_.size(); ++b)
            if (channels_[a] == channels_[b])
                throw std::invalid_argument("LevelSystem: channel labels must be distinct");
}

LevelSystem LevelSystem::lambda_system(double detuning, double decay_rate) {
    Eigen::VectorXd det = Eigen::VectorXd::Zero(3);
    det[1] = detuning;
    Eigen::VectorXd dec = Eigen::VectorXd::Zero(3);
    dec[1] = decay_rate;
    return LevelSystem(det, dec, {Channel::pump, Channel::stokes});
}

LevelSystem LevelSystem::sequential_chain(int n_levels, Eigen::VectorXd detunings,
                                          Eigen::VectorXd decay_rates) {
    std::vector<Channel> channels;
    if (n_levels == 3) {
        channels = {Channel::pump, Channel::stokes};
    } else if (n_levels == 4) {
        channels = {Channel::pump, Channel::intermediate, Channel::stokes};
    } else {
        throw std::invalid_argument("sequential_chain: standard layout defined for 3 or 4 levels");
    }
    return LevelSystem(std::move(detunings), std::move(decay_rates), std::move(channels));
}

int LevelSystem::bond_of(Channel c) const {
    const auto it = std::find(channels_.begin(), channels_.end(), c);
    if (it == channels_.end())
        throw std::invalid_argument(std::string("LevelSystem: no coupling driven by channel ") +
                                    channel_name(c));
    return static_cast<int>(it - channels_.begin());
}

LevelSystem LevelSystem::with_decay(int level, double rate) const {
    if (level < 0 || level >= n_levels())
        throw std::invalid_argument("with_decay: level index out of range");
    Eigen::VectorXd dec = decay_rates_;
    dec[level] = rate;
    return LevelSystem(detunings_, std::move(dec), channels_);
}

Eigen::MatrixXd coupling_operator(const LevelSystem& system, Channel channel) {
    const int b = system.bond_of(channel);
    Eigen::MatrixXd mu = Eigen::MatrixXd::Zero(system.n_levels(), system.n_levels());
    mu(b, b + 1) = 1.0;
    mu(b + 1, b) = 1.0;
    return mu;
}

Eigen::MatrixXd real_hamiltonian(const LevelSystem& system, const Eigen::VectorXd& channel_values) {
    const int n = system.n_levels();
    if (channel_values.size() != n - 1)
        throw std::invalid_argument("real_hamiltonian: one value per coupling required");
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    h.diagonal() = system.detunings();
    for (int b = 0; b < n - 1; ++b) {
        h(b, b + 1) = channel_values[b];
        h(b + 1, b) = channel_values[b];
    }
    return h;
}

Eigen::MatrixXcd hamiltonian(const LevelSystem& system, const Eigen::VectorXd& channel_values) {
    Eigen::MatrixXcd h = real_hamiltonian(system, channel_values).cast<std::complex<double>>();
    for (int i = 0; i < system.n_levels(); ++i)
        h(i, i) -= std::complex<double>(0.0, system.decay_rates()[i]);
    return h;
}

Eigen::MatrixXcd build_hamiltonian(const LevelSystem& system,
                                   const std::vector<ControlField>& fields, int step_index) {
    const auto by_bond = fields_by_bond(system, fields);
    if (step_index < 0 || step_index >= by_bond.front()->grid().n_points())
        throw std::invalid_argument("build_hamiltonian: step index out of range");
    Eigen::VectorXd values(system.n_levels() - 1);
    for (int b = 0; b < system.n_levels() - 1; ++b)
        values[b] = (*by_bond[static_cast<std::size_t>(b)])[step_index];
    return hamiltonian(system, values);
}

Eigen::VectorXd populations(const StateVector& state) {
    return state.cwiseAbs2();
}

std::vector<const ControlField*> fields_by_bond(const LevelSystem& system,
                                                const std::vector<ControlField>& fields) {
    const std::size_t n_bonds = static_cast<std::size_t>(system.n_levels() - 1);
    if (fields.size() != n_bonds)
        throw std::invalid_argument("fields_by_bond: exactly one field per coupling required");
    std::vector<const ControlField*> by_bond(n_bonds, nullptr);
    for (const auto& f : fields) {
        const int b = system.bond_of(f.label());
        if (by_bond[static_cast<std::size_t>(b)] != nullptr)
            throw std::invalid_argument(std::string("fields_by_bond: duplicate field for channel ") +
                                        channel_name(f.label()));
        by_bond[static_cast<std::size_t>(b)] = &f;
    }
    for (std::size_t b = 1; b < n_bonds; ++b)
        if (!(by_bond[b]->grid() == by_bond[0]->grid()))
            throw std::invalid_argument("fields_by_bond: fields must share one time grid");
    return by_bond;
}

} // namespace qtr
