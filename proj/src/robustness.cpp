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

#include "qtr/robustness.hpp"

#include <atomic>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

#include "qtr/propagator.hpp"
#include "qtr/pulse_analysis.hpp"

namespace qtr {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Uniform [-1, 1) stream, reproducible bit for bit: mt19937_64 output mapped
// through the top 53 bits, avoiding the implementation-defined distributions.
Eigen::VectorXd noise_stream(std::uint64_t seed, Channel channel, int n) {
    std::mt19937_64 engine(
        splitmix64(seed ^ (0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(channel) + 1))));
    Eigen::VectorXd zeta(n);
    for (int k = 0; k < n; ++k) {
        const std::uint64_t u = engine() >> 11;
        zeta[k] = static_cast<double>(u) * (2.0 / 9007199254740992.0) - 1.0;
    }
    return zeta;
}

std::uint64_t realization_seed(std::uint64_t seed, int realization) {
    return splitmix64(seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(realization) + 1));
}

} // namespace

std::vector<ControlField> perturb_fields(const std::vector<ControlField>& fields,
                                         const NoiseSpec& spec) {
    if (spec.alpha < 0.0)
        throw std::invalid_argument("perturb_fields: alpha must be non-negative");
    if (spec.alpha == 0.0) return fields;
    std::vector<ControlField> out;
    out.reserve(fields.size());
    for (const auto& f : fields) {
        const Eigen::VectorXd zeta = noise_stream(spec.seed, f.label(), f.grid().n_points());
        out.push_back(f.with_samples(f.samples() + spec.alpha * zeta));
    }
    return out;
}

double field_energy(const std::vector<ControlField>& fields) {
    double total = 0.0;
    for (const auto& f : fields) {
        const Eigen::VectorXd sq = f.samples().cwiseAbs2();
        double acc = 0.5 * (sq[0] + sq[sq.size() - 1]);
        for (Eigen::Index k = 1; k + 1 < sq.size(); ++k) acc += sq[k];
        total += acc * f.grid().dt();
    }
    return total;
}

StirapParams match_energy(const StirapParams& params, const TimeGrid& grid,
                          double target_energy) {
    if (!(target_energy > 0.0))
        throw std::invalid_argument("match_energy: target energy must be positive");
    const auto [pump, stokes] = make_stirap_fields(params, grid);
    const double current = field_energy({pump, stokes});
    StirapParams out = params;
    out.omega_max = params.omega_max * std::sqrt(target_energy / current);
    return out;
}

SweepResult sweep(const LevelSystem& system, const std::vector<ControlField>& fields,
                  const SweepSettings& settings) {
    if (settings.ladder.empty())
        throw std::invalid_argument("sweep: ladder must not be empty");
    for (double v : settings.ladder)
        if (v < 0.0 || !std::isfinite(v))
            throw std::invalid_argument("sweep: ladder values must be finite and non-negative");
    const int n = system.n_levels();
    const int target = settings.target_level < 0 ? n - 1 : settings.target_level;
    if (target < 0 || target >= n)
        throw std::invalid_argument("sweep: target level out of range");

    StateVector psi0 = StateVector::Zero(n);
    psi0[0] = 1.0;

    const int n_params = static_cast<int>(settings.ladder.size());
    SweepResult result{settings.axis,
                       settings.ladder,
                       std::vector<double>(static_cast<std::size_t>(n_params), 0.0),
                       std::vector<double>(static_cast<std::size_t>(n_params), 0.0),
                       1,
                       field_energy(fields)};

    if (settings.axis == SweepAxis::beta) {
        if (settings.decay_level < 0 || settings.decay_level >= n)
            throw std::invalid_argument("sweep: decay level out of range");
        const double gamma =
            settings.gamma > 0.0 ? settings.gamma : 1.0 / fields.front().grid().t_end();
        for (int i = 0; i < n_params; ++i) {
            const LevelSystem damped =
                system.with_decay(settings.decay_level, settings.ladder[static_cast<std::size_t>(i)] * gamma);
            const Trajectory traj = propagate_forward(damped, fields, psi0);
            result.mean_p_target[static_cast<std::size_t>(i)] =
                traj.populations_history(traj.grid.n_steps(), target);
        }
        return result;
    }

    const int reals = settings.n_realizations;
    if (reals < 1)
        throw std::invalid_argument("sweep: need at least one realization");
    result.n_realizations = reals;

    // One deterministic sub-seed per realization, shared across the ladder so
    // the curves are directly comparable point by point.
    std::vector<double> samples(static_cast<std::size_t>(n_params * reals), 0.0);
    std::atomic<int> next_task{0};
    const int n_tasks = n_params * reals;
    auto worker = [&] {
        for (;;) {
            const int task = next_task.fetch_add(1);
            if (task >= n_tasks) return;
            const int i = task / reals;
            const int r = task % reals;
            const NoiseSpec spec{settings.ladder[static_cast<std::size_t>(i)],
                                 realization_seed(settings.seed, r)};
            const Trajectory traj = propagate_forward(system, perturb_fields(fields, spec), psi0);
            samples[static_cast<std::size_t>(task)] =
                traj.populations_history(traj.grid.n_steps(), target);
        }
    };
    const int n_threads = std::max(1, std::min(settings.threads, n_tasks));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    for (int i = 0; i < n_params; ++i) {
        double mean = 0.0;
        for (int r = 0; r < reals; ++r) mean += samples[static_cast<std::size_t>(i * reals + r)];
        mean /= reals;
        double var = 0.0;
        for (int r = 0; r < reals; ++r) {
            const double dev = samples[static_cast<std::size_t>(i * reals + r)] - mean;
            var += dev * dev;
        }
        result.mean_p_target[static_cast<std::size_t>(i)] = mean;
        result.sd_p_target[static_cast<std::size_t>(i)] =
            reals > 1 ? std::sqrt(var / (reals - 1)) : 0.0;
    }
    return result;
}

double fwhm_ratio(const std::vector<ControlField>& numerator_fields,
                  const std::vector<ControlField>& denominator_fields) {
    auto mean_fwhm = [](const std::vector<ControlField>& fields) {
        if (fields.empty())
            throw std::invalid_argument("fwhm_ratio: empty field list");
        double acc = 0.0;
        for (const auto& f : fields) acc += analyze_pulse(f).fwhm_fs;
        return acc / static_cast<double>(fields.size());
    };
    return mean_fwhm(numerator_fields) / mean_fwhm(denominator_fields);
}

} // namespace qtr
