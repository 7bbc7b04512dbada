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

#include "qtr/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

#include "qtr/errors.hpp"
#include "qtr/propagator.hpp"
#include "qtr/stirap.hpp"

namespace qtr {

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// Rounding to 12 significant digits keeps replay diffs of summary.json clean.
double round_sig(double v) {
    if (v == 0.0 || !std::isfinite(v)) return v;
    const double mag = std::pow(10.0, 11.0 - std::floor(std::log10(std::abs(v))));
    return std::round(v * mag) / mag;
}

json num(double v) { return round_sig(v); }

json num_array(const std::vector<double>& values) {
    json a = json::array();
    for (double v : values) a.push_back(num(v));
    return a;
}

json num_array(const Eigen::VectorXd& values) {
    json a = json::array();
    for (Eigen::Index i = 0; i < values.size(); ++i) a.push_back(num(values[i]));
    return a;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        out << content;
        out.flush();
        if (!out)
            throw std::runtime_error("failed writing '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

std::string populations_csv(const Trajectory& traj) {
    const int n = static_cast<int>(traj.states.front().size());
    std::string out = "t_fs";
    for (int i = 1; i <= n; ++i) out += ",P" + std::to_string(i);
    out += ",norm\n";
    for (int k = 0; k < traj.grid.n_points(); ++k) {
        out += fmt(traj.grid.time(k));
        for (int i = 0; i < n; ++i) out += "," + fmt(traj.populations_history(k, i));
        out += "," + fmt(traj.norm_history[k]);
        out += "\n";
    }
    return out;
}

std::string fields_csv(const std::vector<ControlField>& fields) {
    const TimeGrid& grid = fields.front().grid();
    std::string out = "t_fs";
    for (const auto& f : fields) out += std::string(",") + channel_name(f.label());
    out += "\n";
    for (int k = 0; k < grid.n_points(); ++k) {
        out += fmt(grid.time(k));
        for (const auto& f : fields) out += "," + fmt(f[k]);
        out += "\n";
    }
    return out;
}

std::string convergence_csv(const std::vector<IterationRecord>& records) {
    std::string out = "iteration,J,yield,penalty,constraint\n";
    for (std::size_t i = 0; i < records.size(); ++i) {
        out += std::to_string(i);
        out += "," + fmt(records[i].j_total);
        out += "," + fmt(records[i].yield);
        out += "," + fmt(records[i].penalty);
        out += "," + fmt(records[i].constraint);
        out += "\n";
    }
    return out;
}

std::string sweep_csv(const SweepResult& r) {
    std::string out = "param,mean_P_target,sd_P_target,n_realizations\n";
    for (std::size_t i = 0; i < r.parameter_values.size(); ++i) {
        out += fmt(r.parameter_values[i]);
        out += "," + fmt(r.mean_p_target[i]);
        out += "," + fmt(r.sd_p_target[i]);
        out += "," + std::to_string(r.n_realizations);
        out += "\n";
    }
    return out;
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::clamp(hw, 1u, 8u));
}

LevelSystem system_from(const SystemConfig& sys) {
    Eigen::VectorXd det = Eigen::VectorXd::Zero(sys.levels);
    for (std::size_t i = 0; i < sys.detunings.size(); ++i)
        det[static_cast<Eigen::Index>(i)] = sys.detunings[i];
    return LevelSystem::sequential_chain(sys.levels, std::move(det),
                                         Eigen::VectorXd::Zero(sys.levels));
}

StirapParams stirap_params_from(const StirapSection& st, double t_total) {
    if (st.omega_max) {
        StirapParams p{*st.omega_max, st.sigma_fs, st.delay_fs, t_total};
        p.validate();
        return p;
    }
    return params_for_adiabaticity(st.adiabaticity, st.sigma_fs, st.delay_fs, t_total);
}

OctConfig oct_config_from(const OctSection& o) {
    OctConfig cfg;
    cfg.lambda0 = o.lambda0;
    cfg.lambda_b = o.lambda_b;
    cfg.max_iterations = o.max_iterations;
    cfg.convergence_tol = o.convergence_tol;
    if (o.target_level) cfg.target_level = *o.target_level - 1;
    for (int lvl : o.allowed_levels) cfg.allowed_levels.push_back(lvl - 1);
    return cfg;
}

std::vector<int> forbidden_levels(const OctConfig& cfg, int n) {
    std::vector<bool> allowed(static_cast<std::size_t>(n), false);
    if (cfg.allowed_levels.empty()) {
        allowed.front() = true;
        allowed.back() = true;
    } else {
        for (int lvl : cfg.allowed_levels) allowed[static_cast<std::size_t>(lvl)] = true;
    }
    std::vector<int> forbidden;
    for (int i = 0; i < n; ++i)
        if (!allowed[static_cast<std::size_t>(i)]) forbidden.push_back(i);
    return forbidden;
}

double peak_forbidden_population(const Trajectory& traj, const std::vector<int>& forbidden) {
    double peak = 0.0;
    for (int k = 0; k < traj.grid.n_points(); ++k) {
        double acc = 0.0;
        for (int lvl : forbidden) acc += traj.populations_history(k, lvl);
        peak = std::max(peak, acc);
    }
    return peak;
}

double integrated_forbidden_population(const Trajectory& traj, const std::vector<int>& forbidden) {
    auto value = [&](int k) {
        double acc = 0.0;
        for (int lvl : forbidden) acc += traj.populations_history(k, lvl);
        return acc;
    };
    double acc = 0.5 * (value(0) + value(traj.grid.n_steps()));
    for (int k = 1; k < traj.grid.n_steps(); ++k) acc += value(k);
    return acc * traj.grid.dt();
}

std::vector<PeakInfo> find_intermediate_peaks(const Trajectory& traj) {
    const int n = static_cast<int>(traj.states.front().size());
    std::vector<PeakInfo> peaks;
    for (int lvl = 1; lvl + 1 < n; ++lvl) {
        int best = 0;
        for (int k = 1; k < traj.grid.n_points(); ++k)
            if (traj.populations_history(k, lvl) > traj.populations_history(best, lvl)) best = k;
        peaks.push_back(PeakInfo{lvl, traj.populations_history(best, lvl), traj.grid.time(best)});
    }
    return peaks;
}

json channels_json(const OrderingReport& report) {
    json arr = json::array();
    for (const auto& d : report.channels) {
        arr.push_back(json{{"label", channel_name(d.label)},
                           {"centroid_fs", num(d.centroid_fs)},
                           {"fwhm_fs", num(d.fwhm_fs)},
                           {"half_lo_fs", num(d.half_lo_fs)},
                           {"half_hi_fs", num(d.half_hi_fs)},
                           {"peak_amplitude", num(d.peak_amplitude)},
                           {"peak_time_fs", num(d.peak_time_fs)}});
    }
    return arr;
}

json peaks_json(const std::vector<PeakInfo>& peaks) {
    json arr = json::array();
    for (const auto& p : peaks)
        arr.push_back(json{{"level", p.level + 1},
                           {"population", num(p.population)},
                           {"t_fs", num(p.time_fs)}});
    return arr;
}

json sweep_json(const SweepCurve& curve, double peak_amplitude) {
    json j{{"label", curve.label},
           {"axis", curve.result.axis == SweepAxis::alpha ? "alpha" : "beta"},
           {"field_energy", num(curve.result.field_energy)},
           {"n_realizations", curve.result.n_realizations},
           {"param", num_array(curve.result.parameter_values)},
           {"mean_P_target", num_array(curve.result.mean_p_target)},
           {"sd_P_target", num_array(curve.result.sd_p_target)},
           {"peak_amplitude", num(peak_amplitude)}};
    if (curve.result.axis == SweepAxis::alpha && peak_amplitude > 0.0) {
        std::vector<double> rel;
        rel.reserve(curve.result.parameter_values.size());
        for (double a : curve.result.parameter_values) rel.push_back(a / peak_amplitude);
        j["param_relative_to_peak"] = num_array(rel);
    }
    return j;
}

double peak_amplitude_of(const std::vector<ControlField>& fields) {
    double peak = 0.0;
    for (const auto& f : fields) peak = std::max(peak, f.samples().cwiseAbs().maxCoeff());
    return peak;
}

// Fields of a KrotovRun are already in topology order.
std::vector<ControlField> stirap_field_vector(const StirapParams& params, const TimeGrid& grid) {
    auto [pump, stokes] = make_stirap_fields(params, grid);
    std::vector<ControlField> fields;
    fields.push_back(std::move(pump));
    fields.push_back(std::move(stokes));
    return fields;
}

json base_summary(const ExperimentConfig& cfg, std::uint64_t seed, const TimeGrid& grid,
                  const ExperimentResult& result, int target_level) {
    json j;
    j["kind"] = kind_name(cfg.kind);
    j["seed"] = seed;
    j["grid"] = json{{"t_total_fs", num(grid.t_end())}, {"n_steps", grid.n_steps()}};
    j["levels"] = cfg.system.levels;
    j["final"] = json{{"populations", num_array(result.final_populations)},
                      {"norm", num(result.final_norm)},
                      {"p_target", num(result.final_populations[target_level])},
                      {"target_level", target_level + 1}};
    j["intermediate_peaks"] = peaks_json(result.intermediate_peaks);
    j["channels"] = channels_json(result.ordering);
    j["ordering"] = result.ordering.verdict == PulseOrdering::counterintuitive
                        ? "counterintuitive"
                        : "intuitive";
    j["field_energy"] = num(result.primary_field_energy);
    return j;
}

json oct_json(const OctConfig& cfg, const KrotovRun& run, double integrated_forbidden,
              double peak_forbidden) {
    const IterationRecord& last = run.iterations.back();
    return json{{"lambda0", num(cfg.lambda0)},
                {"lambda_b", num(cfg.lambda_b)},
                {"iterations", run.iterations.size() - 1},
                {"converged", run.converged},
                {"monotonic", run.monotonic},
                {"final_j", num(last.j_total)},
                {"final_yield", num(last.yield)},
                {"final_penalty", num(last.penalty)},
                {"final_constraint", num(last.constraint)},
                {"time_integrated_forbidden", num(integrated_forbidden)},
                {"peak_forbidden", num(peak_forbidden)}};
}

json stirap_json(const StirapParams& p) {
    return json{{"omega_max", num(p.omega_max)},
                {"sigma_fs", num(p.sigma_fs)},
                {"delay_fs", num(p.delay_fs)},
                {"overlap_time_fs", num(overlap_time(p))},
                {"adiabaticity", num(adiabaticity(p))}};
}

void fill_final_state(ExperimentResult& result, const Trajectory& traj) {
    result.final_populations = traj.populations_history.row(traj.grid.n_steps());
    result.final_norm = traj.norm_history[traj.grid.n_steps()];
    result.intermediate_peaks = find_intermediate_peaks(traj);
}

ExperimentResult run_stirap_kind(const ExperimentConfig& cfg, std::uint64_t seed,
                                 const std::filesystem::path& out) {
    const TimeGrid grid(cfg.system.t_total_fs, cfg.system.n_steps);
    const LevelSystem system = system_from(cfg.system);
    const StirapParams params = stirap_params_from(*cfg.stirap, grid.t_end());
    const std::vector<ControlField> fields = stirap_field_vector(params, grid);

    StateVector psi0 = StateVector::Zero(system.n_levels());
    psi0[0] = 1.0;
    const Trajectory traj = propagate_forward(system, fields, psi0);

    ExperimentResult result;
    result.kind = cfg.kind;
    result.grid = grid;
    fill_final_state(result, traj);
    result.ordering = pulse_ordering(fields);
    result.primary_field_energy = field_energy(fields);
    result.stirap_adiabaticity = adiabaticity(params);
    result.out_path = out;

    const int target = system.n_levels() - 1;
    json j = base_summary(cfg, seed, grid, result, target);
    j["stirap"] = stirap_json(params);
    result.summary = std::move(j);

    write_atomic(out / "populations.csv", populations_csv(traj));
    write_atomic(out / "fields.csv", fields_csv(fields));
    write_atomic(out / "summary.json", result.summary.dump(2) + "\n");
    return result;
}

ExperimentResult run_oct_kind(const ExperimentConfig& cfg, std::uint64_t seed,
                              const std::filesystem::path& out) {
    const TimeGrid grid(cfg.system.t_total_fs, cfg.system.n_steps);
    const LevelSystem system = system_from(cfg.system);
    const OctConfig oct_cfg = oct_config_from(*cfg.oct);
    const std::vector<ControlField> guess = gaussian_guess(
        system, grid, cfg.oct->guess_amplitude, cfg.oct->guess_sigma_fs, cfg.oct->guess_delay_fs);

    KrotovRun run = krotov_iterate(system, oct_cfg, guess);

    ExperimentResult result;
    result.kind = cfg.kind;
    result.grid = grid;
    fill_final_state(result, run.final_trajectory);
    result.ordering = pulse_ordering(run.final_fields);
    result.primary_field_energy = field_energy(run.final_fields);
    result.out_path = out;

    const std::vector<int> forbidden = forbidden_levels(oct_cfg, system.n_levels());
    const double integrated = integrated_forbidden_population(run.final_trajectory, forbidden);
    const double peak = peak_forbidden_population(run.final_trajectory, forbidden);
    const int target =
        oct_cfg.target_level < 0 ? system.n_levels() - 1 : oct_cfg.target_level;

    json j = base_summary(cfg, seed, grid, result, target);
    j["oct"] = oct_json(oct_cfg, run, integrated, peak);
    if (cfg.kind == ExperimentKind::four_level) {
        const auto& channels = result.ordering.channels;
        const PulseDiagnostics* pump = nullptr;
        const PulseDiagnostics* mid = nullptr;
        const PulseDiagnostics* stokes = nullptr;
        for (const auto& d : channels) {
            if (d.label == Channel::pump) pump = &d;
            if (d.label == Channel::intermediate) mid = &d;
            if (d.label == Channel::stokes) stokes = &d;
        }
        StraddlingReport rep{false, false, false, false};
        if (pump != nullptr && mid != nullptr && stokes != nullptr) {
            rep.intermediate_has_largest_peak = mid->peak_amplitude >= pump->peak_amplitude &&
                                                mid->peak_amplitude >= stokes->peak_amplitude;
            rep.overlaps_pump =
                mid->half_lo_fs < pump->half_hi_fs && pump->half_lo_fs < mid->half_hi_fs;
            rep.overlaps_stokes =
                mid->half_lo_fs < stokes->half_hi_fs && stokes->half_lo_fs < mid->half_hi_fs;
            rep.verdict = rep.intermediate_has_largest_peak && rep.overlaps_pump &&
                          rep.overlaps_stokes;
        }
        result.straddling = rep;
        j["straddling"] = json{{"intermediate_has_largest_peak", rep.intermediate_has_largest_peak},
                               {"overlaps_pump", rep.overlaps_pump},
                               {"overlaps_stokes", rep.overlaps_stokes},
                               {"verdict", rep.verdict}};
    }
    result.summary = std::move(j);

    write_atomic(out / "populations.csv", populations_csv(run.final_trajectory));
    write_atomic(out / "fields.csv", fields_csv(run.final_fields));
    write_atomic(out / "convergence.csv", convergence_csv(run.iterations));
    write_atomic(out / "summary.json", result.summary.dump(2) + "\n");
    result.oct = std::move(run);
    return result;
}

ExperimentResult run_robustness_kind(const ExperimentConfig& cfg, std::uint64_t seed,
                                     const std::filesystem::path& out, int threads) {
    const TimeGrid grid(cfg.system.t_total_fs, cfg.system.n_steps);
    const LevelSystem system = system_from(cfg.system);
    const RobustnessSection& rob = *cfg.robustness;
    const OctConfig oct_cfg = oct_config_from(*cfg.oct);
    const std::vector<ControlField> guess = gaussian_guess(
        system, grid, cfg.oct->guess_amplitude, cfg.oct->guess_sigma_fs, cfg.oct->guess_delay_fs);

    KrotovRun run = krotov_iterate(system, oct_cfg, guess);
    const double oct_energy = field_energy(run.final_fields);

    // Reference pulse pair: energy-matched to the optimized fields unless the
    // config pins omega_max / adiabaticity explicitly.
    StirapParams base_params = stirap_params_from(*cfg.stirap, grid.t_end());
    const StirapParams matched_params =
        rob.match_energy ? match_energy(base_params, grid, oct_energy) : base_params;
    const std::vector<ControlField> stirap_fields = stirap_field_vector(matched_params, grid);

    const int target = oct_cfg.target_level < 0 ? system.n_levels() - 1 : oct_cfg.target_level;
    SweepSettings settings;
    settings.axis = cfg.kind == ExperimentKind::robustness_alpha ? SweepAxis::alpha
                                                                 : SweepAxis::beta;
    settings.ladder = rob.ladder;
    settings.n_realizations = rob.realizations;
    settings.seed = seed;
    settings.target_level = target;
    settings.decay_level = rob.decay_level - 1;
    settings.gamma = 1.0 / grid.t_end();
    settings.threads = threads;

    ExperimentResult result;
    result.kind = cfg.kind;
    result.grid = grid;
    fill_final_state(result, run.final_trajectory);
    result.ordering = pulse_ordering(run.final_fields);
    result.primary_field_energy = oct_energy;
    result.stirap_adiabaticity = adiabaticity(matched_params);
    result.out_path = out;

    std::vector<double> curve_peak_amps;
    result.sweeps.push_back(SweepCurve{"oct", sweep(system, run.final_fields, settings)});
    curve_peak_amps.push_back(peak_amplitude_of(run.final_fields));
    result.sweeps.push_back(SweepCurve{"stirap", sweep(system, stirap_fields, settings)});
    curve_peak_amps.push_back(peak_amplitude_of(stirap_fields));
    for (double a : rob.stirap_adiabaticities) {
        const StirapParams extra =
            params_for_adiabaticity(a, base_params.sigma_fs, base_params.delay_fs, grid.t_end());
        char label[64];
        std::snprintf(label, sizeof label, "stirap_%g", a);
        const std::vector<ControlField> extra_fields = stirap_field_vector(extra, grid);
        result.sweeps.push_back(SweepCurve{label, sweep(system, extra_fields, settings)});
        curve_peak_amps.push_back(peak_amplitude_of(extra_fields));
    }
    result.pulse_width_ratio = fwhm_ratio(stirap_fields, run.final_fields);

    const std::vector<int> forbidden = forbidden_levels(oct_cfg, system.n_levels());
    const double integrated = integrated_forbidden_population(run.final_trajectory, forbidden);
    const double peak = peak_forbidden_population(run.final_trajectory, forbidden);

    json j = base_summary(cfg, seed, grid, result, target);
    j["oct"] = oct_json(oct_cfg, run, integrated, peak);
    j["stirap"] = stirap_json(matched_params);
    j["stirap"]["matched_energy"] = rob.match_energy;
    j["robustness"] = json{{"axis", settings.axis == SweepAxis::alpha ? "alpha" : "beta"},
                           {"ladder", num_array(rob.ladder)},
                           {"realizations", rob.realizations},
                           {"decay_level", rob.decay_level},
                           {"gamma_per_fs", num(settings.gamma)}};
    j["pulse_width_ratio"] = num(*result.pulse_width_ratio);
    json sweeps = json::array();
    for (std::size_t i = 0; i < result.sweeps.size(); ++i)
        sweeps.push_back(sweep_json(result.sweeps[i], curve_peak_amps[i]));
    j["sweeps"] = std::move(sweeps);
    result.summary = std::move(j);

    write_atomic(out / "populations.csv", populations_csv(run.final_trajectory));
    write_atomic(out / "fields.csv", fields_csv(run.final_fields));
    write_atomic(out / "fields_stirap.csv", fields_csv(stirap_fields));
    write_atomic(out / "convergence.csv", convergence_csv(run.iterations));
    write_atomic(out / "sweep.csv", sweep_csv(result.sweeps[0].result));
    for (std::size_t i = 1; i < result.sweeps.size(); ++i)
        write_atomic(out / ("sweep_" + result.sweeps[i].label + ".csv"),
                     sweep_csv(result.sweeps[i].result));
    write_atomic(out / "summary.json", result.summary.dump(2) + "\n");
    result.oct = std::move(run);
    return result;
}

} // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& opts) {
    if (config.kind == ExperimentKind::calibrate)
        throw ConfigError("kind=calibrate configs run through the calibrate command");
    const std::uint64_t seed = opts.seed.value_or(config.seed);
    const std::filesystem::path out(opts.out_dir.value_or(config.out_dir));
    std::filesystem::create_directories(out);
    const int threads = resolve_threads(opts.threads);

    switch (config.kind) {
        case ExperimentKind::stirap:
            return run_stirap_kind(config, seed, out);
        case ExperimentKind::oct_standard:
        case ExperimentKind::oct_constrained:
        case ExperimentKind::four_level:
            return run_oct_kind(config, seed, out);
        case ExperimentKind::robustness_alpha:
        case ExperimentKind::robustness_beta:
            return run_robustness_kind(config, seed, out, threads);
        case ExperimentKind::calibrate:
            break;
    }
    throw ConfigError("unsupported experiment kind");
}

CalibrationResult run_calibration(const ExperimentConfig& config, const RunOptions& opts) {
    if (config.kind != ExperimentKind::calibrate)
        throw ConfigError("run_calibration requires kind=calibrate");
    const std::filesystem::path out(opts.out_dir.value_or(config.out_dir));
    std::filesystem::create_directories(out);

    const TimeGrid grid(config.system.t_total_fs, config.system.n_steps);
    const LevelSystem system = system_from(config.system);
    const CalibrateSection& cal = *config.calibrate;
    const std::vector<ControlField> guess =
        gaussian_guess(system, grid, config.oct->guess_amplitude, config.oct->guess_sigma_fs,
                       config.oct->guess_delay_fs);

    OctConfig base = oct_config_from(*config.oct);
    base.max_iterations = cal.max_iterations;
    base.record_field_history = false;

    CalibrationResult result{{}, false, 0.0, 0.0, json::object(), out};
    int best = -1;
    for (double lb : cal.lambda_b_grid) {
        for (double l0 : cal.lambda0_grid) {
            OctConfig oct_cfg = base;
            oct_cfg.lambda0 = l0;
            oct_cfg.lambda_b = lb;
            const KrotovRun run = krotov_iterate(system, oct_cfg, guess);
            const std::vector<int> forbidden = forbidden_levels(oct_cfg, system.n_levels());
            CalibrationRow row;
            row.lambda0 = l0;
            row.lambda_b = lb;
            row.yield = run.iterations.back().yield;
            row.peak_forbidden = peak_forbidden_population(run.final_trajectory, forbidden);
            row.iterations = static_cast<int>(run.iterations.size()) - 1;
            row.converged = run.converged;
            row.monotonic = run.monotonic;
            row.meets = run.monotonic && row.yield >= cal.yield_min &&
                        row.peak_forbidden <= cal.peak_forbidden_max;
            result.table.push_back(row);
            if (row.meets) {
                const int i = static_cast<int>(result.table.size()) - 1;
                if (best < 0) {
                    best = i;
                } else {
                    const CalibrationRow& b = result.table[static_cast<std::size_t>(best)];
                    if (row.lambda_b < b.lambda_b ||
                        (row.lambda_b == b.lambda_b &&
                         (row.yield > b.yield ||
                          (row.yield == b.yield && row.lambda0 < b.lambda0))))
                        best = i;
                }
            }
        }
    }

    std::string csv =
        "lambda0,lambda_b,yield,peak_forbidden,iterations,converged,monotonic,selected\n";
    for (std::size_t i = 0; i < result.table.size(); ++i) {
        const CalibrationRow& r = result.table[i];
        csv += fmt(r.lambda0);
        csv += "," + fmt(r.lambda_b);
        csv += "," + fmt(r.yield);
        csv += "," + fmt(r.peak_forbidden);
        csv += "," + std::to_string(r.iterations);
        csv += std::string(",") + (r.converged ? "1" : "0");
        csv += std::string(",") + (r.monotonic ? "1" : "0");
        csv += std::string(",") + (static_cast<int>(i) == best ? "1" : "0");
        csv += "\n";
    }

    json report{{"kind", "calibrate"},
                {"success", best >= 0},
                {"rows", result.table.size()},
                {"thresholds", json{{"yield_min", num(cal.yield_min)},
                                    {"peak_forbidden_max", num(cal.peak_forbidden_max)},
                                    {"max_iterations", cal.max_iterations}}}};
    if (best >= 0) {
        const CalibrationRow& b = result.table[static_cast<std::size_t>(best)];
        result.success = true;
        result.lambda0 = b.lambda0;
        result.lambda_b = b.lambda_b;
        report["lambda0"] = num(b.lambda0);
        report["lambda_b"] = num(b.lambda_b);
        report["yield"] = num(b.yield);
        report["peak_forbidden"] = num(b.peak_forbidden);
        report["iterations"] = b.iterations;
    }
    result.report = report;

    write_atomic(out / "calibration.csv", csv);
    write_atomic(out / "calibration.json", report.dump(2) + "\n");
    return result;
}

} // namespace qtr
