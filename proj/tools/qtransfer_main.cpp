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

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qtr/errors.hpp"
#include "qtr/experiment.hpp"

namespace {

struct Args {
    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    int threads = 0;
    bool has_out = false;
    bool has_seed = false;
};

void add_common(CLI::App* sub, Args& args) {
    sub->add_option("config", args.config, "experiment config file")->required();
    auto* out = sub->add_option("--out", args.out, "output directory (overrides config)");
    auto* seed = sub->add_option("--seed", args.seed, "noise seed (overrides config)");
    sub->add_option("--threads", args.threads, "worker threads for ensemble sweeps");
    sub->final_callback([&args, out, seed] {
        args.has_out = out->count() > 0;
        args.has_seed = seed->count() > 0;
    });
}

qtr::RunOptions options_from(const Args& args) {
    qtr::RunOptions opts;
    if (args.has_out) opts.out_dir = args.out;
    if (args.has_seed) opts.seed = args.seed;
    opts.threads = args.threads;
    return opts;
}

int do_run(const Args& args) {
    const qtr::ExperimentConfig config = qtr::parse_config_file(args.config);
    const qtr::ExperimentResult result = qtr::run_experiment(config, options_from(args));
    std::cout << "experiment: " << qtr::kind_name(result.kind) << "\n";
    std::cout << "artifacts:  " << result.out_path.string() << "\n";
    std::cout << "P_target:   " << result.summary["final"]["p_target"].dump() << "\n";
    if (result.oct) {
        std::cout << "iterations: " << result.oct->iterations.size() - 1
                  << (result.oct->converged ? " (converged)" : " (budget reached)") << "\n";
        if (!result.oct->monotonic)
            throw qtr::NonMonotonicError("optimizer lost monotonicity; see convergence.csv");
    }
    return 0;
}

int do_calibrate(const Args& args) {
    const qtr::ExperimentConfig config = qtr::parse_config_file(args.config);
    const qtr::CalibrationResult result = qtr::run_calibration(config, options_from(args));
    std::cout << "calibration rows: " << result.table.size() << "\n";
    std::cout << "artifacts:        " << result.out_path.string() << "\n";
    if (!result.success)
        throw qtr::CalibrationError("no (lambda0, lambda_b) grid point met the thresholds");
    std::cout << "selected: lambda0 = " << result.lambda0 << ", lambda_b = " << result.lambda_b
              << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"coherent population transfer: reference pulses, optimal control, robustness"};
    app.require_subcommand(1);

    Args run_args;
    Args cal_args;
    CLI::App* run_cmd = app.add_subcommand("run", "run one experiment config");
    add_common(run_cmd, run_args);
    CLI::App* cal_cmd = app.add_subcommand("calibrate", "scan penalty weights for a config");
    add_common(cal_cmd, cal_args);

    try {
        app.parse(argc, argv);
        if (run_cmd->parsed()) return do_run(run_args);
        return do_calibrate(cal_args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const qtr::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const qtr::PhysicsError& e) {
        std::cerr << "physics violation: " << e.what() << "\n";
        return 3;
    } catch (const qtr::NonMonotonicError& e) {
        std::cerr << "optimizer failure: " << e.what() << "\n";
        return 4;
    } catch (const qtr::CalibrationError& e) {
        std::cerr << "calibration failure: " << e.what() << "\n";
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
