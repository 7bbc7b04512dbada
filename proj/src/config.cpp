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

#include "qtr/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "qtr/errors.hpp"

namespace qtr {

namespace {

struct Entry {
    std::string value;
    int line = 0;
    bool used = false;
};

std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

class Entries {
public:
    explicit Entries(const std::string& text) {
        std::istringstream stream(text);
        std::string raw;
        std::string section;
        int line = 0;
        while (std::getline(stream, raw)) {
            ++line;
            const std::size_t cut = raw.find_first_of("#;");
            std::string s = trim(cut == std::string::npos ? raw : raw.substr(0, cut));
            if (s.empty()) continue;
            if (s.front() == '[') {
                if (s.back() != ']')
                    fail(line, "unterminated section header");
                section = trim(s.substr(1, s.size() - 2));
                if (section.empty())
                    fail(line, "empty section name");
                continue;
            }
            const std::size_t eq = s.find('=');
            if (eq == std::string::npos)
                fail(line, "expected key = value");
            const std::string key = trim(s.substr(0, eq));
            const std::string value = trim(s.substr(eq + 1));
            if (key.empty())
                fail(line, "empty key");
            if (value.empty())
                fail(line, "empty value for key '" + key + "'");
            const std::string id = section + "/" + key;
            if (map_.count(id))
                fail(line, "duplicate key '" + key + "' in section [" + section + "]");
            map_[id] = Entry{value, line, false};
        }
    }

    Entry* find(const std::string& section, const std::string& key) {
        const auto it = map_.find(section + "/" + key);
        if (it == map_.end()) return nullptr;
        it->second.used = true;
        return &it->second;
    }

    bool has(const std::string& section, const std::string& key) const {
        return map_.count(section + "/" + key) != 0;
    }

    void reject_unused(ExperimentKind kind) const {
        for (const auto& [id, entry] : map_)
            if (!entry.used)
                fail(entry.line, "unknown key '" + id + "' (not recognized for kind=" +
                                     kind_name(kind) + ")");
    }

private:
    std::map<std::string, Entry> map_;
};

double parse_double(const Entry& e) {
    const char* begin = e.value.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end != begin + e.value.size())
        fail(e.line, "expected a number, got '" + e.value + "'");
    return v;
}

int parse_int(const Entry& e) {
    const char* begin = e.value.c_str();
    char* end = nullptr;
    const long v = std::strtol(begin, &end, 10);
    if (end != begin + e.value.size())
        fail(e.line, "expected an integer, got '" + e.value + "'");
    return static_cast<int>(v);
}

std::uint64_t parse_u64(const Entry& e) {
    if (!e.value.empty() && e.value.front() == '-')
        fail(e.line, "expected an unsigned integer, got '" + e.value + "'");
    const char* begin = e.value.c_str();
    char* end = nullptr;
    const unsigned long long v = std::strtoull(begin, &end, 10);
    if (end != begin + e.value.size())
        fail(e.line, "expected an unsigned integer, got '" + e.value + "'");
    return static_cast<std::uint64_t>(v);
}

bool parse_bool(const Entry& e) {
    if (e.value == "true" || e.value == "1") return true;
    if (e.value == "false" || e.value == "0") return false;
    fail(e.line, "expected true/false, got '" + e.value + "'");
}

std::vector<double> parse_double_list(const Entry& e) {
    std::istringstream stream(e.value);
    std::vector<double> out;
    std::string token;
    while (stream >> token) {
        const char* begin = token.c_str();
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end != begin + token.size())
            fail(e.line, "expected a list of numbers, got '" + e.value + "'");
        out.push_back(v);
    }
    return out;
}

std::vector<int> parse_int_list(const Entry& e) {
    std::vector<int> out;
    for (double v : parse_double_list(e)) {
        const int i = static_cast<int>(v);
        if (static_cast<double>(i) != v)
            fail(e.line, "expected a list of integers, got '" + e.value + "'");
        out.push_back(i);
    }
    return out;
}

[[noreturn]] void semantic_fail(const std::string& msg) { throw ConfigError("config: " + msg); }

ExperimentKind parse_kind(Entries& entries) {
    Entry* e = entries.find("", "kind");
    if (e == nullptr)
        semantic_fail("missing required key 'kind'");
    static const std::map<std::string, ExperimentKind> kinds = {
        {"stirap", ExperimentKind::stirap},
        {"oct-standard", ExperimentKind::oct_standard},
        {"oct-constrained", ExperimentKind::oct_constrained},
        {"robustness-alpha", ExperimentKind::robustness_alpha},
        {"robustness-beta", ExperimentKind::robustness_beta},
        {"four-level", ExperimentKind::four_level},
        {"calibrate", ExperimentKind::calibrate},
    };
    const auto it = kinds.find(e->value);
    if (it == kinds.end())
        fail(e->line, "unknown kind '" + e->value + "'");
    return it->second;
}

SystemConfig parse_system(Entries& entries, ExperimentKind kind) {
    SystemConfig sys;
    if (Entry* e = entries.find("system", "levels")) sys.levels = parse_int(e);
    if (Entry* e = entries.find("system", "t_total_fs")) sys.t_total_fs = parse_double(e);
    if (Entry* e = entries.find("system", "n_steps")) sys.n_steps = parse_int(e);
    if (Entry* e = entries.find("system", "detunings")) sys.detunings = parse_double_list(e);

    if (kind == ExperimentKind::four_level) {
        if (sys.levels != 4) semantic_fail("kind=four-level requires levels = 4");
    } else if (kind == ExperimentKind::calibrate) {
        if (sys.levels != 3 && sys.levels != 4)
            semantic_fail("kind=calibrate requires levels = 3 or 4");
    } else {
        if (sys.levels != 3) semantic_fail(std::string("kind=") + kind_name(kind) +
                                           " requires levels = 3");
    }
    if (!(sys.t_total_fs > 0.0)) semantic_fail("t_total_fs must be positive");
    if (sys.n_steps < 2) semantic_fail("n_steps must be at least 2");
    if (!sys.detunings.empty() && static_cast<int>(sys.detunings.size()) != sys.levels)
        semantic_fail("detunings must list one value per level");
    return sys;
}

StirapSection parse_stirap(Entries& entries, const SystemConfig& sys) {
    StirapSection st;
    if (Entry* e = entries.find("stirap", "sigma_fs")) st.sigma_fs = parse_double(e);
    if (Entry* e = entries.find("stirap", "delay_fs")) st.delay_fs = parse_double(e);
    const bool has_omega = entries.has("stirap", "omega_max");
    const bool has_adiab = entries.has("stirap", "adiabaticity");
    if (has_omega && has_adiab)
        semantic_fail("[stirap] omega_max and adiabaticity are mutually exclusive");
    if (Entry* e = entries.find("stirap", "omega_max")) st.omega_max = parse_double(e);
    if (Entry* e = entries.find("stirap", "adiabaticity")) st.adiabaticity = parse_double(e);

    if (!(st.sigma_fs > 0.0)) semantic_fail("[stirap] sigma_fs must be positive");
    if (!(st.delay_fs > 0.0) || !(st.delay_fs < sys.t_total_fs))
        semantic_fail("[stirap] delay_fs must lie in (0, t_total_fs)");
    if (st.omega_max && !(*st.omega_max > 0.0))
        semantic_fail("[stirap] omega_max must be positive");
    if (!st.omega_max && !(st.adiabaticity > 0.0))
        semantic_fail("[stirap] adiabaticity must be positive");
    return st;
}

OctSection parse_oct(Entries& entries, ExperimentKind kind, const SystemConfig& sys) {
    OctSection oct;
    const bool fixed_lambdas = kind != ExperimentKind::calibrate;
    if (fixed_lambdas) {
        Entry* l0 = entries.find("oct", "lambda0");
        if (l0 == nullptr) semantic_fail("[oct] lambda0 is required");
        oct.lambda0 = parse_double(l0);
        if (Entry* e = entries.find("oct", "lambda_b")) oct.lambda_b = parse_double(e);
        if (Entry* e = entries.find("oct", "max_iterations")) oct.max_iterations = parse_int(e);
    }
    if (Entry* e = entries.find("oct", "convergence_tol")) oct.convergence_tol = parse_double(e);
    Entry* amp = entries.find("oct", "guess_amplitude");
    if (amp == nullptr) semantic_fail("[oct] guess_amplitude is required");
    oct.guess_amplitude = parse_double(amp);
    if (Entry* e = entries.find("oct", "guess_sigma_fs")) oct.guess_sigma_fs = parse_double(e);
    if (Entry* e = entries.find("oct", "guess_delay_fs")) oct.guess_delay_fs = parse_double(e);
    if (Entry* e = entries.find("oct", "target_level")) oct.target_level = parse_int(e);
    if (Entry* e = entries.find("oct", "allowed_levels")) oct.allowed_levels = parse_int_list(e);

    if (fixed_lambdas) {
        if (!(oct.lambda0 > 0.0)) semantic_fail("[oct] lambda0 must be positive");
        if (oct.lambda_b < 0.0) semantic_fail("[oct] lambda_b must be non-negative");
        if (oct.max_iterations < 1) semantic_fail("[oct] max_iterations must be at least 1");
        if (kind == ExperimentKind::oct_standard && oct.lambda_b != 0.0)
            semantic_fail("kind=oct-standard requires lambda_b = 0");
        const bool constrained =
            kind == ExperimentKind::oct_constrained || kind == ExperimentKind::four_level ||
            kind == ExperimentKind::robustness_alpha || kind == ExperimentKind::robustness_beta;
        if (constrained && !(oct.lambda_b > 0.0))
            semantic_fail(std::string("kind=") + kind_name(kind) + " requires lambda_b > 0");
    }
    if (!(oct.convergence_tol > 0.0)) semantic_fail("[oct] convergence_tol must be positive");
    if (!(oct.guess_amplitude > 0.0)) semantic_fail("[oct] guess_amplitude must be positive");
    if (!(oct.guess_sigma_fs > 0.0)) semantic_fail("[oct] guess_sigma_fs must be positive");
    if (std::abs(oct.guess_delay_fs) >= sys.t_total_fs)
        semantic_fail("[oct] guess_delay_fs must satisfy |delay| < t_total_fs");
    if (oct.target_level && (*oct.target_level < 1 || *oct.target_level > sys.levels))
        semantic_fail("[oct] target_level out of range");
    for (int lvl : oct.allowed_levels)
        if (lvl < 1 || lvl > sys.levels) semantic_fail("[oct] allowed_levels entry out of range");
    return oct;
}

RobustnessSection parse_robustness(Entries& entries, const SystemConfig& sys) {
    RobustnessSection rob;
    Entry* ladder = entries.find("robustness", "ladder");
    if (ladder == nullptr) semantic_fail("[robustness] ladder is required");
    rob.ladder = parse_double_list(ladder);
    if (Entry* e = entries.find("robustness", "realizations")) rob.realizations = parse_int(e);
    if (Entry* e = entries.find("robustness", "match_energy")) rob.match_energy = parse_bool(e);
    if (Entry* e = entries.find("robustness", "stirap_adiabaticities"))
        rob.stirap_adiabaticities = parse_double_list(e);
    if (Entry* e = entries.find("robustness", "decay_level")) rob.decay_level = parse_int(e);

    if (rob.ladder.empty()) semantic_fail("[robustness] ladder must not be empty");
    for (std::size_t i = 0; i < rob.ladder.size(); ++i) {
        if (rob.ladder[i] < 0.0) semantic_fail("[robustness] ladder values must be non-negative");
        if (i > 0 && !(rob.ladder[i] > rob.ladder[i - 1]))
            semantic_fail("[robustness] ladder must be strictly increasing");
    }
    if (rob.realizations < 1) semantic_fail("[robustness] realizations must be at least 1");
    for (double a : rob.stirap_adiabaticities)
        if (!(a > 0.0)) semantic_fail("[robustness] stirap_adiabaticities must be positive");
    if (rob.decay_level < 1 || rob.decay_level > sys.levels)
        semantic_fail("[robustness] decay_level out of range");
    return rob;
}

CalibrateSection parse_calibrate(Entries& entries) {
    CalibrateSection cal;
    Entry* l0 = entries.find("calibrate", "lambda0_grid");
    Entry* lb = entries.find("calibrate", "lambda_b_grid");
    if (l0 == nullptr) semantic_fail("[calibrate] lambda0_grid is required");
    if (lb == nullptr) semantic_fail("[calibrate] lambda_b_grid is required");
    cal.lambda0_grid = parse_double_list(l0);
    cal.lambda_b_grid = parse_double_list(lb);
    if (Entry* e = entries.find("calibrate", "yield_min")) cal.yield_min = parse_double(e);
    if (Entry* e = entries.find("calibrate", "peak_forbidden_max"))
        cal.peak_forbidden_max = parse_double(e);
    if (Entry* e = entries.find("calibrate", "max_iterations")) cal.max_iterations = parse_int(e);

    if (cal.lambda0_grid.empty()) semantic_fail("[calibrate] lambda0_grid must not be empty");
    if (cal.lambda_b_grid.empty()) semantic_fail("[calibrate] lambda_b_grid must not be empty");
    for (double v : cal.lambda0_grid)
        if (!(v > 0.0)) semantic_fail("[calibrate] lambda0_grid values must be positive");
    for (double v : cal.lambda_b_grid)
        if (v < 0.0) semantic_fail("[calibrate] lambda_b_grid values must be non-negative");
    if (!(cal.yield_min > 0.0) || cal.yield_min > 1.0)
        semantic_fail("[calibrate] yield_min must lie in (0, 1]");
    if (!(cal.peak_forbidden_max > 0.0) || cal.peak_forbidden_max > 1.0)
        semantic_fail("[calibrate] peak_forbidden_max must lie in (0, 1]");
    if (cal.max_iterations < 1) semantic_fail("[calibrate] max_iterations must be at least 1");
    return cal;
}

} // namespace

const char* kind_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::stirap: return "stirap";
        case ExperimentKind::oct_standard: return "oct-standard";
        case ExperimentKind::oct_constrained: return "oct-constrained";
        case ExperimentKind::robustness_alpha: return "robustness-alpha";
        case ExperimentKind::robustness_beta: return "robustness-beta";
        case ExperimentKind::four_level: return "four-level";
        case ExperimentKind::calibrate: return "calibrate";
    }
    return "unknown";
}

ExperimentConfig parse_config_text(const std::string& text) {
    Entries entries(text);
    ExperimentConfig cfg;
    cfg.kind = parse_kind(entries);
    if (Entry* e = entries.find("", "seed")) cfg.seed = parse_u64(e);
    if (Entry* e = entries.find("", "out_dir")) cfg.out_dir = e->value;
    cfg.system = parse_system(entries, cfg.kind);

    const bool wants_stirap = cfg.kind == ExperimentKind::stirap ||
                              cfg.kind == ExperimentKind::robustness_alpha ||
                              cfg.kind == ExperimentKind::robustness_beta;
    const bool wants_oct =
        cfg.kind == ExperimentKind::oct_standard || cfg.kind == ExperimentKind::oct_constrained ||
        cfg.kind == ExperimentKind::four_level || cfg.kind == ExperimentKind::robustness_alpha ||
        cfg.kind == ExperimentKind::robustness_beta || cfg.kind == ExperimentKind::calibrate;

    if (wants_stirap) cfg.stirap = parse_stirap(entries, cfg.system);
    if (wants_oct) cfg.oct = parse_oct(entries, cfg.kind, cfg.system);
    if (cfg.kind == ExperimentKind::robustness_alpha || cfg.kind == ExperimentKind::robustness_beta)
        cfg.robustness = parse_robustness(entries, cfg.system);
    if (cfg.kind == ExperimentKind::calibrate) cfg.calibrate = parse_calibrate(entries);

    entries.reject_unused(cfg.kind);
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

} // namespace qtr
