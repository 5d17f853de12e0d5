#include "msfs/experiment_config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace msfs {

namespace {

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "model.kind",
        "ho.coupling", "ho.n", "ho.levels", "ho.children", "ho.w",
        "ho.f", "ho.f_range", "ho.tau", "ho.tau_range",
        "hca.rules", "hca.th0", "hca.th1", "hca.fq",
        "hca.fq0", "hca.fq1", "hca.fq2", "hca.max_cycles",
        "solver.h", "solver.t_end",
        "analysis.eps_osc", "analysis.eps_sync", "analysis.phase_tol",
        "sweep.runs", "sweep.seed",
    };
    return keys;
}

// Defaults, also listed in the README key reference.
const std::map<std::string, std::string>& default_values() {
    static const std::map<std::string, std::string> defaults = {
        {"ho.coupling", "PP"}, {"ho.n", "4"}, {"ho.levels", "2"},
        {"ho.children", "64"}, {"ho.w", "0.5"},
        {"hca.rules", "diamond"}, {"hca.th0", "0.1"}, {"hca.th1", "0.7"},
        {"hca.fq", "1-1-1"}, {"hca.max_cycles", "10000"},
        {"solver.h", "0.05"}, {"solver.t_end", "500"},
        {"analysis.eps_osc", "0.01"}, {"analysis.eps_sync", "0.05"},
        {"analysis.phase_tol", "0.05"},
        {"sweep.runs", "10"}, {"sweep.seed", "1"},
    };
    return defaults;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& v, const std::string& key) {
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size() || !std::isfinite(d)) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "' has non-numeric value '" + v + "'");
    }
}

int to_int(const std::string& v, const std::string& key) {
    try {
        std::size_t used = 0;
        const long l = std::stol(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return static_cast<int>(l);
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "' has non-integer value '" + v + "'");
    }
}

} // namespace

std::vector<double> parse_range(const std::string& text, const std::string& key) {
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ':')) parts.push_back(trim(item));
        if (parts.size() < 2 || parts.size() > 3) {
            throw ConfigError("key '" + key + "': range must be lo:hi[:step]");
        }
        const double lo = to_double(parts[0], key);
        const double hi = to_double(parts[1], key);
        const double step = parts.size() == 3 ? to_double(parts[2], key) : 1.0;
        if (!(step > 0.0) || hi < lo) {
            throw ConfigError("key '" + key + "': range needs hi >= lo, step > 0");
        }
        for (int i = 0;; ++i) {
            const double v = lo + i * step;
            if (v > hi + 1e-9 * std::max(1.0, std::abs(hi))) break;
            out.push_back(v);
        }
        return out;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(to_double(item, key));
    }
    if (out.empty()) throw ConfigError("key '" + key + "' has an empty range");
    return out;
}

std::vector<int> parse_int_range(const std::string& text, const std::string& key) {
    std::vector<int> out;
    for (double v : parse_range(text, key)) {
        const int i = static_cast<int>(std::lround(v));
        if (std::abs(v - i) > 1e-9) {
            throw ConfigError("key '" + key + "' needs integer values");
        }
        out.push_back(i);
    }
    return out;
}

ExperimentConfig ExperimentConfig::from_string(const std::string& text) {
    ExperimentConfig cfg;
    std::stringstream ss(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) +
                              " is not 'key = value': '" + line + "'");
        }
        std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!section.empty() && key.find('.') == std::string::npos) {
            key = section + "." + key;
        }
        cfg.set(key, value);
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::load_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << f.rdbuf();
    return from_string(buf.str());
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
    if (known_keys().count(key) == 0) {
        throw ConfigError("unknown config key '" + key + "'");
    }
    values_[key] = value;
}

void ExperimentConfig::set_pair(const std::string& key_eq_value) {
    const auto eq = key_eq_value.find('=');
    if (eq == std::string::npos) {
        throw ConfigError("--set needs key=value, got '" + key_eq_value + "'");
    }
    set(trim(key_eq_value.substr(0, eq)), trim(key_eq_value.substr(eq + 1)));
}

std::string ExperimentConfig::get_or(const std::string& key,
                                     const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double ExperimentConfig::get_double(const std::string& key, double fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : to_double(it->second, key);
}

int ExperimentConfig::get_int(const std::string& key, int fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : to_int(it->second, key);
}

namespace {

void parse_fq_pattern(const std::string& text, int& fq0, int& fq1, int& fq2) {
    int parts[3];
    int idx = 0;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, '-')) {
        if (idx >= 3) throw ConfigError("hca.fq must look like 1-3-2");
        parts[idx++] = to_int(trim(item), "hca.fq");
    }
    if (idx != 3) throw ConfigError("hca.fq must look like 1-3-2");
    fq0 = parts[0];
    fq1 = parts[1];
    fq2 = parts[2];
}

} // namespace

SweepSpec ExperimentConfig::sweep_spec() const {
    SweepSpec spec;
    const std::string kind = get_or("model.kind", "");
    if (kind == "ho-flat") {
        spec.model = ModelKind::HoFlat;
    } else if (kind == "ho-hierarchy") {
        spec.model = ModelKind::HoHierarchy;
    } else if (kind == "hca") {
        spec.model = ModelKind::Hca;
    } else if (kind.empty()) {
        throw ConfigError("missing required key 'model.kind'");
    } else {
        throw ConfigError("key 'model.kind' must be ho-flat, ho-hierarchy or "
                          "hca, got '" + kind + "'");
    }

    const std::string coupling = get_or("ho.coupling", "PP");
    if (coupling == "PP" || coupling == "P") {
        spec.coupling = CouplingKind::P;
    } else if (coupling == "NN" || coupling == "N") {
        spec.coupling = CouplingKind::N;
    } else {
        throw ConfigError("key 'ho.coupling' must be PP or NN, got '" +
                          coupling + "'");
    }
    spec.flat_n = get_int("ho.n", 4);
    spec.levels = get_int("ho.levels", 2);
    spec.children = get_int("ho.children", 64);
    spec.w = get_double("ho.w", 0.5);

    if (has("ho.f_range")) {
        spec.f_values = parse_range(values_.at("ho.f_range"), "ho.f_range");
    } else if (has("ho.f")) {
        spec.f_values = parse_range(values_.at("ho.f"), "ho.f");
    }
    if (has("ho.tau_range")) {
        spec.tau_values = parse_range(values_.at("ho.tau_range"), "ho.tau_range");
    } else if (has("ho.tau")) {
        spec.tau_values = parse_range(values_.at("ho.tau"), "ho.tau");
    }

    spec.rules = get_or("hca.rules", "diamond");
    spec.th0 = get_double("hca.th0", 0.1);
    spec.th1 = get_double("hca.th1", 0.7);
    spec.max_cycles = get_int("hca.max_cycles", 10000);
    int fq0 = 1, fq1 = 1, fq2 = 1;
    parse_fq_pattern(get_or("hca.fq", "1-1-1"), fq0, fq1, fq2);
    spec.fq0_values = {fq0};
    spec.fq1_values = {fq1};
    spec.fq2_values = {fq2};
    if (has("hca.fq0")) spec.fq0_values = parse_int_range(values_.at("hca.fq0"), "hca.fq0");
    if (has("hca.fq1")) spec.fq1_values = parse_int_range(values_.at("hca.fq1"), "hca.fq1");
    if (has("hca.fq2")) spec.fq2_values = parse_int_range(values_.at("hca.fq2"), "hca.fq2");

    spec.solver.h = get_double("solver.h", 0.05);
    spec.solver.t_end = get_double("solver.t_end", 500.0);
    spec.analysis.eps_osc = get_double("analysis.eps_osc", 0.01);
    spec.analysis.eps_sync = get_double("analysis.eps_sync", 0.05);
    spec.analysis.phase_tol = get_double("analysis.phase_tol", 0.05);
    spec.runs = get_int("sweep.runs", 10);
    const double seed = get_double("sweep.seed", 1.0);
    spec.seed = static_cast<std::uint64_t>(seed);

    spec.validate();
    return spec;
}

double ExperimentConfig::single_f() const {
    return sweep_spec().f_values.front();
}

double ExperimentConfig::single_tau() const {
    return sweep_spec().tau_values.front();
}

void ExperimentConfig::single_fq(int& fq0, int& fq1, int& fq2) const {
    parse_fq_pattern(get_or("hca.fq", "1-1-1"), fq0, fq1, fq2);
}

std::string ExperimentConfig::echo() const {
    std::map<std::string, std::string> resolved = default_values();
    for (const auto& [k, v] : values_) resolved[k] = v;
    std::string out;
    for (const auto& [k, v] : resolved) {
        out += k;
        out += " = ";
        out += v;
        out += '\n';
    }
    return out;
}

} // namespace msfs
