#include "msfs/sweep.hpp"

#include "msfs/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <thread>

#include <json.hpp>

namespace msfs {

std::string to_string(ModelKind m) {
    switch (m) {
    case ModelKind::HoFlat: return "ho-flat";
    case ModelKind::HoHierarchy: return "ho-hierarchy";
    case ModelKind::Hca: return "hca";
    }
    return "?";
}

void SweepSpec::validate() const {
    if (runs < 1) throw ConfigError("sweep.runs must be >= 1");
    if (model == ModelKind::Hca) {
        if (fq0_values.empty() || fq1_values.empty() || fq2_values.empty()) {
            throw ConfigError("empty hca frequency range");
        }
        for (const auto* vs : {&fq0_values, &fq1_values, &fq2_values}) {
            for (int v : *vs) {
                if (v < 1) throw ConfigError("activation frequencies must be >= 1");
            }
        }
    } else {
        if (f_values.empty() || tau_values.empty()) {
            throw ConfigError("empty F or tau range");
        }
        if (model == ModelKind::HoFlat && flat_n < 2) {
            throw ConfigError("flat network needs ho.n >= 2");
        }
        if (model == ModelKind::HoHierarchy && (levels < 1 || children < 1)) {
            throw ConfigError("hierarchy needs ho.levels >= 1 and ho.children >= 1");
        }
    }
}

std::uint64_t run_seed(const SweepSpec& spec, const ResultRow& point, int run) {
    std::uint64_t h = mix64(spec.seed);
    h = hash_fold(h, static_cast<std::uint64_t>(point.model));
    if (point.model == ModelKind::Hca) {
        for (char c : point.rules) h = hash_fold(h, static_cast<std::uint64_t>(c));
        h = hash_fold(h, bits_of(point.th0));
        h = hash_fold(h, bits_of(point.th1));
        h = hash_fold(h, static_cast<std::uint64_t>(point.fq0));
        h = hash_fold(h, static_cast<std::uint64_t>(point.fq1));
        h = hash_fold(h, static_cast<std::uint64_t>(point.fq2));
    } else {
        h = hash_fold(h, static_cast<std::uint64_t>(point.coupling));
        h = hash_fold(h, static_cast<std::uint64_t>(point.n));
        h = hash_fold(h, static_cast<std::uint64_t>(point.levels));
        h = hash_fold(h, static_cast<std::uint64_t>(point.children));
        h = hash_fold(h, bits_of(point.f));
        h = hash_fold(h, bits_of(point.tau));
        h = hash_fold(h, bits_of(point.w));
    }
    return hash_fold(h, static_cast<std::uint64_t>(run));
}

OscillatorSystem make_ho_system(const SweepSpec& spec, double f, double tau) {
    const CouplingSpec coupling =
        CouplingSpec::uniform(spec.coupling, f, tau, spec.w);
    if (spec.model == ModelKind::HoFlat) {
        return build_flat(spec.flat_n, coupling);
    }
    return build_hierarchy(spec.levels, spec.children, coupling);
}

RunMetrics simulate_ho_run(const SweepSpec& spec, const OscillatorSystem& sys,
                           std::uint64_t seed) {
    const Vector y0 = sys.initial_state(seed);
    const Trajectory traj = integrate(sys.rhs(), sys.delays(),
                                      HistoryFunction::constant(y0), spec.solver);
    const BehaviorReport report =
        classify(traj, sys.topology(), default_window(spec.solver.t_end),
                 spec.analysis);
    RunMetrics m;
    m.klass = report.klass;
    m.period = report.period;
    m.amplitude = report.amplitude;
    m.sync_time = report.sync_time;
    return m;
}

namespace {

std::optional<double> mean_of(const std::vector<RunMetrics>& runs,
                              std::optional<double> RunMetrics::* field) {
    double sum = 0.0;
    int count = 0;
    for (const RunMetrics& r : runs) {
        if (r.*field) {
            sum += *(r.*field);
            ++count;
        }
    }
    if (count == 0) return std::nullopt;
    return sum / count;
}

void run_ho_point(const SweepSpec& spec, ResultRow& row) {
    const OscillatorSystem sys = make_ho_system(spec, row.f, row.tau);
    int synced = 0;
    for (int r = 0; r < spec.runs; ++r) {
        RunMetrics m = simulate_ho_run(spec, sys, run_seed(spec, row, r));
        synced += m.synchronized() ? 1 : 0;
        row.per_run.push_back(std::move(m));
    }
    row.sync_fraction = static_cast<double>(synced) / spec.runs;
    row.period_mean = mean_of(row.per_run, &RunMetrics::period);
    row.amplitude_mean = mean_of(row.per_run, &RunMetrics::amplitude);
    row.sync_time_mean = mean_of(row.per_run, &RunMetrics::sync_time);
}

void run_hca_point(const SweepSpec& spec, ResultRow& row) {
    const hca::HcaConfig cfg = hca::three_level_config(
        row.rules, row.th0, row.th1, row.fq0, row.fq1, row.fq2);
    const hca::ConvergenceReport report =
        hca::run_to_convergence(cfg, spec.max_cycles);
    row.p0 = report.level_period[0].value_or(0);
    row.p1 = report.level_period[1].value_or(0);
    row.p2 = report.level_period[2].value_or(0);
    if (report.macro) row.macro_pattern = report.macro->label();
}

std::vector<ResultRow> enumerate_points(const SweepSpec& spec) {
    std::vector<ResultRow> rows;
    if (spec.model == ModelKind::Hca) {
        for (int a : spec.fq0_values)
            for (int b : spec.fq1_values)
                for (int c : spec.fq2_values) {
                    ResultRow row;
                    row.model = spec.model;
                    row.rules = spec.rules;
                    row.th0 = spec.th0;
                    row.th1 = spec.th1;
                    row.fq0 = a;
                    row.fq1 = b;
                    row.fq2 = c;
                    row.runs = spec.runs;
                    rows.push_back(std::move(row));
                }
    } else {
        for (double f : spec.f_values)
            for (double tau : spec.tau_values) {
                ResultRow row;
                row.model = spec.model;
                row.coupling = spec.coupling;
                if (spec.model == ModelKind::HoFlat) {
                    row.n = spec.flat_n;
                } else {
                    row.levels = spec.levels;
                    row.children = spec.children;
                    row.n = 0;
                }
                row.f = f;
                row.tau = tau;
                row.w = spec.w;
                row.runs = spec.runs;
                rows.push_back(std::move(row));
            }
    }
    return rows;
}

void sort_rows(std::vector<ResultRow>& rows) {
    std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
        if (a.model != b.model) return a.model < b.model;
        if (a.model == ModelKind::Hca) {
            return std::tie(a.rules, a.th0, a.th1, a.fq0, a.fq1, a.fq2) <
                   std::tie(b.rules, b.th0, b.th1, b.fq0, b.fq1, b.fq2);
        }
        return std::tie(a.coupling, a.n, a.levels, a.children, a.f, a.tau) <
               std::tie(b.coupling, b.n, b.levels, b.children, b.f, b.tau);
    });
}

} // namespace

std::vector<ResultRow> run_sweep(const SweepSpec& spec, int jobs) {
    spec.validate();
    std::vector<ResultRow> rows = enumerate_points(spec);
    sort_rows(rows);

    if (jobs <= 0) {
        jobs = static_cast<int>(std::thread::hardware_concurrency());
        if (jobs < 1) jobs = 1;
    }
    jobs = std::min<int>(jobs, static_cast<int>(rows.size()));

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= rows.size()) return;
            ResultRow& row = rows[i];
            try {
                if (spec.model == ModelKind::Hca) {
                    run_hca_point(spec, row);
                } else {
                    run_ho_point(spec, row);
                }
            } catch (const std::exception& e) {
                row.error = e.what();
            }
        }
    };
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(jobs));
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return rows;
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string fmt_opt(const std::optional<double>& v) {
    return v ? fmt(*v) : std::string();
}

constexpr const char* kHeader =
    "model,coupling,n,levels,children,f,tau,w,rules,th0,th1,fq0,fq1,fq2,runs,"
    "sync_fraction,period_mean,amplitude_mean,sync_time_mean,p0,p1,p2,"
    "macro_pattern,error";

void append_row(std::string& out, const ResultRow& r) {
    const bool hca = r.model == ModelKind::Hca;
    const bool flat = r.model == ModelKind::HoFlat;
    out += to_string(r.model);
    out += ',';
    if (!hca) out += r.coupling == CouplingKind::P ? "PP" : "NN";
    out += ',';
    if (flat) out += std::to_string(r.n);
    out += ',';
    if (!hca && !flat) out += std::to_string(r.levels);
    out += ',';
    if (!hca && !flat) out += std::to_string(r.children);
    out += ',';
    if (!hca) out += fmt(r.f);
    out += ',';
    if (!hca) out += fmt(r.tau);
    out += ',';
    if (!hca) out += fmt(r.w);
    out += ',';
    out += r.rules;
    out += ',';
    if (hca) out += fmt(r.th0);
    out += ',';
    if (hca) out += fmt(r.th1);
    out += ',';
    if (hca) out += std::to_string(r.fq0);
    out += ',';
    if (hca) out += std::to_string(r.fq1);
    out += ',';
    if (hca) out += std::to_string(r.fq2);
    out += ',';
    out += std::to_string(r.runs);
    out += ',';
    if (!hca) out += fmt(r.sync_fraction);
    out += ',';
    out += fmt_opt(r.period_mean);
    out += ',';
    out += fmt_opt(r.amplitude_mean);
    out += ',';
    out += fmt_opt(r.sync_time_mean);
    out += ',';
    if (r.p0) out += std::to_string(*r.p0);
    out += ',';
    if (r.p1) out += std::to_string(*r.p1);
    out += ',';
    if (r.p2) out += std::to_string(*r.p2);
    out += ',';
    out += r.macro_pattern;
    out += ',';
    out += r.error;
    out += '\n';
}

void write_file(const std::string& text, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
    if (!f.good()) throw std::runtime_error("write failed for " + path);
}

} // namespace

std::string csv_string(const std::vector<ResultRow>& rows) {
    std::string out = kHeader;
    out += '\n';
    for (const ResultRow& r : rows) append_row(out, r);
    return out;
}

void export_csv(const std::vector<ResultRow>& rows, const std::string& path) {
    if (rows.empty()) throw ConfigError("refusing to export an empty table");
    write_file(csv_string(rows), path);
}

std::string pivot_csv_string(const std::vector<ResultRow>& rows,
                             const std::string& metric) {
    auto value_of = [&](const ResultRow& r) -> std::string {
        if (metric == "sync_fraction") return fmt(r.sync_fraction);
        if (metric == "period_mean") return fmt(r.period_mean.value_or(0.0));
        if (metric == "amplitude_mean") return fmt(r.amplitude_mean.value_or(0.0));
        if (metric == "sync_time_mean") return fmt(r.sync_time_mean.value_or(0.0));
        throw ConfigError("unknown pivot metric '" + metric + "'");
    };
    std::vector<double> fs, taus;
    for (const ResultRow& r : rows) {
        fs.push_back(r.f);
        taus.push_back(r.tau);
    }
    auto uniq = [](std::vector<double>& v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    uniq(fs);
    uniq(taus);

    std::string out = "f\\tau";
    for (double t : taus) out += "," + fmt(t);
    out += '\n';
    for (double f : fs) {
        out += fmt(f);
        for (double t : taus) {
            out += ',';
            for (const ResultRow& r : rows) {
                if (r.f == f && r.tau == t) {
                    out += value_of(r);
                    break;
                }
            }
        }
        out += '\n';
    }
    return out;
}

void export_pivot_csv(const std::vector<ResultRow>& rows,
                      const std::string& metric, const std::string& path) {
    write_file(pivot_csv_string(rows, metric), path);
}

std::string json_string(const std::vector<ResultRow>& rows) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const ResultRow& r : rows) {
        const bool hca = r.model == ModelKind::Hca;
        nlohmann::ordered_json j;
        j["model"] = to_string(r.model);
        if (!hca) {
            j["coupling"] = r.coupling == CouplingKind::P ? "PP" : "NN";
            if (r.model == ModelKind::HoFlat) {
                j["n"] = r.n;
            } else {
                j["levels"] = r.levels;
                j["children"] = r.children;
            }
            j["f"] = r.f;
            j["tau"] = r.tau;
            j["w"] = r.w;
        } else {
            j["rules"] = r.rules;
            j["th0"] = r.th0;
            j["th1"] = r.th1;
            j["fq0"] = r.fq0;
            j["fq1"] = r.fq1;
            j["fq2"] = r.fq2;
        }
        j["runs"] = r.runs;
        if (!hca) {
            j["sync_fraction"] = r.sync_fraction;
            auto put_opt = [&](const char* key, const std::optional<double>& v) {
                if (v) j[key] = *v;
            };
            put_opt("period_mean", r.period_mean);
            put_opt("amplitude_mean", r.amplitude_mean);
            put_opt("sync_time_mean", r.sync_time_mean);
            nlohmann::ordered_json runs = nlohmann::ordered_json::array();
            for (const RunMetrics& m : r.per_run) {
                nlohmann::ordered_json jm;
                jm["class"] = to_string(m.klass);
                if (m.period) jm["period"] = *m.period;
                if (m.amplitude) jm["amplitude"] = *m.amplitude;
                if (m.sync_time) jm["sync_time"] = *m.sync_time;
                runs.push_back(std::move(jm));
            }
            j["per_run"] = std::move(runs);
        } else {
            j["p0"] = r.p0.value_or(0);
            j["p1"] = r.p1.value_or(0);
            j["p2"] = r.p2.value_or(0);
            j["macro_pattern"] = r.macro_pattern;
        }
        if (!r.error.empty()) j["error"] = r.error;
        arr.push_back(std::move(j));
    }
    return arr.dump(2) + "\n";
}

void export_json(const std::vector<ResultRow>& rows, const std::string& path) {
    write_file(json_string(rows), path);
}

} // namespace msfs
