// msfs — multi-scale feedback system simulators.
// Subcommands: run (single simulation), sweep (parameter grid to CSV),
// verify (golden behavior tables).
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.
#include "msfs/experiment_config.hpp"
#include "msfs/golden.hpp"
#include "msfs/hca/engine.hpp"
#include "msfs/sweep.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

int jobs_from(int cli_jobs) {
    if (cli_jobs > 0) return cli_jobs;
    if (const char* env = std::getenv("MSFS_JOBS")) {
        const int j = std::atoi(env);
        if (j > 0) return j;
    }
    return 0; // hardware concurrency
}

msfs::ExperimentConfig load_config(const std::string& path,
                                   const std::vector<std::string>& sets,
                                   std::uint64_t* seed_override) {
    msfs::ExperimentConfig cfg = msfs::ExperimentConfig::load_file(path);
    for (const std::string& kv : sets) cfg.set_pair(kv);
    if (seed_override) {
        cfg.set("sweep.seed", std::to_string(*seed_override));
    }
    return cfg;
}

void print_provenance(const msfs::ExperimentConfig& cfg) {
    std::string echo = cfg.echo();
    std::string out = "# resolved configuration\n";
    std::size_t pos = 0;
    while (pos < echo.size()) {
        const std::size_t nl = echo.find('\n', pos);
        out += "# " + echo.substr(pos, nl - pos) + "\n";
        pos = nl + 1;
    }
    std::fputs(out.c_str(), stdout);
}

void dump_trajectory(const msfs::Trajectory& traj,
                     const msfs::Topology& topo, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << "t";
    for (int m = 0; m < topo.levels; ++m)
        for (int i = 0; i < topo.level_counts[static_cast<std::size_t>(m)]; ++i)
            f << ",x_" << m << "_" << i;
    for (int m = 0; m < topo.levels; ++m)
        for (int i = 0; i < topo.level_counts[static_cast<std::size_t>(m)]; ++i)
            f << ",y_" << m << "_" << i;
    f << "\n";
    char buf[32];
    for (std::size_t n = 0; n < traj.node_count(); ++n) {
        std::snprintf(buf, sizeof buf, "%.6g", traj.node_time(n));
        f << buf;
        const msfs::Vector& y = traj.node_state(n);
        for (int j = 0; j < y.size(); ++j) {
            std::snprintf(buf, sizeof buf, ",%.6g", y[j]);
            f << buf;
        }
        f << "\n";
    }
}

int cmd_run(const std::string& config_path, const std::vector<std::string>& sets,
            const std::string& out_path, std::uint64_t* seed_override) {
    const msfs::ExperimentConfig cfg =
        load_config(config_path, sets, seed_override);
    const msfs::SweepSpec spec = cfg.sweep_spec();
    print_provenance(cfg);

    if (spec.model == msfs::ModelKind::Hca) {
        const auto hcfg = msfs::hca::three_level_config(
            spec.rules, spec.th0, spec.th1, spec.fq0_values.front(),
            spec.fq1_values.front(), spec.fq2_values.front());
        const auto rep = msfs::hca::run_to_convergence(hcfg, spec.max_cycles);
        auto p = [&](int k) { return rep.level_period[static_cast<std::size_t>(k)].value_or(0); };
        std::printf("model = hca\nrules = %s\nfq = %d-%d-%d\n", spec.rules.c_str(),
                    spec.fq0_values.front(), spec.fq1_values.front(),
                    spec.fq2_values.front());
        std::printf("P0=%d P1=%d P2=%d\n", p(0), p(1), p(2));
        std::printf("system_period = %d\ntransient_cycles = %ld\n",
                    rep.system_period, rep.transient_cycles);
        if (rep.macro) {
            std::printf("macro_pattern = %s\n", rep.macro->label().c_str());
        }
        if (!out_path.empty()) {
            msfs::SweepSpec one = spec;
            const auto rows = msfs::run_sweep(one, 1);
            msfs::export_json(rows, out_path);
            std::printf("report written to %s\n", out_path.c_str());
        }
        return kExitOk;
    }

    const double f = spec.f_values.front();
    const double tau = spec.tau_values.front();
    const auto sys = msfs::make_ho_system(spec, f, tau);
    msfs::ResultRow point;
    point.model = spec.model;
    point.coupling = spec.coupling;
    point.n = spec.model == msfs::ModelKind::HoFlat ? spec.flat_n : 0;
    point.levels = spec.model == msfs::ModelKind::HoHierarchy ? spec.levels : 0;
    point.children = spec.model == msfs::ModelKind::HoHierarchy ? spec.children : 0;
    point.f = f;
    point.tau = tau;
    point.w = spec.w;
    const std::uint64_t seed = msfs::run_seed(spec, point, 0);

    const msfs::Vector y0 = sys.initial_state(seed);
    const msfs::Trajectory traj =
        msfs::integrate(sys.rhs(), sys.delays(),
                        msfs::HistoryFunction::constant(y0), spec.solver);
    const msfs::BehaviorReport rep =
        msfs::classify(traj, sys.topology(),
                       msfs::default_window(spec.solver.t_end), spec.analysis);

    std::printf("model = %s\nf = %g\ntau = %g\nseed = %llu\n",
                msfs::to_string(spec.model).c_str(), f, tau,
                static_cast<unsigned long long>(seed));
    std::printf("class = %s\n", msfs::to_string(rep.klass).c_str());
    if (rep.period) std::printf("period = %.6g\n", *rep.period);
    if (rep.amplitude) std::printf("amplitude = %.6g\n", *rep.amplitude);
    if (rep.sync_time) std::printf("sync_time = %.6g\n", *rep.sync_time);
    if (!out_path.empty()) {
        dump_trajectory(traj, sys.topology(), out_path);
        std::printf("trajectory written to %s\n", out_path.c_str());
    }
    return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::vector<std::string>& sets,
              const std::string& out_path, std::uint64_t* seed_override,
              int jobs, const std::string& pivot_metric) {
    const msfs::ExperimentConfig cfg =
        load_config(config_path, sets, seed_override);
    const msfs::SweepSpec spec = cfg.sweep_spec();
    print_provenance(cfg);

    const auto t0 = std::chrono::steady_clock::now();
    const auto rows = msfs::run_sweep(spec, jobs_from(jobs));
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    msfs::export_csv(rows, out_path);
    {
        std::ofstream meta(out_path + ".meta");
        meta << cfg.echo();
    }
    if (!pivot_metric.empty()) {
        msfs::export_pivot_csv(rows, pivot_metric, out_path + ".pivot.csv");
    }
    int errors = 0;
    for (const auto& r : rows) errors += r.error.empty() ? 0 : 1;
    std::printf("rows = %zu\nerrors = %d\nelapsed_s = %.2f\nout = %s\n",
                rows.size(), errors, elapsed, out_path.c_str());
    return kExitOk;
}

int cmd_verify(const std::string& table) {
    const msfs::golden::TableResult res = msfs::golden::run_table(table);
    for (const auto& e : res.entries) {
        if (e.pass) {
            std::printf("PASS %s: %s\n", e.name.c_str(), e.actual.c_str());
        } else {
            std::printf("FAIL %s: expected %s, got %s\n", e.name.c_str(),
                        e.expected.c_str(), e.actual.c_str());
        }
    }
    std::printf("%d/%zu pass\n", res.passed(), res.entries.size());
    return res.all_pass() ? kExitOk : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"msfs - multi-scale feedback system simulators"};
    app.require_subcommand(1);

    std::string config_path, out_path, table, pivot_metric;
    std::vector<std::string> sets;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int jobs = 0;

    auto* run = app.add_subcommand("run", "single simulation with a report");
    run->add_option("--config", config_path, "experiment config file")->required();
    run->add_option("--set", sets, "override: key=value (repeatable)");
    run->add_option("--out", out_path, "trajectory/state dump path");
    run->add_option("--seed", seed, "override sweep.seed")
        ->each([&](const std::string&) { seed_given = true; });

    auto* sweep = app.add_subcommand("sweep", "parameter sweep to CSV");
    sweep->add_option("--config", config_path, "experiment config file")->required();
    sweep->add_option("--out", out_path, "CSV output path")->required();
    sweep->add_option("--set", sets, "override: key=value (repeatable)");
    sweep->add_option("--seed", seed, "override sweep.seed")
        ->each([&](const std::string&) { seed_given = true; });
    sweep->add_option("--jobs", jobs, "worker threads (default: MSFS_JOBS or cores)");
    sweep->add_option("--pivot", pivot_metric,
                      "also write an (F x tau) pivot of this metric");

    auto* verify = app.add_subcommand("verify", "run a golden behavior table");
    verify->add_option("table", table, "table name")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (app.got_subcommand("run")) {
            return cmd_run(config_path, sets, out_path,
                           seed_given ? &seed : nullptr);
        }
        if (app.got_subcommand("sweep")) {
            return cmd_sweep(config_path, sets, out_path,
                             seed_given ? &seed : nullptr, jobs, pivot_metric);
        }
        return cmd_verify(table);
    } catch (const msfs::DivergenceError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kExitNumeric;
    } catch (const msfs::hca::NonConvergenceError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kExitNumeric;
    } catch (const msfs::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
