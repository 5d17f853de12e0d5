#pragma once

#include "msfs/hca/engine.hpp"
#include "msfs/oscillators.hpp"
#include "msfs/signal_analysis.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace msfs {

enum class ModelKind { HoFlat, HoHierarchy, Hca };

std::string to_string(ModelKind m);

// Parameter grid for a seeded multi-run sweep over one model family.
struct SweepSpec {
    ModelKind model = ModelKind::HoFlat;

    // HO parameters
    CouplingKind coupling = CouplingKind::P;
    int flat_n = 4;
    int levels = 2;
    int children = 64;
    double w = 0.5;
    std::vector<double> f_values{0.0};
    std::vector<double> tau_values{1.0};

    // HCA parameters
    std::string rules = "diamond";
    double th0 = 0.1;
    double th1 = 0.7;
    std::vector<int> fq0_values{1};
    std::vector<int> fq1_values{1};
    std::vector<int> fq2_values{1};
    long max_cycles = 10000;

    // common
    int runs = 10;
    std::uint64_t seed = 1;
    SolverConfig solver;
    AnalysisConfig analysis;

    void validate() const;
};

struct RunMetrics {
    BehaviorClass klass = BehaviorClass::NoOscillation;
    std::optional<double> period;
    std::optional<double> amplitude;
    std::optional<double> sync_time;
    bool synchronized() const {
        return klass == BehaviorClass::SynchronizedInPhase ||
               klass == BehaviorClass::SynchronizedOutOfPhase;
    }
};

struct ResultRow {
    ModelKind model = ModelKind::HoFlat;
    // parameter point
    CouplingKind coupling = CouplingKind::P;
    int n = 0;
    int levels = 0;
    int children = 0;
    double f = 0.0;
    double tau = 0.0;
    double w = 0.0;
    std::string rules;
    double th0 = 0.0;
    double th1 = 0.0;
    int fq0 = 0, fq1 = 0, fq2 = 0;
    int runs = 0;

    // per-run metrics are retained alongside the aggregates
    std::vector<RunMetrics> per_run;
    double sync_fraction = 0.0;
    std::optional<double> period_mean;
    std::optional<double> amplitude_mean;
    std::optional<double> sync_time_mean;

    // HCA outcomes (period 0 = level does not oscillate)
    std::optional<int> p0, p1, p2;
    std::string macro_pattern;

    std::string error; // non-empty when the point's simulation failed
};

// Seed for run r at a grid point: a hash of the base seed and the point's
// parameter values (never of enumeration order).
std::uint64_t run_seed(const SweepSpec& spec, const ResultRow& point, int run);

// The oscillator system a sweep point describes.
OscillatorSystem make_ho_system(const SweepSpec& spec, double f, double tau);

// One seeded oscillator run: integrate and classify.
RunMetrics simulate_ho_run(const SweepSpec& spec, const OscillatorSystem& sys,
                           std::uint64_t seed);

// One row per grid point, ordered by parameter tuple; a point's failure is
// recorded in its row, never aborts the sweep. Grid points execute on
// `jobs` worker threads (0 = hardware concurrency); results are
// bitwise-reproducible and independent of execution order.
std::vector<ResultRow> run_sweep(const SweepSpec& spec, int jobs = 0);

// CSV with a stable header; numbers carry 6 significant digits; absent
// metrics are empty fields (HCA periods: 0 = no oscillation).
std::string csv_string(const std::vector<ResultRow>& rows);
void export_csv(const std::vector<ResultRow>& rows, const std::string& path);

// (F rows ascending) x (tau columns ascending) pivot of one metric column.
std::string pivot_csv_string(const std::vector<ResultRow>& rows,
                             const std::string& metric);
void export_pivot_csv(const std::vector<ResultRow>& rows,
                      const std::string& metric, const std::string& path);

// JSON export mirroring the CSV schema, plus the retained per-run metrics.
std::string json_string(const std::vector<ResultRow>& rows);
void export_json(const std::vector<ResultRow>& rows, const std::string& path);

} // namespace msfs
