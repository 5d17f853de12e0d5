#include "msfs/signal_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace msfs {

std::string to_string(BehaviorClass c) {
    switch (c) {
    case BehaviorClass::NoOscillation: return "no-oscillation";
    case BehaviorClass::UnsynchronizedOscillation: return "unsynchronized";
    case BehaviorClass::SynchronizedInPhase: return "synchronized-in-phase";
    case BehaviorClass::SynchronizedOutOfPhase: return "synchronized-out-of-phase";
    }
    return "?";
}

namespace {

double median(std::vector<double> v) {
    const std::size_t n = v.size();
    std::nth_element(v.begin(), v.begin() + n / 2, v.end());
    const double hi = v[n / 2];
    if (n % 2 == 1) return hi;
    std::nth_element(v.begin(), v.begin() + n / 2 - 1, v.end());
    return 0.5 * (v[n / 2 - 1] + hi);
}

struct CycleStats {
    double p2p = 0.0;
    std::vector<double> peak_times; // one per complete cycle
    std::vector<double> cycle_amps; // max - min per complete cycle
};

// Cycles are segmented by upward crossings of the midline between the
// window's extrema; within each cycle the first maximum sample marks the
// peak (plateau-safe for square-ish signals).
CycleStats cycle_stats(const std::vector<double>& t,
                       const std::vector<double>& v) {
    if (t.size() != v.size()) {
        throw std::invalid_argument("times/values size mismatch");
    }
    if (t.empty()) {
        throw std::invalid_argument("empty analysis window");
    }
    CycleStats out;
    const auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
    out.p2p = *hi_it - *lo_it;
    const double mid = 0.5 * (*hi_it + *lo_it);

    std::vector<std::size_t> cross; // index i of the first sample >= mid
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i - 1] < mid && v[i] >= mid) cross.push_back(i);
    }
    for (std::size_t c = 0; c + 1 < cross.size(); ++c) {
        const std::size_t a = cross[c];
        const std::size_t b = cross[c + 1];
        std::size_t peak = a;
        double cmax = v[a], cmin = v[a];
        for (std::size_t i = a; i < b; ++i) {
            if (v[i] > cmax) { cmax = v[i]; peak = i; }
            cmin = std::min(cmin, v[i]);
        }
        out.peak_times.push_back(t[peak]);
        out.cycle_amps.push_back(cmax - cmin);
    }
    return out;
}

} // namespace

std::optional<double> measure_period(const std::vector<double>& times,
                                     const std::vector<double>& values,
                                     double eps_osc) {
    const CycleStats s = cycle_stats(times, values);
    if (s.p2p < eps_osc || s.peak_times.size() < 2) return std::nullopt;
    double sum = 0.0;
    for (std::size_t i = 1; i < s.peak_times.size(); ++i) {
        sum += s.peak_times[i] - s.peak_times[i - 1];
    }
    return sum / static_cast<double>(s.peak_times.size() - 1);
}

std::optional<double> measure_amplitude(const std::vector<double>& times,
                                        const std::vector<double>& values,
                                        double eps_osc) {
    const CycleStats s = cycle_stats(times, values);
    if (s.p2p < eps_osc) return std::nullopt;
    if (s.cycle_amps.empty()) return s.p2p; // less than one full cycle visible
    return median(s.cycle_amps);
}

namespace {

// Mesh node indices with node_time in [t_from, t_to].
std::pair<std::size_t, std::size_t> node_range(const Trajectory& traj,
                                               double t_from, double t_to) {
    const auto& ts = traj.node_times();
    const auto lo = std::lower_bound(ts.begin(), ts.end(), t_from - 1e-12);
    const auto hi = std::upper_bound(ts.begin(), ts.end(), t_to + 1e-12);
    return {static_cast<std::size_t>(lo - ts.begin()),
            static_cast<std::size_t>(hi - ts.begin())};
}

double spread_at(const Trajectory& traj, const Topology& topo, std::size_t node) {
    const Vector& y = traj.node_state(node);
    double lo = y[topo.x_index(0, 0)], hi = lo;
    for (int i = 1; i < topo.level_counts[0]; ++i) {
        const double x = y[topo.x_index(0, i)];
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    return hi - lo;
}

} // namespace

double bottom_spread(const Trajectory& traj, const Topology& topology,
                     double t_from, double t_to) {
    const auto [lo, hi] = node_range(traj, t_from, t_to);
    double worst = 0.0;
    for (std::size_t n = lo; n < hi; ++n) {
        worst = std::max(worst, spread_at(traj, topology, n));
    }
    return worst;
}

std::optional<double> sync_time(const Trajectory& traj,
                                const Topology& topology, double spread_limit) {
    const std::size_t count = traj.node_count();
    if (count == 0) return std::nullopt;
    if (spread_at(traj, topology, count - 1) >= spread_limit) {
        return std::nullopt; // not synchronized at the end
    }
    std::size_t last_bad = count; // sentinel: never exceeded
    for (std::size_t n = count - 1; n-- > 0;) {
        if (spread_at(traj, topology, n) >= spread_limit) {
            last_bad = n;
            break;
        }
    }
    if (last_bad == count) return 0.0;
    return traj.node_time(last_bad + 1);
}

Window default_window(double t_end) { return {0.5 * t_end, t_end}; }

BehaviorReport classify(const Trajectory& traj, const Topology& topology,
                        Window window, const AnalysisConfig& cfg) {
    if (!(window.t_start < window.t_end)) {
        throw std::invalid_argument("empty analysis window");
    }
    const auto [lo, hi] = node_range(traj, window.t_start, window.t_end);
    if (hi - lo < 4) {
        throw std::invalid_argument("analysis window holds too few samples");
    }

    BehaviorReport report;
    report.window = window;

    std::vector<double> times(traj.node_times().begin() + static_cast<long>(lo),
                              traj.node_times().begin() + static_cast<long>(hi));
    const int n0 = topology.level_counts[0];
    std::vector<double> series(times.size());

    std::vector<double> periods, amps;
    for (int i = 0; i < n0; ++i) {
        const int xi = topology.x_index(0, i);
        for (std::size_t n = lo; n < hi; ++n) {
            series[n - lo] = traj.node_state(n)[xi];
        }
        if (auto amp = measure_amplitude(times, series, cfg.eps_osc)) {
            amps.push_back(*amp);
            if (auto p = measure_period(times, series, cfg.eps_osc)) {
                periods.push_back(*p);
            }
        }
    }

    if (amps.empty()) {
        report.klass = BehaviorClass::NoOscillation;
        return report;
    }

    const double amplitude = median(amps);
    const double period = periods.empty() ? 0.0 : median(periods);
    report.amplitude = amplitude;
    if (!periods.empty()) report.period = period;

    if (period > 0.0 && window.length() < 5.0 * period) {
        throw InsufficientDataError("window spans fewer than 5 periods");
    }

    // Synchrony: bottom-level spread stays under eps_sync * amplitude over
    // the final fraction of the run.
    const double run_end = traj.t_end();
    const double limit = cfg.eps_sync * amplitude;
    const double spread =
        bottom_spread(traj, topology, run_end * (1.0 - cfg.sync_frac), run_end);
    if (spread >= limit) {
        report.klass = BehaviorClass::UnsynchronizedOscillation;
        return report;
    }

    report.sync_time = sync_time(traj, topology, limit);

    report.klass = BehaviorClass::SynchronizedInPhase;
    if (!topology.is_flat() && topology.levels > 1 && period > 0.0) {
        // Phase offsets between adjacent level means, over the sync window.
        const auto [plo, phi] =
            node_range(traj, run_end * (1.0 - cfg.sync_frac), run_end);
        std::vector<double> ptimes(
            traj.node_times().begin() + static_cast<long>(plo),
            traj.node_times().begin() + static_cast<long>(phi));
        std::vector<std::vector<double>> peaks_per_level;
        std::vector<double> mean_series(ptimes.size());
        for (int m = 0; m < topology.levels; ++m) {
            for (std::size_t n = plo; n < phi; ++n) {
                const Vector& y = traj.node_state(n);
                double sum = 0.0;
                for (int i = 0; i < topology.level_counts[static_cast<std::size_t>(m)]; ++i) {
                    sum += y[topology.x_index(m, i)];
                }
                mean_series[n - plo] =
                    sum / topology.level_counts[static_cast<std::size_t>(m)];
            }
            peaks_per_level.push_back(
                cycle_stats(ptimes, mean_series).peak_times);
        }
        for (int m = 0; m + 1 < topology.levels; ++m) {
            const auto& a = peaks_per_level[static_cast<std::size_t>(m)];
            const auto& b = peaks_per_level[static_cast<std::size_t>(m + 1)];
            if (a.empty() || b.empty()) continue;
            std::vector<double> offsets;
            for (double q : b) {
                const auto it = std::lower_bound(a.begin(), a.end(), q);
                double best = std::numeric_limits<double>::infinity();
                if (it != a.end()) best = std::min(best, std::abs(*it - q));
                if (it != a.begin()) best = std::min(best, std::abs(*(it - 1) - q));
                const double frac = std::fmod(best, period) / period;
                offsets.push_back(std::min(frac, 1.0 - frac));
            }
            if (median(offsets) > cfg.phase_tol) {
                report.klass = BehaviorClass::SynchronizedOutOfPhase;
                break;
            }
        }
    }
    return report;
}

} // namespace msfs
