#pragma once

#include "msfs/dde.hpp"
#include "msfs/oscillators.hpp"

#include <optional>
#include <string>
#include <vector>

namespace msfs {

// Analysis window too short for a reliable classification.
class InsufficientDataError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class BehaviorClass {
    NoOscillation,
    UnsynchronizedOscillation,
    SynchronizedInPhase,
    SynchronizedOutOfPhase, // hierarchical systems only
};

std::string to_string(BehaviorClass c);

struct AnalysisConfig {
    double eps_osc = 0.01;    // peak-to-peak below this counts as flat
    double eps_sync = 0.05;   // spread threshold as a fraction of amplitude
    double phase_tol = 0.05;  // in-phase tolerance as a fraction of a period
    double sync_frac = 0.25;  // sync criterion sustained over this final
                              // fraction of the run
};

struct Window {
    double t_start = 0.0;
    double t_end = 0.0;
    double length() const { return t_end - t_start; }
};

struct BehaviorReport {
    BehaviorClass klass = BehaviorClass::NoOscillation;
    std::optional<double> period;    // present iff oscillating
    std::optional<double> amplitude; // peak-to-peak, present iff oscillating
    std::optional<double> sync_time; // present iff synchronized
    Window window;
};

// Mean interval between successive cycle peaks over the window; cycles are
// segmented by upward midline crossings. Absent when the peak-to-peak
// amplitude stays below eps_osc. Throws std::invalid_argument on an empty
// window.
std::optional<double> measure_period(const std::vector<double>& times,
                                     const std::vector<double>& values,
                                     double eps_osc = 0.01);

// Median over cycles of (cycle max - cycle min); absent below eps_osc.
std::optional<double> measure_amplitude(const std::vector<double>& times,
                                        const std::vector<double>& values,
                                        double eps_osc = 0.01);

// Largest same-level spread max_i X_i(t) - min_i X_i(t) across the bottom
// level, maximised over mesh times in [t_from, t_to].
double bottom_spread(const Trajectory& traj, const Topology& topology,
                     double t_from, double t_to);

// Earliest time after which the bottom-level synchrony criterion holds
// continuously to the end of the trajectory; absent when it fails at the
// end. `spread_limit` is the absolute threshold eps_sync * amplitude.
std::optional<double> sync_time(const Trajectory& traj,
                                const Topology& topology, double spread_limit);

// Emergent-behavior classification over the window: flat amplitude ->
// NoOscillation; bottom level out of lockstep -> Unsynchronized; otherwise
// the cross-level phase offset decides in-phase vs out-of-phase.
BehaviorReport classify(const Trajectory& traj, const Topology& topology,
                        Window window, const AnalysisConfig& cfg = {});

// Default analysis window: the last half of the run, skipping transients.
Window default_window(double t_end);

} // namespace msfs
