#pragma once

#include "msfs/dde.hpp"
#include "msfs/rng.hpp"

#include <cstdint>
#include <vector>

namespace msfs {

// Invalid network layout (N < 2 ring, M < 1 or C < 1 tree).
class TopologyError : public ConfigError {
  public:
    using ConfigError::ConfigError;
};

// P-type coupling promotes the downstream X component, N-type represses it.
enum class CouplingKind { P, N };

struct CouplingSpec {
    CouplingKind kind = CouplingKind::P;
    std::vector<double> strength; // F_m per level; one entry for flat rings
    std::vector<double> delay;    // tau_m per level, model time units
    double w = 0.5;               // parent/children blend weight, middle levels

    static CouplingSpec uniform(CouplingKind kind, double f, double tau,
                                double w = 0.5);

    // 1 for P coupling, 0 for N: selects the activating or repressing
    // Hill numerator.
    double pp() const { return kind == CouplingKind::P ? 1.0 : 0.0; }
    void validate(int levels) const;
};

// Ring of peers, or a uniform tree counted bottom level 0 up to the single
// top oscillator at level M-1.
struct Topology {
    enum class Shape { Flat, Hierarchy };

    Shape shape = Shape::Flat;
    int levels = 1;                  // M
    int children = 0;                // C (hierarchy only)
    std::vector<int> level_counts;   // N_m, bottom first
    std::vector<int> level_offsets;  // first global oscillator index per level
    int total = 0;

    static Topology flat(int n);
    static Topology hierarchy(int m_levels, int c_children);

    bool is_flat() const { return shape == Shape::Flat; }
    int osc_index(int level, int i) const { return level_offsets[level] + i; }
    // Local index of the parent of oscillator (level, i) within level+1.
    int parent_of(int level, int i) const { return i / children; }

    // State layout: X components occupy [0, total), Y components
    // [total, 2*total), both in global oscillator order.
    int x_index(int level, int i) const { return osc_index(level, i); }
    int y_index(int level, int i) const { return total + osc_index(level, i); }
    int state_dim() const { return 2 * total; }
};

// Assembled right-hand side for a flat or hierarchical oscillator network,
// ready for the DDE integrator. Construction and evaluation are pure;
// instances are safe to share across parallel sweep workers.
class OscillatorSystem {
  public:
    OscillatorSystem(Topology topology, CouplingSpec coupling);

    const Topology& topology() const { return topology_; }
    const CouplingSpec& coupling() const { return coupling_; }
    int state_dim() const { return topology_.state_dim(); }

    // Unique lags: the per-level coupling delays plus the fixed internal
    // lag 2 of the X(t-2) / Y(t-2) terms.
    const DelaySpec& delays() const { return delays_; }

    void eval(double t, const Vector& y, const DelayedStates& lagged,
              Vector& dydt) const;
    Rhs rhs() const;

    // X components drawn uniformly from (0,1) in global oscillator order,
    // Y components set to 1.
    Vector initial_state(std::uint64_t seed) const;

  private:
    double coupling_input(int level, int i, const Vector& current,
                          const DelayedStates& lagged) const;
    const Vector& level_source(int level, const Vector& current,
                               const DelayedStates& lagged) const;

    Topology topology_;
    CouplingSpec coupling_;
    DelaySpec delays_;
    std::vector<int> level_lag_index_; // -1 when tau_m == 0 (read current state)
    int internal_lag_index_ = 0;       // entry of delays_ holding the lag 2
};

OscillatorSystem build_flat(int n, const CouplingSpec& coupling);
OscillatorSystem build_hierarchy(int m_levels, int c_children,
                                 const CouplingSpec& coupling);

// Blend of parent state and children-mean state feeding a mid-level
// oscillator: w*parent + (1-w)*children_mean.
double eval_gamma(double parent_x, double children_mean, double w);

// Common X-equation form: Hill production driven by the delayed coupling
// input and the oscillator's own delayed Y, linear decay, basal rate.
double eval_x_rhs(double coupling_input, double y_lag2, double x_now,
                  double f, double pp);

// Y-equation: activation by the oscillator's own delayed X.
double eval_y_rhs(double x_lag2, double y_now);

constexpr double kInternalLag = 2.0;

} // namespace msfs
