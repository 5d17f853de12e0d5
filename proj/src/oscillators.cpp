#include "msfs/oscillators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace msfs {

CouplingSpec CouplingSpec::uniform(CouplingKind kind, double f, double tau,
                                   double w) {
    CouplingSpec spec;
    spec.kind = kind;
    spec.strength = {f};
    spec.delay = {tau};
    spec.w = w;
    return spec;
}

void CouplingSpec::validate(int levels) const {
    auto check_sized = [&](const std::vector<double>& v, const char* what) {
        if (v.size() != 1 && static_cast<int>(v.size()) != levels) {
            throw ConfigError(std::string(what) +
                              " must have one entry or one per level");
        }
    };
    check_sized(strength, "coupling strength");
    check_sized(delay, "coupling delay");
    for (double f : strength) {
        if (!(f >= 0.0) || !std::isfinite(f)) {
            throw ConfigError("coupling strength must be finite and >= 0");
        }
    }
    for (double tau : delay) {
        if (!(tau >= 0.0) || !std::isfinite(tau)) {
            throw ConfigError("coupling delay must be finite and >= 0");
        }
    }
    if (!(w >= 0.0 && w <= 1.0)) {
        throw ConfigError("blend weight w must lie in [0,1]");
    }
}

namespace {

double level_value(const std::vector<double>& v, int level) {
    return v.size() == 1 ? v[0] : v[static_cast<std::size_t>(level)];
}

} // namespace

Topology Topology::flat(int n) {
    if (n < 2) {
        throw TopologyError("flat network needs at least 2 oscillators, got " +
                            std::to_string(n));
    }
    Topology t;
    t.shape = Shape::Flat;
    t.levels = 1;
    t.children = 0;
    t.level_counts = {n};
    t.level_offsets = {0};
    t.total = n;
    return t;
}

Topology Topology::hierarchy(int m_levels, int c_children) {
    if (m_levels < 1 || c_children < 1) {
        throw TopologyError("hierarchy needs M >= 1 levels and C >= 1 children");
    }
    Topology t;
    t.shape = Shape::Hierarchy;
    t.levels = m_levels;
    t.children = c_children;
    // Level m holds C^(M-1-m) oscillators, single oscillator on top.
    t.level_counts.resize(static_cast<std::size_t>(m_levels));
    int count = 1;
    for (int m = m_levels - 1; m >= 0; --m) {
        t.level_counts[static_cast<std::size_t>(m)] = count;
        if (m > 0) count *= c_children;
    }
    t.level_offsets.resize(t.level_counts.size());
    int offset = 0;
    for (std::size_t m = 0; m < t.level_counts.size(); ++m) {
        t.level_offsets[m] = offset;
        offset += t.level_counts[m];
    }
    t.total = offset;
    return t;
}

OscillatorSystem::OscillatorSystem(Topology topology, CouplingSpec coupling)
    : topology_(std::move(topology)), coupling_(std::move(coupling)) {
    coupling_.validate(topology_.levels);

    level_lag_index_.assign(static_cast<std::size_t>(topology_.levels), -1);
    for (int m = 0; m < topology_.levels; ++m) {
        const double tau = level_value(coupling_.delay, m);
        if (tau == 0.0) continue; // undelayed coupling reads the current state
        auto it = std::find(delays_.lags.begin(), delays_.lags.end(), tau);
        if (it == delays_.lags.end()) {
            delays_.lags.push_back(tau);
            it = delays_.lags.end() - 1;
        }
        level_lag_index_[static_cast<std::size_t>(m)] =
            static_cast<int>(it - delays_.lags.begin());
    }
    auto it = std::find(delays_.lags.begin(), delays_.lags.end(), kInternalLag);
    if (it == delays_.lags.end()) {
        delays_.lags.push_back(kInternalLag);
        it = delays_.lags.end() - 1;
    }
    internal_lag_index_ = static_cast<int>(it - delays_.lags.begin());
}

const Vector& OscillatorSystem::level_source(int level, const Vector& current,
                                             const DelayedStates& lagged) const {
    const int li = level_lag_index_[static_cast<std::size_t>(level)];
    return li < 0 ? current : lagged[static_cast<std::size_t>(li)];
}

double OscillatorSystem::coupling_input(int level, int i, const Vector& current,
                                        const DelayedStates& lagged) const {
    const Topology& top = topology_;
    const Vector& src = level_source(level, current, lagged);

    if (top.is_flat()) {
        const int n = top.level_counts[0];
        return src[top.x_index(0, (i + n - 1) % n)];
    }
    if (top.levels == 1) return 0.0; // degenerate hierarchy: uncoupled

    const int k_top = top.levels - 1;
    auto children_mean = [&](int m, int j) {
        const int first = j * top.children;
        double sum = 0.0;
        for (int c = 0; c < top.children; ++c) {
            sum += src[top.x_index(m - 1, first + c)];
        }
        return sum / top.children;
    };

    if (level == 0) {
        return src[top.x_index(1, top.parent_of(0, i))];
    }
    if (level == k_top) {
        return children_mean(k_top, i);
    }
    return eval_gamma(src[top.x_index(level + 1, top.parent_of(level, i))],
                      children_mean(level, i), coupling_.w);
}

void OscillatorSystem::eval(double /*t*/, const Vector& y,
                            const DelayedStates& lagged, Vector& dydt) const {
    const Topology& top = topology_;
    const Vector& internal = lagged[static_cast<std::size_t>(internal_lag_index_)];
    const double pp = coupling_.pp();

    for (int m = 0; m < top.levels; ++m) {
        const double f = level_value(coupling_.strength, m);
        for (int i = 0; i < top.level_counts[static_cast<std::size_t>(m)]; ++i) {
            const int xi = top.x_index(m, i);
            const int yi = top.y_index(m, i);
            const double u = coupling_input(m, i, y, lagged);
            dydt[xi] = eval_x_rhs(u, internal[yi], y[xi], f, pp);
            dydt[yi] = eval_y_rhs(internal[xi], y[yi]);
        }
    }
}

Rhs OscillatorSystem::rhs() const {
    return [sys = *this](double t, const Vector& y, const DelayedStates& lagged,
                         Vector& dydt) { sys.eval(t, y, lagged, dydt); };
}

Vector OscillatorSystem::initial_state(std::uint64_t seed) const {
    SplitMix64 rng(seed);
    Vector y0(state_dim());
    for (int j = 0; j < topology_.total; ++j) {
        y0[j] = rng.next_open01();
    }
    y0.tail(topology_.total).setOnes();
    return y0;
}

OscillatorSystem build_flat(int n, const CouplingSpec& coupling) {
    return OscillatorSystem(Topology::flat(n), coupling);
}

OscillatorSystem build_hierarchy(int m_levels, int c_children,
                                 const CouplingSpec& coupling) {
    return OscillatorSystem(Topology::hierarchy(m_levels, c_children), coupling);
}

double eval_gamma(double parent_x, double children_mean, double w) {
    return w * parent_x + (1.0 - w) * children_mean;
}

double eval_x_rhs(double coupling_input, double y_lag2, double x_now, double f,
                  double pp) {
    const double fu = f * coupling_input;
    const double fu3 = fu * fu * fu;
    const double yh = y_lag2 / 0.5;
    const double yh3 = yh * yh * yh;
    return (1.0 + pp * fu3) / (1.0 + fu3 + yh3) - 0.5 * x_now + 0.1;
}

double eval_y_rhs(double x_lag2, double y_now) {
    const double xh = x_lag2 / 0.5;
    const double xh3 = xh * xh * xh;
    return xh3 / (1.0 + xh3) - 0.5 * y_now + 0.1;
}

} // namespace msfs
