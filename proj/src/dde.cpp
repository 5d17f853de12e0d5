#include "msfs/dde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace msfs {

double DelaySpec::min_lag() const {
    return lags.empty() ? std::numeric_limits<double>::infinity()
                        : *std::min_element(lags.begin(), lags.end());
}

double DelaySpec::max_lag() const {
    return lags.empty() ? 0.0 : *std::max_element(lags.begin(), lags.end());
}

void DelaySpec::validate() const {
    for (double lag : lags) {
        if (!(lag > 0.0) || !std::isfinite(lag)) {
            throw ConfigError("delay lags must be finite and > 0, got " +
                              std::to_string(lag));
        }
    }
}

HistoryFunction HistoryFunction::constant(Vector value) {
    const int n = static_cast<int>(value.size());
    return HistoryFunction(
        n, [v = std::move(value)](double, Eigen::Ref<Vector> out) { out = v; });
}

void Trajectory::push_node(double t, const Vector& state, const Vector& deriv) {
    if (!times_.empty() && !(t > times_.back())) {
        throw std::invalid_argument("trajectory nodes must have strictly increasing times");
    }
    times_.push_back(t);
    states_.push_back(state);
    derivs_.push_back(deriv);
}

void Trajectory::sample_into(double t, Eigen::Ref<Vector> out) const {
    const double tol = 1e-9;
    if (t <= times_.front()) {
        if (t < -max_lag_ - tol) {
            throw std::out_of_range("sample time " + std::to_string(t) +
                                    " precedes history span");
        }
        history_.eval(std::min(t, 0.0), out);
        return;
    }
    if (t > times_.back()) {
        if (t > times_.back() + tol) {
            throw std::out_of_range("sample time " + std::to_string(t) +
                                    " beyond trajectory end " +
                                    std::to_string(times_.back()));
        }
        out = states_.back();
        return;
    }
    // upper_bound puts exact node hits at the start of their interval, so
    // the Hermite basis reproduces node values bitwise (theta == 0).
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - times_.begin()) - 1;
    const double t0 = times_[i];
    const double dt = times_[i + 1] - t0;
    const double th = (t - t0) / dt;
    const double omt = 1.0 - th;
    const double h00 = (1.0 + 2.0 * th) * omt * omt;
    const double h10 = th * omt * omt;
    const double h01 = th * th * (3.0 - 2.0 * th);
    const double h11 = th * th * (th - 1.0);
    out = h00 * states_[i] + (h10 * dt) * derivs_[i] + h01 * states_[i + 1] +
          (h11 * dt) * derivs_[i + 1];
}

Vector Trajectory::sample(double t) const {
    Vector out(dim());
    sample_into(t, out);
    return out;
}

namespace {

// Delayed-state lookup at stage time ts. Lookups must stay at or behind the
// integration front; the h <= min(lag) precondition guarantees it.
void fill_lagged(const Trajectory& traj, const std::vector<double>& lags,
                 double ts, double front, DelayedStates& lagged) {
    for (std::size_t j = 0; j < lags.size(); ++j) {
        const double tq = ts - lags[j];
        if (tq > front + 1e-9) {
            throw std::logic_error("delayed lookup ahead of integration front");
        }
        traj.sample_into(tq, lagged[j]);
    }
}

} // namespace

Trajectory integrate(const Rhs& rhs, const DelaySpec& delays,
                     const HistoryFunction& history,
                     const SolverConfig& config) {
    delays.validate();
    if (!(config.h > 0.0) || !std::isfinite(config.h)) {
        throw ConfigError("solver step h must be finite and > 0");
    }
    if (!(config.t_end > 0.0) || !std::isfinite(config.t_end)) {
        throw ConfigError("solver t_end must be finite and > 0");
    }
    if (config.h > delays.min_lag()) {
        throw ConfigError("solver step h = " + std::to_string(config.h) +
                          " exceeds smallest delay " +
                          std::to_string(delays.min_lag()));
    }
    if (history.dim() <= 0) {
        throw ConfigError("history function has no dimension");
    }

    const int dim = history.dim();
    const std::size_t n_lags = delays.lags.size();

    Trajectory traj(history, delays.max_lag());

    Vector y = history(0.0);
    Vector k1(dim), k2(dim), k3(dim), k4(dim), ytmp(dim), ynext(dim);
    DelayedStates lagged(n_lags, Vector(dim));

    // Derivative at t = 0 closes the first Hermite interval.
    fill_lagged(traj, delays.lags, 0.0, 0.0, lagged);
    rhs(0.0, y, lagged, k1);
    traj.push_node(0.0, y, k1);

    double t = 0.0;
    std::size_t step_index = 0;
    while (t < config.t_end - 1e-12) {
        double tn = static_cast<double>(step_index + 1) * config.h;
        if (tn > config.t_end - 1e-12) tn = config.t_end;
        const double dt = tn - t;
        const double tm = t + 0.5 * dt;

        // k1 = f(t, y) carried over from the previous node.
        ytmp = y + (0.5 * dt) * k1;
        fill_lagged(traj, delays.lags, tm, t, lagged);
        rhs(tm, ytmp, lagged, k2);

        ytmp = y + (0.5 * dt) * k2;
        rhs(tm, ytmp, lagged, k3);

        ytmp = y + dt * k3;
        fill_lagged(traj, delays.lags, tn, t, lagged);
        rhs(tn, ytmp, lagged, k4);

        ynext = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!ynext.allFinite()) {
            throw DivergenceError("non-finite state at t = " + std::to_string(tn), tn);
        }

        y.swap(ynext);
        t = tn;
        ++step_index;

        fill_lagged(traj, delays.lags, t, t, lagged);
        rhs(t, y, lagged, k1);
        traj.push_node(t, y, k1);
    }

    return traj;
}

} // namespace msfs
