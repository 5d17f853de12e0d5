#pragma once

#include <Eigen/Dense>

#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace msfs {

using Vector = Eigen::VectorXd;

// Invalid solver / model configuration (maps to CLI exit code 2).
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Non-finite state during integration (maps to CLI exit code 3).
class DivergenceError : public std::runtime_error {
  public:
    DivergenceError(const std::string& what, double t)
        : std::runtime_error(what), time_(t) {}
    double time() const { return time_; }

  private:
    double time_;
};

// Constant discrete delays, in model time units.
struct DelaySpec {
    std::vector<double> lags;

    double min_lag() const;
    double max_lag() const;
    void validate() const; // every lag finite and > 0
};

// State history on t <= 0. Must be continuous on [-max_lag, 0].
class HistoryFunction {
  public:
    using Fn = std::function<void(double t, Eigen::Ref<Vector> out)>;

    HistoryFunction() : dim_(0) {}
    HistoryFunction(int dim, Fn fn) : dim_(dim), fn_(std::move(fn)) {}

    static HistoryFunction constant(Vector value);

    int dim() const { return dim_; }
    void eval(double t, Eigen::Ref<Vector> out) const { fn_(t, out); }
    Vector operator()(double t) const {
        Vector out(dim_);
        fn_(t, out);
        return out;
    }

  private:
    int dim_;
    Fn fn_;
};

struct SolverConfig {
    double h = 0.05;      // fixed step size
    double t_end = 500.0; // integration horizon
};

// Dense, interpolatable time series over [0, t_end]. Mesh nodes store the
// state and its derivative; between nodes a cubic Hermite interpolant is
// used. Queries at t <= 0 are delegated to the history function. Immutable
// after construction and safe to share read-only.
class Trajectory {
  public:
    Trajectory(HistoryFunction history, double max_lag)
        : history_(std::move(history)), max_lag_(max_lag) {}

    // Nodes must arrive in strictly increasing time order.
    void push_node(double t, const Vector& state, const Vector& deriv);

    int dim() const { return history_.dim(); }
    std::size_t node_count() const { return times_.size(); }
    double node_time(std::size_t i) const { return times_[i]; }
    const Vector& node_state(std::size_t i) const { return states_[i]; }
    const std::vector<double>& node_times() const { return times_; }

    double t_begin() const { return times_.front(); }
    double t_end() const { return times_.back(); }
    double max_lag() const { return max_lag_; }
    const HistoryFunction& history() const { return history_; }

    // Exact node value at mesh points, cubic Hermite between them,
    // history for t <= 0. Throws std::out_of_range outside
    // [-max_lag, t_end].
    void sample_into(double t, Eigen::Ref<Vector> out) const;
    Vector sample(double t) const;

  private:
    std::vector<double> times_;
    std::vector<Vector> states_;
    std::vector<Vector> derivs_;
    HistoryFunction history_;
    double max_lag_ = 0.0;
};

// Right-hand side f(t, y, y(t - lag_0), y(t - lag_1), ...) -> dy/dt.
// `lagged` holds one full state vector per entry of DelaySpec::lags,
// in the same order.
using DelayedStates = std::vector<Vector>;
using Rhs = std::function<void(double t, const Vector& y,
                               const DelayedStates& lagged, Vector& dydt)>;

// Method of steps: fixed-step classical Runge-Kutta with cubic Hermite
// dense output feeding the delayed-state lookups. Requires h <= min(lags)
// so stage lookups never read past the integration front. Deterministic:
// identical inputs give bitwise-identical trajectories.
Trajectory integrate(const Rhs& rhs, const DelaySpec& delays,
                     const HistoryFunction& history,
                     const SolverConfig& config);

} // namespace msfs
