#pragma once

#include "msfs/hca/rules.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace msfs::hca {

struct InitialPattern {
    enum class Kind { CenterCell, CenterRow, Coords };
    Kind kind = Kind::CenterCell;
    std::vector<std::pair<int, int>> coords; // (row, col), Kind::Coords only

    static InitialPattern named(const std::string& name);
};

struct LevelConfig {
    int ca_count = 1;
    int rows = 1;
    int cols = 1;
    Boundary boundary = Boundary::Bounded;
    RulePair rules;         // top level: static rule stored in `expansive`
    double threshold = 0.5; // Th_k for abstracting this level upward
    int frequency = 1;      // Fq_k: level executes every Fq_k cycles
};

// Level structure, bottom first. Each CA at level k maps bidirectionally to
// one cell of a level-(k+1) CA: CA (k, i) <-> cell i%S of CA i/S at k+1,
// cells numbered row-major.
struct HcaConfig {
    std::vector<LevelConfig> levels;
    InitialPattern initial; // applied to every bottom-level CA

    int level_count() const { return static_cast<int>(levels.size()); }
    void validate() const;
};

// The benchmark layout: 32 bottom CAs of 21x21 cells onto a 4x8 control
// grid onto a single-cell top. rules_name selects the bottom pair
// ("diamond" or "line"); the middle and top rules are fixed.
HcaConfig three_level_config(const std::string& rules_name, double th0,
                             double th1, int fq0, int fq1, int fq2);

// Full deterministic system state between cycles. `ever_live` tracks, for
// macro levels, which cells have ever been live: dead-from-start cells send
// grow goals until they first switch on.
struct HcaState {
    std::vector<std::vector<Grid>> grids;          // [level][ca]
    std::vector<std::vector<CellArray>> ever_live; // levels >= 1; [level][ca]
    long cycle = 0;

    static HcaState initial(const HcaConfig& config);
};

// One full cycle: levels run bottom to top. Level k is active on its Fq_k-th,
// 2*Fq_k-th, ... cycle, i.e. when (cycle+1) % Fq_k == 0; inactive levels keep
// their state frozen. An active level pulls fresh abstractions from the level
// below into its own cells (the lower level has already moved this cycle, so
// abstract state crosses all levels within one cycle), reads its goal from
// its macro cell (last updated at the macro's own activation, so control
// lags one cycle per level), then executes the rule the goal selects. The
// top level applies its static rule instead.
void run_cycle(HcaState& state, const HcaConfig& config);

struct CaBehavior {
    enum class Kind { Dead, Stuck, Oscillating };
    Kind kind = Kind::Dead;
    int live_cells = 0; // Stuck
    int period = 1;     // Oscillating, in cycles
    std::vector<int> cycle_live_counts; // live counts over one period, sorted

    bool same_as(const CaBehavior& other) const;
    std::string label() const; // "S0", "S441", "O6", ...
};

struct MacroPattern {
    CaBehavior corner, border, core;
    bool homogeneous = true; // every group internally consistent
    std::string label() const;
};

struct ConvergenceReport {
    std::vector<std::vector<CaBehavior>> behavior; // [level][ca]
    std::vector<std::optional<int>> level_period;  // P_k over oscillating CAs
    long transient_cycles = 0;
    int system_period = 1;
    std::optional<MacroPattern> macro;
};

class NonConvergenceError : public std::runtime_error {
  public:
    NonConvergenceError(const std::string& what,
                        std::vector<std::uint64_t> hash_log)
        : std::runtime_error(what), hash_log_(std::move(hash_log)) {}
    const std::vector<std::uint64_t>& hash_log() const { return hash_log_; }

  private:
    std::vector<std::uint64_t> hash_log_;
};

// Runs until the full system state (grids, ever-live flags, cycle phase
// modulo lcm(Fq_k)) first repeats, then reports each CA's terminal behavior
// over the detected cycle. Deterministic.
ConvergenceReport run_to_convergence(const HcaConfig& config,
                                     long max_cycles = 10000);

// Positional Corner/Border/Core groups of the bottom CAs, defined by their
// mapped cells in the control grid. Heterogeneous groups are reported, not
// thrown.
MacroPattern classify_macro_pattern(const ConvergenceReport& report,
                                    const HcaConfig& config);

// Period formulas relating level periods to activation frequencies. The
// common branch applies when the level's own frequency dominates; otherwise
// the period is a multiple of lcm(Fq_0, Fq_1, Fq_2).
struct PeriodPrediction {
    int common_p01 = 0;
    int exceptional_p01 = 0;
    bool p01_uses_common = true;
    int common_p2 = 0;
    int exceptional_p2 = 0;
    bool p2_uses_common = true;

    int p01() const { return p01_uses_common ? common_p01 : exceptional_p01; }
    int p2() const { return p2_uses_common ? common_p2 : exceptional_p2; }
    bool matches(int observed_p01, int observed_p2) const {
        return p01() == observed_p01 && p2() == observed_p2;
    }
};

PeriodPrediction predict_period(int fq0, int fq1, int fq2, int a, int b);

// True when the observed periods fit the formulas for some multipliers
// drawn (independently per formula) from `multipliers`.
bool period_law_satisfied(int fq0, int fq1, int fq2, int p01, int p2,
                          const std::vector<int>& multipliers);

} // namespace msfs::hca
