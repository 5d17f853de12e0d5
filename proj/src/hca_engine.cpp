#include "msfs/hca/engine.hpp"

#include "msfs/dde.hpp" // ConfigError
#include "msfs/rng.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace msfs::hca {

InitialPattern InitialPattern::named(const std::string& name) {
    InitialPattern p;
    if (name == "center-cell") {
        p.kind = Kind::CenterCell;
    } else if (name == "center-row") {
        p.kind = Kind::CenterRow;
    } else {
        throw ConfigError("unknown initial pattern '" + name +
                          "' (expected center-cell or center-row)");
    }
    return p;
}

void HcaConfig::validate() const {
    if (levels.empty()) throw ConfigError("HCA needs at least one level");
    for (std::size_t k = 0; k < levels.size(); ++k) {
        const LevelConfig& lv = levels[k];
        if (lv.ca_count < 1 || lv.rows < 1 || lv.cols < 1) {
            throw ConfigError("level " + std::to_string(k) +
                              " has an empty layout");
        }
        if (lv.frequency < 1) {
            throw ConfigError("activation frequency must be >= 1");
        }
        if (k + 1 < levels.size()) {
            if (!(lv.threshold > 0.0 && lv.threshold < 1.0)) {
                throw ConfigError("threshold Th_" + std::to_string(k) +
                                  " must lie in (0,1)");
            }
            // bijection between level-k CAs and level-(k+1) cells
            const LevelConfig& up = levels[k + 1];
            if (lv.ca_count != up.ca_count * up.rows * up.cols) {
                throw ConfigError("level " + std::to_string(k) + " has " +
                                  std::to_string(lv.ca_count) +
                                  " CAs but level " + std::to_string(k + 1) +
                                  " offers " +
                                  std::to_string(up.ca_count * up.rows * up.cols) +
                                  " cells");
            }
        }
    }
}

HcaConfig three_level_config(const std::string& rules_name, double th0,
                             double th1, int fq0, int fq1, int fq2) {
    HcaConfig cfg;
    LevelConfig l0;
    l0.ca_count = 32;
    l0.rows = l0.cols = 21;
    l0.threshold = th0;
    l0.frequency = fq0;
    if (rules_name == "diamond") {
        l0.rules = diamond_rules();
        l0.boundary = Boundary::Bounded;
        cfg.initial.kind = InitialPattern::Kind::CenterCell;
    } else if (rules_name == "line") {
        l0.rules = line_rules();
        l0.boundary = Boundary::Toroidal;
        cfg.initial.kind = InitialPattern::Kind::CenterRow;
    } else {
        throw ConfigError("unknown rule set '" + rules_name +
                          "' (expected diamond or line)");
    }

    LevelConfig l1;
    l1.ca_count = 1;
    l1.rows = 4;
    l1.cols = 8;
    l1.boundary = Boundary::Bounded;
    l1.rules = level1_rules();
    l1.threshold = th1;
    l1.frequency = fq1;

    LevelConfig l2;
    l2.ca_count = 1;
    l2.rows = l2.cols = 1;
    l2.boundary = Boundary::Bounded;
    l2.rules.name = "inversion";
    l2.rules.expansive = inversion_rule();
    l2.rules.regressive = inversion_rule();
    l2.frequency = fq2;

    cfg.levels = {l0, l1, l2};
    cfg.validate();
    return cfg;
}

HcaState HcaState::initial(const HcaConfig& config) {
    config.validate();
    HcaState st;
    const int m = config.level_count();
    st.grids.resize(static_cast<std::size_t>(m));
    st.ever_live.resize(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
        const LevelConfig& lv = config.levels[static_cast<std::size_t>(k)];
        auto& row = st.grids[static_cast<std::size_t>(k)];
        row.reserve(static_cast<std::size_t>(lv.ca_count));
        for (int i = 0; i < lv.ca_count; ++i) {
            if (k == 0) {
                switch (config.initial.kind) {
                case InitialPattern::Kind::CenterCell:
                    row.push_back(center_cell_grid(lv.rows, lv.cols, lv.boundary));
                    break;
                case InitialPattern::Kind::CenterRow:
                    row.push_back(center_row_grid(lv.rows, lv.cols, lv.boundary));
                    break;
                case InitialPattern::Kind::Coords: {
                    Grid g = Grid::dead(lv.rows, lv.cols, lv.boundary);
                    for (const auto& [r, c] : config.initial.coords) {
                        if (r < 0 || r >= lv.rows || c < 0 || c >= lv.cols) {
                            throw ConfigError("initial pattern coordinate out of range");
                        }
                        g.cells(r, c) = 1;
                    }
                    row.push_back(std::move(g));
                    break;
                }
                }
            } else {
                row.push_back(Grid::dead(lv.rows, lv.cols, lv.boundary));
            }
        }
        if (k >= 1) {
            st.ever_live[static_cast<std::size_t>(k)].assign(
                static_cast<std::size_t>(lv.ca_count),
                CellArray::Zero(lv.rows, lv.cols));
        }
    }
    return st;
}

namespace {

struct CellRef {
    int ca;
    int row;
    int col;
};

// Macro cell mapped to CA (k, i): cell i%S of CA i/S at level k+1.
CellRef macro_cell(const HcaConfig& config, int level, int i) {
    const LevelConfig& up = config.levels[static_cast<std::size_t>(level + 1)];
    const int cells_per_ca = up.rows * up.cols;
    const int s = i % cells_per_ca;
    return {i / cells_per_ca, s / up.cols, s % up.cols};
}

void mark_ever_live(HcaState& st, int level) {
    auto& flags = st.ever_live[static_cast<std::size_t>(level)];
    const auto& grids = st.grids[static_cast<std::size_t>(level)];
    for (std::size_t i = 0; i < grids.size(); ++i) {
        flags[i] = flags[i].max(grids[i].cells);
    }
}

} // namespace

void run_cycle(HcaState& state, const HcaConfig& config) {
    const int m = config.level_count();
    const long n = state.cycle;

    for (int k = 0; k < m; ++k) {
        const LevelConfig& lv = config.levels[static_cast<std::size_t>(k)];
        if ((n + 1) % lv.frequency != 0) continue; // inactive: state frozen
        auto& grids = state.grids[static_cast<std::size_t>(k)];
        const bool top = (k == m - 1);

        if (k > 0) {
            // Pull abstractions: the level below already moved this cycle.
            const LevelConfig& below = config.levels[static_cast<std::size_t>(k - 1)];
            const auto& lower = state.grids[static_cast<std::size_t>(k - 1)];
            auto& flags = state.ever_live[static_cast<std::size_t>(k)];
            for (int i = 0; i < below.ca_count; ++i) {
                const CellRef cell = macro_cell(config, k - 1, i);
                const auto ca = static_cast<std::size_t>(cell.ca);
                const int as =
                    abstract_state(lower[static_cast<std::size_t>(i)], below.threshold);
                grids[ca].cells(cell.row, cell.col) = static_cast<std::uint8_t>(as);
                if (as) flags[ca](cell.row, cell.col) = 1;
            }
        }

        if (top) {
            for (auto& g : grids) {
                g = step_grid(g, lv.rules.expansive); // static top rule
            }
        } else {
            const auto& up_grids = state.grids[static_cast<std::size_t>(k + 1)];
            const auto& up_flags = state.ever_live[static_cast<std::size_t>(k + 1)];
            for (std::size_t i = 0; i < grids.size(); ++i) {
                // Goal from the macro cell; dead-from-start cells send grow
                // goals until they first switch on.
                const CellRef cell = macro_cell(config, k, static_cast<int>(i));
                const auto ca = static_cast<std::size_t>(cell.ca);
                int goal = 1;
                if (up_flags[ca](cell.row, cell.col)) {
                    goal = up_grids[ca].cells(cell.row, cell.col);
                }
                grids[i] = step_grid(grids[i], goal ? lv.rules.expansive
                                                    : lv.rules.regressive);
            }
        }
        if (k >= 1) mark_ever_live(state, k);
    }
    state.cycle = n + 1;
}

namespace {

long phase_modulus(const HcaConfig& config) {
    long l = 1;
    for (const auto& lv : config.levels) l = std::lcm(l, static_cast<long>(lv.frequency));
    return l;
}

std::string serialize(const HcaState& st, long phase) {
    std::string out;
    out.push_back(static_cast<char>(phase & 0xFF));
    out.push_back(static_cast<char>((phase >> 8) & 0xFF));
    for (const auto& level : st.grids) {
        for (const Grid& g : level) {
            out.append(reinterpret_cast<const char*>(g.cells.data()),
                       static_cast<std::size_t>(g.cells.size()));
        }
    }
    for (std::size_t k = 1; k < st.ever_live.size(); ++k) {
        for (const CellArray& f : st.ever_live[k]) {
            out.append(reinterpret_cast<const char*>(f.data()),
                       static_cast<std::size_t>(f.size()));
        }
    }
    return out;
}

std::uint64_t digest(const std::string& bytes) {
    std::uint64_t h = 0x9E3779B97F4A7C15ull;
    for (unsigned char c : bytes) h = mix64(h ^ c);
    return h;
}

// Minimal period of the cyclic grid sequence; divides the system period.
int minimal_period(const std::vector<Grid>& snaps) {
    const int p_sys = static_cast<int>(snaps.size());
    for (int p = 1; p <= p_sys; ++p) {
        if (p_sys % p != 0) continue;
        bool ok = true;
        for (int j = 0; ok && j < p_sys; ++j) {
            ok = snaps[static_cast<std::size_t>(j)] ==
                 snaps[static_cast<std::size_t>((j + p) % p_sys)];
        }
        if (ok) return p;
    }
    return p_sys;
}

CaBehavior analyze_ca(const std::vector<Grid>& snaps) {
    CaBehavior b;
    const int p = minimal_period(snaps);
    if (p == 1) {
        const int live = snaps.front().live_count();
        b.kind = live == 0 ? CaBehavior::Kind::Dead : CaBehavior::Kind::Stuck;
        b.live_cells = live;
        b.period = 1;
        b.cycle_live_counts = {live};
        return b;
    }
    b.kind = CaBehavior::Kind::Oscillating;
    b.period = p;
    for (int j = 0; j < p; ++j) {
        b.cycle_live_counts.push_back(snaps[static_cast<std::size_t>(j)].live_count());
    }
    std::sort(b.cycle_live_counts.begin(), b.cycle_live_counts.end());
    b.live_cells = b.cycle_live_counts.back();
    return b;
}

} // namespace

bool CaBehavior::same_as(const CaBehavior& other) const {
    if (kind != other.kind) return false;
    switch (kind) {
    case Kind::Dead: return true;
    case Kind::Stuck: return live_cells == other.live_cells;
    case Kind::Oscillating: return period == other.period;
    }
    return false;
}

std::string CaBehavior::label() const {
    switch (kind) {
    case Kind::Dead: return "S0";
    case Kind::Stuck: return "S" + std::to_string(live_cells);
    case Kind::Oscillating: return "O" + std::to_string(period);
    }
    return "?";
}

std::string MacroPattern::label() const {
    std::string s = corner.label() + "-" + border.label() + "-" + core.label();
    if (!homogeneous) s += " (heterogeneous)";
    return s;
}

ConvergenceReport run_to_convergence(const HcaConfig& config, long max_cycles) {
    if (max_cycles < 1) throw ConfigError("max_cycles must be >= 1");
    config.validate();

    const long modulus = phase_modulus(config);
    HcaState st = HcaState::initial(config);

    std::unordered_map<std::string, long> seen;
    std::vector<std::uint64_t> hash_log;
    long first = -1;

    for (long n = 0; n <= max_cycles; ++n) {
        std::string key = serialize(st, st.cycle % modulus);
        hash_log.push_back(digest(key));
        auto [it, inserted] = seen.emplace(std::move(key), n);
        if (!inserted) {
            first = it->second;
            break;
        }
        if (n == max_cycles) break;
        run_cycle(st, config);
    }
    if (first < 0) {
        throw NonConvergenceError("no repeated state within " +
                                      std::to_string(max_cycles) + " cycles",
                                  std::move(hash_log));
    }

    ConvergenceReport report;
    report.transient_cycles = first;
    const int p_sys = static_cast<int>(st.cycle - first);
    report.system_period = p_sys;

    // The current state equals the one first seen at `first`; replaying the
    // cycle from here collects each CA's state sequence.
    const int m = config.level_count();
    std::vector<std::vector<std::vector<Grid>>> snaps(
        static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
        snaps[static_cast<std::size_t>(k)].resize(
            static_cast<std::size_t>(config.levels[static_cast<std::size_t>(k)].ca_count));
    }
    for (int j = 0; j < p_sys; ++j) {
        for (int k = 0; k < m; ++k) {
            const auto& grids = st.grids[static_cast<std::size_t>(k)];
            for (std::size_t i = 0; i < grids.size(); ++i) {
                snaps[static_cast<std::size_t>(k)][i].push_back(grids[i]);
            }
        }
        run_cycle(st, config);
    }

    report.behavior.resize(static_cast<std::size_t>(m));
    report.level_period.assign(static_cast<std::size_t>(m), std::nullopt);
    for (int k = 0; k < m; ++k) {
        auto& row = report.behavior[static_cast<std::size_t>(k)];
        std::optional<int> level_p;
        for (const auto& ca_snaps : snaps[static_cast<std::size_t>(k)]) {
            CaBehavior b = analyze_ca(ca_snaps);
            if (b.kind == CaBehavior::Kind::Oscillating) {
                level_p = level_p ? std::lcm(*level_p, b.period) : b.period;
            }
            row.push_back(std::move(b));
        }
        report.level_period[static_cast<std::size_t>(k)] = level_p;
    }

    const bool has_control_grid =
        m >= 2 && config.levels[1].ca_count == 1 && config.levels[1].rows >= 2 &&
        config.levels[1].cols >= 2;
    if (has_control_grid) {
        report.macro = classify_macro_pattern(report, config);
    }
    return report;
}

MacroPattern classify_macro_pattern(const ConvergenceReport& report,
                                    const HcaConfig& config) {
    if (config.level_count() < 2 || config.levels[1].ca_count != 1) {
        throw std::invalid_argument(
            "macro patterns need a single control CA above the bottom level");
    }
    const int rows = config.levels[1].rows;
    const int cols = config.levels[1].cols;
    const auto& bottom = report.behavior[0];

    MacroPattern mp;
    bool corner_set = false, border_set = false, core_set = false;
    for (int i = 0; i < static_cast<int>(bottom.size()); ++i) {
        const int r = i / cols;
        const int c = i % cols;
        const bool edge_r = (r == 0 || r == rows - 1);
        const bool edge_c = (c == 0 || c == cols - 1);
        const CaBehavior& b = bottom[static_cast<std::size_t>(i)];
        auto assign = [&](CaBehavior& slot, bool& set) {
            if (!set) {
                slot = b;
                set = true;
            } else if (!slot.same_as(b)) {
                mp.homogeneous = false;
            }
        };
        if (edge_r && edge_c) {
            assign(mp.corner, corner_set);
        } else if (edge_r || edge_c) {
            assign(mp.border, border_set);
        } else {
            assign(mp.core, core_set);
        }
    }
    return mp;
}

PeriodPrediction predict_period(int fq0, int fq1, int fq2, int a, int b) {
    if (fq0 < 1 || fq1 < 1 || fq2 < 1) {
        throw ConfigError("activation frequencies must be >= 1");
    }
    const int l = std::lcm(std::lcm(fq0, fq1), fq2);
    PeriodPrediction p;
    p.common_p01 = a * fq1;
    p.exceptional_p01 = b * l;
    p.p01_uses_common = fq1 >= fq2;
    p.common_p2 = a * fq2;
    p.exceptional_p2 = b * l;
    p.p2_uses_common = fq2 >= fq1;
    return p;
}

bool period_law_satisfied(int fq0, int fq1, int fq2, int p01, int p2,
                          const std::vector<int>& multipliers) {
    const int l = std::lcm(std::lcm(fq0, fq1), fq2);
    auto fits = [&](bool common, int fq, int observed) {
        for (int k : multipliers) {
            if (common ? observed == k * fq : observed == k * l) return true;
        }
        return false;
    };
    return fits(fq1 >= fq2, fq1, p01) && fits(fq2 >= fq1, fq2, p2);
}

} // namespace msfs::hca
