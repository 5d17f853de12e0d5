#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <string>

namespace msfs::hca {

enum class Neighborhood { VonNeumann, Moore };
enum class Boundary { Bounded, Toroidal };

using CellArray = Eigen::Array<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

// Binary-state grid. Bounded grids treat outside cells as dead; toroidal
// grids wrap both axes.
struct Grid {
    CellArray cells; // rows x cols, values 0/1
    Boundary boundary = Boundary::Bounded;

    static Grid dead(int rows, int cols, Boundary b = Boundary::Bounded);

    int rows() const { return static_cast<int>(cells.rows()); }
    int cols() const { return static_cast<int>(cells.cols()); }
    int cell_count() const { return rows() * cols(); }
    int live_count() const;
    bool operator==(const Grid& other) const;
};

// Synchronous update rule: birth/survival predicates over the live-neighbor
// count (total, not fraction). Rules are total: defined for every count the
// neighborhood can produce.
struct Rule {
    Neighborhood neighborhood = Neighborhood::VonNeumann;
    std::array<bool, 9> birth{};   // dead cell becomes live
    std::array<bool, 9> survive{}; // live cell stays live

    static Rule birth_at_least(int k, Neighborhood n = Neighborhood::VonNeumann);
    static Rule death_below(int k, Neighborhood n = Neighborhood::VonNeumann);
};

struct RulePair {
    std::string name;
    Rule expansive;  // R_E: grows the live-cell count
    Rule regressive; // R_R: shrinks it
    bool inversible = false; // asserted by tests over the reachable chain
};

// One synchronous step; the input grid is left unmodified.
Grid step_grid(const Grid& grid, const Rule& rule);

// Abstract state: 1 iff the live fraction reaches the threshold.
int abstract_state(const Grid& grid, double threshold);

// Rule presets for the three-level benchmark systems.
RulePair diamond_rules(); // bounded; center-cell seed grows a diamond
RulePair line_rules();    // toroidal; center-row seed grows a rectangle
RulePair level1_rules();  // bounded 4x8 control grid, non-inversible pair
Rule inversion_rule();    // static top rule: flips every cell

// Initial patterns for bottom-level automata.
Grid center_cell_grid(int rows, int cols, Boundary b);
Grid center_row_grid(int rows, int cols, Boundary b);

} // namespace msfs::hca
