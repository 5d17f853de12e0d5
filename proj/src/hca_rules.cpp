#include "msfs/hca/rules.hpp"

#include <stdexcept>

namespace msfs::hca {

Grid Grid::dead(int rows, int cols, Boundary b) {
    if (rows < 1 || cols < 1) {
        throw std::invalid_argument("grid dimensions must be >= 1");
    }
    Grid g;
    g.cells = CellArray::Zero(rows, cols);
    g.boundary = b;
    return g;
}

int Grid::live_count() const {
    return static_cast<int>(cells.cast<int>().sum());
}

bool Grid::operator==(const Grid& other) const {
    return boundary == other.boundary && cells.rows() == other.cells.rows() &&
           cells.cols() == other.cells.cols() && (cells == other.cells).all();
}

Rule Rule::birth_at_least(int k, Neighborhood n) {
    Rule r;
    r.neighborhood = n;
    for (int c = 0; c < 9; ++c) {
        r.birth[static_cast<std::size_t>(c)] = c >= k;
        r.survive[static_cast<std::size_t>(c)] = true;
    }
    return r;
}

Rule Rule::death_below(int k, Neighborhood n) {
    Rule r;
    r.neighborhood = n;
    for (int c = 0; c < 9; ++c) {
        r.birth[static_cast<std::size_t>(c)] = false;
        r.survive[static_cast<std::size_t>(c)] = c >= k;
    }
    return r;
}

namespace {

constexpr int kVonNeumann[4][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
constexpr int kMoore[8][2] = {{-1, 0}, {1, 0},  {0, -1}, {0, 1},
                              {-1, -1}, {-1, 1}, {1, -1}, {1, 1}};

inline int wrap(int v, int n) { return v < 0 ? v + n : (v >= n ? v - n : v); }

} // namespace

Grid step_grid(const Grid& grid, const Rule& rule) {
    const int rows = grid.rows();
    const int cols = grid.cols();
    const bool moore = rule.neighborhood == Neighborhood::Moore;
    const int n_off = moore ? 8 : 4;
    const auto* offsets = moore ? kMoore : kVonNeumann;
    const bool toroidal = grid.boundary == Boundary::Toroidal;

    Grid next;
    next.boundary = grid.boundary;
    next.cells.resize(rows, cols);

    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            int live = 0;
            for (int o = 0; o < n_off; ++o) {
                int rr = r + offsets[o][0];
                int cc = c + offsets[o][1];
                if (toroidal) {
                    rr = wrap(rr, rows);
                    cc = wrap(cc, cols);
                } else if (rr < 0 || rr >= rows || cc < 0 || cc >= cols) {
                    continue;
                }
                live += grid.cells(rr, cc);
            }
            const auto n = static_cast<std::size_t>(live);
            next.cells(r, c) = grid.cells(r, c) ? rule.survive[n] : rule.birth[n];
        }
    }
    return next;
}

int abstract_state(const Grid& grid, double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw std::invalid_argument("abstraction threshold must lie in (0,1)");
    }
    const double fraction =
        static_cast<double>(grid.live_count()) / grid.cell_count();
    return fraction >= threshold ? 1 : 0;
}

RulePair diamond_rules() {
    RulePair p;
    p.name = "diamond";
    p.expansive = Rule::birth_at_least(1);
    p.regressive = Rule::death_below(3);
    p.inversible = true;
    return p;
}

RulePair line_rules() {
    RulePair p;
    p.name = "line";
    p.expansive = Rule::birth_at_least(1);
    p.regressive = Rule::death_below(4);
    p.inversible = true;
    return p;
}

RulePair level1_rules() {
    RulePair p;
    p.name = "level1";
    p.expansive = Rule::birth_at_least(1);
    p.regressive = Rule::death_below(4);
    p.inversible = false; // regression skips the Cross state
    return p;
}

Rule inversion_rule() {
    Rule r;
    for (int c = 0; c < 9; ++c) {
        r.birth[static_cast<std::size_t>(c)] = true;
        r.survive[static_cast<std::size_t>(c)] = false;
    }
    return r;
}

Grid center_cell_grid(int rows, int cols, Boundary b) {
    Grid g = Grid::dead(rows, cols, b);
    g.cells(rows / 2, cols / 2) = 1;
    return g;
}

Grid center_row_grid(int rows, int cols, Boundary b) {
    Grid g = Grid::dead(rows, cols, b);
    g.cells.row(rows / 2).setConstant(1);
    return g;
}

} // namespace msfs::hca
