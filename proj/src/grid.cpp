#include "convpde/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace convpde {

Grid make_grid(std::size_t n_cells) {
    if (n_cells < 8) {
        throw std::invalid_argument("make_grid: n_cells must be at least 8, got " +
                                    std::to_string(n_cells));
    }
    Grid g;
    g.n_cells = n_cells;
    g.h = 2.0 / static_cast<double>(n_cells);
    g.nodes.resize(n_cells + 1);
    for (std::size_t i = 0; i <= n_cells; ++i) {
        g.nodes[i] = -1.0 + static_cast<double>(i) * g.h;
    }
    g.nodes.front() = -1.0;
    g.nodes.back() = 1.0;
    return g;
}

Field make_field(const Grid& grid, double fill) {
    Field u;
    u.grid = grid;
    u.values.assign(grid.n_nodes(), fill);
    return u;
}

bool all_finite(const Field& u) {
    for (double v : u.values) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

double sup_norm(const Field& u) {
    double m = 0.0;
    for (double v : u.values) m = std::max(m, std::abs(v));
    return m;
}

double quad_trapz(const Grid& grid, const std::vector<double>& values) {
    if (values.size() != grid.n_nodes()) {
        throw std::invalid_argument("quad_trapz: length mismatch with grid");
    }
    double sum = 0.5 * (values.front() + values.back());
    for (std::size_t i = 1; i + 1 < values.size(); ++i) sum += values[i];
    return sum * grid.h;
}

}  // namespace convpde
