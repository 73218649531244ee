#pragma once

#include <cstddef>
#include <vector>

namespace convpde {

/// Uniform mesh on (-1,1): nodes x_i = -1 + i*h, i = 0..n_cells.
struct Grid {
    std::size_t n_cells = 0;
    double h = 0.0;
    std::vector<double> nodes;

    std::size_t n_nodes() const { return n_cells + 1; }
    bool operator==(const Grid& other) const { return n_cells == other.n_cells; }
};

/// Nodal solution values at one time instant, boundary nodes included.
struct Field {
    Grid grid;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
};

Grid make_grid(std::size_t n_cells);

Field make_field(const Grid& grid, double fill = 0.0);

/// Samples fn(x) at every node.
template <typename Fn>
Field sample_field(const Grid& grid, Fn&& fn) {
    Field u = make_field(grid);
    for (std::size_t i = 0; i < grid.n_nodes(); ++i) u.values[i] = fn(grid.nodes[i]);
    return u;
}

bool all_finite(const Field& u);

double sup_norm(const Field& u);

/// Composite trapezoid rule over the full grid.
double quad_trapz(const Grid& grid, const std::vector<double>& values);

}  // namespace convpde
