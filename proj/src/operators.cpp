#include "convpde/operators.hpp"

#include <stdexcept>
#include <string>

namespace convpde {

const char* bc_name(BcScheme bc) {
    switch (bc) {
        case BcScheme::DirichletPair: return "dirichlet_pair";
        case BcScheme::SimplySupported: return "simply_supported";
        case BcScheme::KdVMixed: return "kdv_mixed";
    }
    return "?";
}

namespace {

void check_compatible(int order, BcScheme bc) {
    if (order < 1 || order > 4) {
        throw std::invalid_argument("diff_operator: order must be in {1,2,3,4}");
    }
    if (order == 3 && bc != BcScheme::KdVMixed) {
        throw std::invalid_argument("diff_operator: order 3 requires the KdVMixed closure");
    }
    if (order == 4 && bc != BcScheme::SimplySupported) {
        throw std::invalid_argument("diff_operator: order 4 requires the SimplySupported closure");
    }
}

}  // namespace

BandedOperator diff_operator(const Grid& grid, int order, BcScheme bc) {
    check_compatible(order, bc);
    const std::size_t n = grid.n_nodes();
    const std::size_t last = grid.n_cells;  // index of node x = +1
    const double h = grid.h;
    const std::size_t bw = (order <= 2) ? 1 : 2;
    BandedOperator op{order, bc, grid, BandedMatrix(n, bw, bw)};
    BandedMatrix& m = op.matrix;

    switch (order) {
        case 1: {
            const double c = 1.0 / (2.0 * h);
            for (std::size_t i = 1; i < last; ++i) {
                m.at(i, i - 1) = -c;
                m.at(i, i + 1) = c;
            }
            break;
        }
        case 2: {
            const double c = 1.0 / (h * h);
            for (std::size_t i = 1; i < last; ++i) {
                m.at(i, i - 1) = c;
                m.at(i, i) = -2.0 * c;
                m.at(i, i + 1) = c;
            }
            break;
        }
        case 3: {
            const double c = 1.0 / (2.0 * h * h * h);
            for (std::size_t i = 2; i + 2 <= last; ++i) {
                m.at(i, i - 2) = -c;
                m.at(i, i - 1) = 2.0 * c;
                m.at(i, i + 1) = -2.0 * c;
                m.at(i, i + 2) = c;
            }
            // left end: only u(-1)=0 is available, use the 4-point one-sided
            // third difference (locally first order)
            m.at(1, 0) = -2.0 * c;
            m.at(1, 1) = 6.0 * c;
            m.at(1, 2) = -6.0 * c;
            m.at(1, 3) = 2.0 * c;
            // right end: u_x(1)=0 gives the ghost u_{N+1} = u_{N-1}
            m.at(last - 1, last - 3) = -c;
            m.at(last - 1, last - 2) = 2.0 * c;
            m.at(last - 1, last - 1) = c;
            m.at(last - 1, last) = -2.0 * c;
            break;
        }
        case 4: {
            const double c = 1.0 / (h * h * h * h);
            for (std::size_t i = 2; i + 2 <= last; ++i) {
                m.at(i, i - 2) = c;
                m.at(i, i - 1) = -4.0 * c;
                m.at(i, i) = 6.0 * c;
                m.at(i, i + 1) = -4.0 * c;
                m.at(i, i + 2) = c;
            }
            // u_xx(+-1)=0 eliminates the ghosts: u_{-1} = 2u_0 - u_1
            m.at(1, 0) = -2.0 * c;
            m.at(1, 1) = 5.0 * c;
            m.at(1, 2) = -4.0 * c;
            m.at(1, 3) = c;
            m.at(last - 1, last - 3) = c;
            m.at(last - 1, last - 2) = -4.0 * c;
            m.at(last - 1, last - 1) = 5.0 * c;
            m.at(last - 1, last) = -2.0 * c;
            break;
        }
    }
    return op;
}

Field apply_operator(const BandedOperator& op, const Field& u) {
    if (!(op.grid == u.grid)) {
        throw std::invalid_argument("apply_operator: grid mismatch");
    }
    Field out;
    out.grid = u.grid;
    out.values = op.matrix.matvec(u.values);
    out.values.front() = 0.0;
    out.values.back() = 0.0;
    return out;
}

BandedLU make_shifted_solver(const BandedOperator& op, double alpha, double beta) {
    BandedMatrix sys = op.matrix;
    sys.shift_scale(alpha, beta);
    const std::size_t last = op.grid.n_cells;
    sys.at(0, 0) = 1.0;
    sys.at(last, last) = 1.0;
    return BandedLU(sys);
}

Field solve_shifted(const BandedOperator& op, double alpha, double beta, const Field& rhs) {
    if (!(op.grid == rhs.grid)) {
        throw std::invalid_argument("solve_shifted: grid mismatch");
    }
    BandedLU lu = make_shifted_solver(op, alpha, beta);
    Field out;
    out.grid = rhs.grid;
    out.values = lu.solve(rhs.values);
    return out;
}

}  // namespace convpde
