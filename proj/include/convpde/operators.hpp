#pragma once

#include <cstddef>

#include "convpde/banded.hpp"
#include "convpde/grid.hpp"

namespace convpde {

/// Boundary-condition closure applied when eliminating ghost nodes.
enum class BcScheme {
    DirichletPair,    // u(+-1) = 0
    SimplySupported,  // u(+-1) = 0 and u_xx(+-1) = 0
    KdVMixed,         // u(-1) = u(1) = 0 and u_x(1) = 0
};

const char* bc_name(BcScheme bc);

/// Second-order finite-difference derivative of one order, with the boundary
/// closures folded into the rows nearest the endpoints. Rows 0 and n_cells are
/// zero; apply() leaves boundary entries of the result at 0 by convention.
struct BandedOperator {
    int order = 0;
    BcScheme bc = BcScheme::DirichletPair;
    Grid grid;
    BandedMatrix matrix;  // (n_nodes x n_nodes), boundary rows zero
};

/// Builds the discrete d^order/dx^order. Orders 1 and 2 accept any closure
/// (all schemes pin u(+-1) = 0); order 3 requires KdVMixed, order 4 requires
/// SimplySupported.
BandedOperator diff_operator(const Grid& grid, int order, BcScheme bc);

Field apply_operator(const BandedOperator& op, const Field& u);

/// Factorization of (alpha*I + beta*op) with identity rows at both boundary
/// nodes, so solutions carry the boundary values of the right-hand side.
BandedLU make_shifted_solver(const BandedOperator& op, double alpha, double beta);

Field solve_shifted(const BandedOperator& op, double alpha, double beta, const Field& rhs);

}  // namespace convpde
