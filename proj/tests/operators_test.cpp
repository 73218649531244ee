#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "convpde/models.hpp"
#include "convpde/operators.hpp"

using namespace convpde;

namespace {

// cyclic Jacobi eigensolver for small symmetric matrices (test oracle only)
std::vector<double> symmetric_eigenvalues(std::vector<std::vector<double>> a) {
    const std::size_t n = a.size();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
        }
        if (off < 1e-24) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) < 1e-30) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
    return ev;
}

std::vector<std::vector<double>> interior_dense(const BandedOperator& op) {
    const auto full = op.matrix.to_dense();
    const std::size_t n = op.grid.n_nodes();
    std::vector<std::vector<double>> d(n - 2, std::vector<double>(n - 2));
    for (std::size_t i = 1; i + 1 < n; ++i) {
        for (std::size_t j = 1; j + 1 < n; ++j) d[i - 1][j - 1] = full[i][j];
    }
    return d;
}

double max_interior_error(const Field& got, const std::vector<double>& want, std::size_t margin) {
    double e = 0.0;
    for (std::size_t i = margin; i + margin < got.size(); ++i) {
        e = std::max(e, std::abs(got.values[i] - want[i]));
    }
    return e;
}

}  // namespace

TEST_CASE("polynomial exactness of the central stencils") {
    const Grid g = make_grid(16);

    const Field x2 = sample_field(g, [](double x) { return x * x; });
    const BandedOperator d2 = diff_operator(g, 2, BcScheme::DirichletPair);
    const Field d2x2 = apply_operator(d2, x2);
    for (std::size_t i = 1; i < g.n_cells; ++i) {
        CHECK(d2x2.values[i] == doctest::Approx(2.0).epsilon(1e-10));
    }

    const BandedOperator d1 = diff_operator(g, 1, BcScheme::DirichletPair);
    const Field d1x2 = apply_operator(d1, x2);
    // x = 0.5 is node 12 on this mesh
    CHECK(g.nodes[12] == doctest::Approx(0.5));
    CHECK(d1x2.values[12] == doctest::Approx(1.0).epsilon(1e-12));

    const Field x4 = sample_field(g, [](double x) { return x * x * x * x; });
    const BandedOperator d4 = diff_operator(g, 4, BcScheme::SimplySupported);
    const Field d4x4 = apply_operator(d4, x4);
    for (std::size_t i = 2; i + 2 <= g.n_cells; ++i) {
        CHECK(d4x4.values[i] == doctest::Approx(24.0).epsilon(1e-8));
    }
}

TEST_CASE("zero field maps to zero") {
    const Grid g = make_grid(16);
    for (auto [order, bc] : {std::pair{1, BcScheme::DirichletPair},
                             {2, BcScheme::DirichletPair},
                             {3, BcScheme::KdVMixed},
                             {4, BcScheme::SimplySupported}}) {
        const Field z = make_field(g);
        const Field out = apply_operator(diff_operator(g, order, bc), z);
        CHECK(sup_norm(out) == 0.0);
    }
}

TEST_CASE("incompatible order and closure combinations") {
    const Grid g = make_grid(16);
    CHECK_THROWS_AS(diff_operator(g, 3, BcScheme::DirichletPair), std::invalid_argument);
    CHECK_THROWS_AS(diff_operator(g, 4, BcScheme::DirichletPair), std::invalid_argument);
    CHECK_THROWS_AS(diff_operator(g, 5, BcScheme::DirichletPair), std::invalid_argument);
    CHECK_THROWS_AS(diff_operator(g, 0, BcScheme::DirichletPair), std::invalid_argument);
}

TEST_CASE("grid mismatch rejected") {
    const Grid g = make_grid(16);
    const BandedOperator d2 = diff_operator(g, 2, BcScheme::DirichletPair);
    const Field u = make_field(make_grid(32));
    CHECK_THROWS_AS(apply_operator(d2, u), std::invalid_argument);
}

TEST_CASE("discrete eigenpair of the second difference") {
    const Grid g = make_grid(16);
    const BandedOperator d2 = diff_operator(g, 2, BcScheme::DirichletPair);
    const Field u = sample_field(g, [](double x) { return std::sin(M_PI * (x + 1.0) / 2.0); });
    const Field got = apply_operator(d2, u);
    const double mu = 4.0 / (g.h * g.h) * std::pow(std::sin(M_PI * g.h / 4.0), 2);
    for (std::size_t i = 1; i < g.n_cells; ++i) {
        CHECK(got.values[i] == doctest::Approx(-mu * u.values[i]).epsilon(1e-12));
    }
    // the eigenvalue itself appears in the interior spectrum
    const auto ev = symmetric_eigenvalues(interior_dense(d2));
    double closest = 1e300;
    for (double l : ev) closest = std::min(closest, std::abs(l + mu));
    CHECK(closest < 1e-8);
}

TEST_CASE("negative second difference is symmetric positive definite") {
    const Grid g = make_grid(32);
    const BandedOperator d2 = diff_operator(g, 2, BcScheme::DirichletPair);
    const auto a = interior_dense(d2);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a.size(); ++j) {
            CHECK(a[i][j] == doctest::Approx(a[j][i]));
        }
    }
    const auto ev = symmetric_eigenvalues(a);
    for (double l : ev) CHECK(-l > 0.0);
}

TEST_CASE("refinement order of all four operators") {
    struct Case {
        int order;
        BcScheme bc;
        MmsSolution mms;
    };
    for (const Case& cs : {Case{1, BcScheme::DirichletPair, mms_half_sine()},
                           Case{2, BcScheme::DirichletPair, mms_half_sine()},
                           Case{3, BcScheme::KdVMixed, mms_kdv_sine()},
                           Case{4, BcScheme::SimplySupported, mms_half_sine()}}) {
        std::vector<double> errs;
        for (std::size_t n : {std::size_t{128}, std::size_t{256}}) {
            const Grid g = make_grid(n);
            const Field u = sample_field(g, cs.mms.s);
            const Field got = apply_operator(diff_operator(g, cs.order, cs.bc), u);
            std::vector<double> want(g.n_nodes());
            for (std::size_t i = 0; i < g.n_nodes(); ++i) {
                const double x = g.nodes[i];
                want[i] = (cs.order == 1)   ? cs.mms.s1(x)
                          : (cs.order == 2) ? cs.mms.s2(x)
                          : (cs.order == 3) ? cs.mms.s3(x)
                                            : cs.mms.s4(x);
            }
            errs.push_back(max_interior_error(got, want, 2));
        }
        const double fitted = std::log2(errs[0] / errs[1]);
        INFO("order ", cs.order);
        CHECK(fitted >= 1.8);
    }
}

TEST_CASE("order-2 refinement on sin(pi x) is close to exactly second order") {
    std::vector<double> errs;
    for (std::size_t n : {std::size_t{128}, std::size_t{256}}) {
        const Grid g = make_grid(n);
        const Field u = sample_field(g, [](double x) { return std::sin(M_PI * x); });
        const Field got = apply_operator(diff_operator(g, 2, BcScheme::DirichletPair), u);
        std::vector<double> want(g.n_nodes());
        for (std::size_t i = 0; i < g.n_nodes(); ++i) {
            want[i] = -M_PI * M_PI * std::sin(M_PI * g.nodes[i]);
        }
        errs.push_back(max_interior_error(got, want, 1));
    }
    CHECK(std::log2(errs[0] / errs[1]) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("third difference is dissipative under the mixed closure") {
    const Grid g = make_grid(128);
    const MmsSolution mms = mms_kdv_sine();
    const Field u = sample_field(g, mms.s);
    const Field d3u = apply_operator(diff_operator(g, 3, BcScheme::KdVMixed), u);
    std::vector<double> prod(g.n_nodes());
    for (std::size_t i = 0; i < g.n_nodes(); ++i) prod[i] = d3u.values[i] * u.values[i];
    const double got = quad_trapz(g, prod);
    // continuous identity: (u''', u) = 0.5 u'(-1)^2 when u'(1) = 0
    const double sx = mms.s1(-1.0);
    CHECK(got > 0.0);
    CHECK(got == doctest::Approx(0.5 * sx * sx).epsilon(0.1));
}

TEST_CASE("shifted solve: identity and exact discrete Poisson solution") {
    const Grid g = make_grid(16);
    const BandedOperator d2 = diff_operator(g, 2, BcScheme::DirichletPair);

    const Field rhs = sample_field(g, [](double x) { return std::cos(3.0 * x); });
    const Field same = solve_shifted(d2, 1.0, 0.0, rhs);
    for (std::size_t i = 0; i < rhs.size(); ++i) {
        CHECK(same.values[i] == doctest::Approx(rhs.values[i]).epsilon(1e-13));
    }

    Field neg2 = make_field(g, -2.0);
    neg2.values.front() = 0.0;
    neg2.values.back() = 0.0;
    const Field sol = solve_shifted(d2, 0.0, 1.0, neg2);
    for (std::size_t i = 0; i < sol.size(); ++i) {
        const double x = g.nodes[i];
        CHECK(sol.values[i] == doctest::Approx(1.0 - x * x).epsilon(1e-10));
    }
}

TEST_CASE("shifted solve residual with the order-4 operator") {
    const Grid g = make_grid(64);
    const BandedOperator d4 = diff_operator(g, 4, BcScheme::SimplySupported);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Field rhs = make_field(g);
    for (std::size_t i = 1; i < g.n_cells; ++i) rhs.values[i] = uni(rng);

    const double alpha = 1.0, beta = 0.01;
    const Field x = solve_shifted(d4, alpha, beta, rhs);
    const Field lx = apply_operator(d4, x);
    double rnorm = 0.0, bnorm = 0.0;
    for (std::size_t i = 1; i < g.n_cells; ++i) {
        const double r = alpha * x.values[i] + beta * lx.values[i] - rhs.values[i];
        rnorm += r * r;
        bnorm += rhs.values[i] * rhs.values[i];
    }
    CHECK(std::sqrt(rnorm) <= 1e-10 * (std::sqrt(bnorm) + 1.0));
    CHECK(x.values.front() == doctest::Approx(rhs.values.front()).epsilon(1e-10));
    CHECK(x.values.back() == doctest::Approx(rhs.values.back()).epsilon(1e-10));
}
