#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "convpde/stepper.hpp"

using namespace convpde;

TEST_CASE("Cahn-Hilliard weight polynomial identities") {
    CHECK(ch_weight(1.0) == 0.0);
    CHECK(ch_weight(-1.0) == 0.0);
    CHECK(ch_weight(0.0) == doctest::Approx(61.0));
    CHECK(ch_weight_d2(0.0) == doctest::Approx(-150.0));
    CHECK(ch_weight_d4(0.0) == doctest::Approx(360.0));
    // phi = -x^6 + 15x^4 - 75x^2 + 61; derivatives of the expanded form
    const Grid g = make_grid(64);
    for (double x : g.nodes) {
        const double x2 = x * x;
        const double phi = -x2 * x2 * x2 + 15.0 * x2 * x2 - 75.0 * x2 + 61.0;
        const double phi2 = -30.0 * x2 * x2 + 180.0 * x2 - 150.0;
        const double phi4 = -360.0 * x2 + 360.0;
        CHECK(ch_weight(x) == doctest::Approx(phi).epsilon(1e-12));
        CHECK(ch_weight_d2(x) == doctest::Approx(phi2).epsilon(1e-12));
        CHECK(ch_weight_d4(x) == doctest::Approx(phi4).epsilon(1e-12));
    }
}

TEST_CASE("Lebesgue norms") {
    const Grid g = make_grid(256);
    CHECK(lebesgue_norm(make_field(g, 1.0), 2.0) == doctest::Approx(std::sqrt(2.0)));
    CHECK(lebesgue_norm(make_field(g), 2.0) == 0.0);
    const Field s = sample_field(g, [](double x) { return std::sin(M_PI * (x + 1.0) / 2.0); });
    CHECK(lebesgue_norm(s, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(lebesgue_norm(s, 0.5), std::invalid_argument);
}

TEST_CASE("weighted norms and the equivalence bounds") {
    const Grid g = make_grid(256);
    const Field one = make_field(g, 1.0);
    const double want = std::sqrt(std::exp(1.0) - std::exp(-1.0));
    CHECK(weighted_norm(one, 2.0, 1.0, WeightSign::Plus) == doctest::Approx(want).epsilon(1e-4));
    CHECK(weighted_norm(one, 2.0, 0.0, WeightSign::Plus) ==
          doctest::Approx(lebesgue_norm(one, 2.0)));

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uni(-2.0, 2.0);
    Field u = make_field(g);
    for (double& v : u.values) v = uni(rng);
    for (double L : {0.5, 1.0, 3.0}) {
        for (double s : {2.0, 4.0}) {
            const double w = weighted_norm(u, s, L, WeightSign::Plus);
            const double plain = lebesgue_norm(u, s);
            CHECK(w >= std::exp(-L / s) * plain * (1.0 - 1e-12));
            CHECK(w <= std::exp(L / s) * plain * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("split weighted norms") {
    const Grid g = make_grid(128);
    const Field lin = sample_field(g, [](double x) { return x; });
    const auto [p, m] = split_weighted_norm(lin, 2.0, 0.0);
    CHECK(p == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-3));
    CHECK(m == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-3));

    const Field pos = sample_field(g, [](double x) { return 1.0 + x * x; });
    CHECK(split_weighted_norm(pos, 2.0, 1.0).second == 0.0);

    // s-th powers of the split parts sum to the plain norm^s exactly at L=0
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Field u = make_field(g);
    for (double& v : u.values) v = uni(rng);
    const auto [a, b] = split_weighted_norm(u, 2.0, 0.0);
    const double plain = lebesgue_norm(u, 2.0);
    CHECK(a * a + b * b == doctest::Approx(plain * plain).epsilon(1e-12));
}

TEST_CASE("moment functionals") {
    const Grid g = make_grid(256);
    const Field one = make_field(g, 1.0);
    CHECK(moment(one, MomentSpec::power(1.0, 2)) == doctest::Approx(16.0 / 15.0).epsilon(1e-4));
    CHECK(moment(one, MomentSpec::ch()) == doctest::Approx(544.0 / 7.0).epsilon(1e-4));
    CHECK(moment(make_field(g), MomentSpec::ch()) == 0.0);
    CHECK_THROWS_AS(moment(one, MomentSpec::none()), std::invalid_argument);
    // support restriction: values outside (-eps, eps) do not contribute
    Field spike = make_field(g);
    spike.values[2] = 100.0;  // x close to -1
    CHECK(moment(spike, MomentSpec::power(0.5, 2)) == 0.0);
}

TEST_CASE("minimal moment weight exponent") {
    CHECK(min_moment_order(MomentModel::SecondOrder, 1.0, 2.0) == 3);
    CHECK(min_moment_order(MomentModel::FourthOrder, 1.0, 2.0) == 7);
    CHECK_THROWS_AS(min_moment_order(MomentModel::SecondOrder, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(min_moment_order(MomentModel::SecondOrder, 1.0, -1.0), std::invalid_argument);
}

TEST_CASE("Sobolev seminorms") {
    CHECK(sobolev_seminorm(make_field(make_grid(64)), 1, BcScheme::DirichletPair) == 0.0);
    std::vector<double> errs;
    for (std::size_t n : {std::size_t{128}, std::size_t{256}}) {
        const Grid g = make_grid(n);
        const Field u = sample_field(g, [](double x) { return std::sin(M_PI * (x + 1.0) / 2.0); });
        errs.push_back(std::abs(sobolev_seminorm(u, 1, BcScheme::DirichletPair) - M_PI / 2.0));
    }
    CHECK(errs[1] < std::abs(M_PI / 2.0) * 1e-3);
    CHECK(std::log2(errs[0] / errs[1]) >= 1.8);
}

TEST_CASE("KdV energy functional") {
    const Grid g = make_grid(256);
    CHECK(kdv_energy(make_field(g), 1.0) == 0.0);
    const Field u = sample_field(g, [](double x) { return std::sin(M_PI * x); });
    CHECK(kdv_energy(u, 0.0) ==
          doctest::Approx(M_PI * M_PI / 2.0 + 0.5).epsilon(1e-3));
    Field u2 = u;
    for (double& v : u2.values) v *= 2.0;
    CHECK(kdv_energy(u2, 0.0) == doctest::Approx(4.0 * kdv_energy(u, 0.0)).epsilon(1e-12));
    CHECK_THROWS_AS(kdv_energy(u, -1.0), std::invalid_argument);
}

TEST_CASE("energy flux residual preconditions") {
    const Grid g = make_grid(32);
    EquationSpec kdv;
    kdv.model = ModelKind::KdV;
    std::vector<std::pair<double, Field>> traj;
    traj.emplace_back(0.0, make_field(g));
    CHECK_THROWS_AS(kdv_energy_flux_residual(traj, kdv), std::invalid_argument);
    traj.emplace_back(0.1, make_field(g));
    for (const auto& [t, r] : kdv_energy_flux_residual(traj, kdv)) CHECK(r == 0.0);

    EquationSpec burgers;
    CHECK_THROWS_AS(kdv_energy_flux_residual(traj, burgers), std::invalid_argument);
    EquationSpec forced = kdv;
    forced.f = FSpec::quadratic(1.0);
    CHECK_THROWS_AS(kdv_energy_flux_residual(traj, forced), std::invalid_argument);
}

TEST_CASE("dissipative fit on synthetic series") {
    NormSeries s;
    s.keys = {"L2"};
    s.columns.resize(1);
    for (int i = 0; i < 40; ++i) {
        s.times.push_back(0.25 * i);
        s.columns[0].push_back(3.0);
    }
    const FitReport c = fit_dissipative(s, "L2");
    CHECK(c.asymptotic_bound == doctest::Approx(3.0));
    CHECK(c.decay_rate == 0.0);

    NormSeries e;
    e.keys = {"L2"};
    e.columns.resize(1);
    for (int i = 0; i < 80; ++i) {
        e.times.push_back(0.25 * i);
        e.columns[0].push_back(std::exp(-0.25 * i));
    }
    const FitReport f = fit_dissipative(e, "L2");
    CHECK(f.decay_rate == doctest::Approx(1.0).epsilon(0.05));

    NormSeries tiny;
    tiny.keys = {"L2"};
    tiny.columns.resize(1);
    tiny.times = {0.0, 1.0};
    tiny.columns[0] = {1.0, 0.5};
    CHECK_THROWS_AS(fit_dissipative(tiny, "L2"), std::invalid_argument);
    CHECK_THROWS_AS(fit_dissipative(e, "H7"), std::invalid_argument);
}

TEST_CASE("asymptotic bound is initial-amplitude independent for the heat flow") {
    const Grid g = make_grid(64);
    EquationSpec spec;
    spec.a = 0.0;
    StepControls c;
    c.t_max = 20.0;
    double bounds[2];
    int k = 0;
    for (double amp : {1.0, 10.0}) {
        const RunOutcome out = integrate(spec, default_profile(spec.model, amp, g), c, {});
        REQUIRE(out.kind == OutcomeKind::Completed);
        bounds[k++] = fit_dissipative(out.series, "L2").asymptotic_bound;
    }
    CHECK(bounds[0] < 1e-6);
    CHECK(bounds[1] < 1e-6);
}

TEST_CASE("diagnostics validation") {
    DiagnosticsConfig d;
    d.sobolev_orders = {3};
    CHECK_THROWS_AS(validate_diagnostics(d, ModelKind::Burgers), std::invalid_argument);
    CHECK_NOTHROW(validate_diagnostics(d, ModelKind::KdV));
    d = DiagnosticsConfig{};
    d.s_list = {0.5};
    CHECK_THROWS_AS(validate_diagnostics(d, ModelKind::Burgers), std::invalid_argument);
    d = DiagnosticsConfig{};
    d.L_weight = -1.0;
    CHECK_THROWS_AS(validate_diagnostics(d, ModelKind::Burgers), std::invalid_argument);
}

TEST_CASE("recorder produces the configured columns in order") {
    const Grid g = make_grid(64);
    EquationSpec spec;
    spec.model = ModelKind::KdV;
    DiagnosticsConfig d;
    d.record_weighted = true;
    d.s_list = {4.0};
    d.moment = MomentSpec::power(1.0, 2);
    d.sobolev_orders = {1, 3};
    d.record_kdv_energy = true;
    const DiagnosticsRecorder rec(spec, g, d);
    NormSeries s = rec.make_series();
    CHECK(s.keys == std::vector<std::string>{"L2", "Linf", "Ls_4", "WL2p", "WL2m", "moment", "H1",
                                             "H3", "kdv_energy"});
    rec.record(s, 0.0, default_profile(ModelKind::KdV, 1.0, g));
    for (const auto& col : s.columns) CHECK(col.size() == 1);
    CHECK(s.column("Linf")[0] > 0.0);
    CHECK_FALSE(s.has("H2"));
}
