#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "convpde/grid.hpp"
#include "convpde/operators.hpp"

namespace convpde {

/// Nonlinear evaluation produced NaN/Inf; callers treat this as a blow-up signal.
struct OverflowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ModelKind { Burgers, KS, CH, KdV };

const char* model_name(ModelKind m);
std::optional<ModelKind> model_from_name(const std::string& name);

BcScheme model_bc(ModelKind m);

enum class FluxForm {
    Signed,   // flux(u) = u|u|^p (odd)
    Unsigned  // flux(u) = |u|^{p+1} (even)
};

double flux(double u, double p, FluxForm form);
double flux_derivative(double u, double p, FluxForm form);

/// Destabilizing nonlinearity f with growth |f(u)| <= C(1+|u|^{q+1}).
struct FSpec {
    enum class Kind { Zero, SignedPower, AbsPower, QuadraticK };
    Kind kind = Kind::Zero;
    double coeff = 0.0;  // c for the power forms, k for QuadraticK
    double q = 1.0;

    static FSpec zero() { return {}; }
    static FSpec signed_power(double q, double c) { return {Kind::SignedPower, c, q}; }
    static FSpec abs_power(double q, double c) { return {Kind::AbsPower, c, q}; }
    static FSpec quadratic(double k) { return {Kind::QuadraticK, k, 1.0}; }
};

double nonlinearity_eval(const FSpec& f, double u);
double nonlinearity_derivative(const FSpec& f, double u);
double nonlinearity_second_derivative(const FSpec& f, double u);

/// External force g: zero, fixed nodal samples, or an analytic (t,x) expression
/// (the latter is what manufactured-solution runs use).
struct GSpec {
    enum class Kind { Zero, NodalSamples, Analytic };
    Kind kind = Kind::Zero;
    std::vector<double> samples;
    std::function<double(double, double)> expr;
    std::string expr_name;

    static GSpec zero() { return {}; }
    static GSpec nodal(std::vector<double> values) {
        GSpec g;
        g.kind = Kind::NodalSamples;
        g.samples = std::move(values);
        return g;
    }
    static GSpec analytic(std::string name, std::function<double(double, double)> fn) {
        GSpec g;
        g.kind = Kind::Analytic;
        g.expr = std::move(fn);
        g.expr_name = std::move(name);
        return g;
    }
};

/// One of the four semi-discrete systems du/dt = L u + N(u).
struct EquationSpec {
    ModelKind model = ModelKind::Burgers;
    double p = 1.0;       // convective exponent
    double a = 1.0;       // convection strength multiplier
    FluxForm flux_form = FluxForm::Signed;
    double lambda = 0.0;  // KS only
    FSpec f;
    GSpec g;

    BcScheme bc() const { return model_bc(model); }
};

void validate_spec(const EquationSpec& spec);

/// Full constant-coefficient derivative part L, sign convention du/dt = L u + N(u).
BandedOperator linear_operator(const EquationSpec& spec, const Grid& grid);

/// Prebuilt operators for repeated nonlinear evaluations along one trajectory.
struct ModelOps {
    EquationSpec spec;
    BandedOperator linear;
    BandedOperator d1;
    BandedOperator d2;  // only used by CH
};

ModelOps make_model_ops(const EquationSpec& spec, const Grid& grid);

/// Explicit part N(u) at time t; conservative form, flux sampled nodally then
/// differentiated. Throws OverflowError when intermediates are not finite.
Field nonlinear_rhs(const ModelOps& ops, const Field& u, double t);
Field nonlinear_rhs(const EquationSpec& spec, const Grid& grid, const Field& u, double t);

/// Separable exact solution u_e(t,x) = exp(-t) * s(x) for manufactured-solution
/// studies; s and its first four derivatives are analytic.
struct MmsSolution {
    std::string name;
    std::function<double(double)> s, s1, s2, s3, s4;

    double value(double t, double x) const { return std::exp(-t) * s(x); }
    Field sample(const Grid& grid, double t) const;
};

/// s(x) = sin(pi(x+1)/2); satisfies DirichletPair and SimplySupported.
MmsSolution mms_half_sine();
/// s(x) = sin(pi x)(1-x); satisfies the KdVMixed conditions.
MmsSolution mms_kdv_sine();

std::optional<MmsSolution> mms_by_name(const std::string& name);

/// Returns the built-in MMS profile compatible with the model's BCs.
MmsSolution default_mms(ModelKind model);

/// Forcing g(t,x) = du_e/dt - L u_e - N0(u_e), evaluated analytically, so that
/// u_e solves the equation up to the O(h^2) discretization error.
GSpec mms_forcing(const EquationSpec& spec, const MmsSolution& exact);

/// Default initial profile amplitude*sin(pi(x+1)/2), multiplied by (1-x) for
/// KdV so that u_x(1)=0 holds at the continuous level.
Field default_profile(ModelKind model, double amplitude, const Grid& grid);

}  // namespace convpde
