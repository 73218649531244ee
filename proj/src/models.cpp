#include "convpde/models.hpp"

#include <cmath>

namespace convpde {

const char* model_name(ModelKind m) {
    switch (m) {
        case ModelKind::Burgers: return "burgers";
        case ModelKind::KS: return "ks";
        case ModelKind::CH: return "ch";
        case ModelKind::KdV: return "kdv";
    }
    return "?";
}

std::optional<ModelKind> model_from_name(const std::string& name) {
    if (name == "burgers") return ModelKind::Burgers;
    if (name == "ks") return ModelKind::KS;
    if (name == "ch") return ModelKind::CH;
    if (name == "kdv") return ModelKind::KdV;
    return std::nullopt;
}

BcScheme model_bc(ModelKind m) {
    switch (m) {
        case ModelKind::Burgers: return BcScheme::DirichletPair;
        case ModelKind::KS:
        case ModelKind::CH: return BcScheme::SimplySupported;
        case ModelKind::KdV: return BcScheme::KdVMixed;
    }
    return BcScheme::DirichletPair;
}

namespace {

double abs_pow(double u, double e) {
    if (u == 0.0) return 0.0;
    return std::pow(std::abs(u), e);
}

}  // namespace

double flux(double u, double p, FluxForm form) {
    if (form == FluxForm::Signed) return u * abs_pow(u, p);
    return abs_pow(u, p + 1.0);
}

double flux_derivative(double u, double p, FluxForm form) {
    if (form == FluxForm::Signed) return (p + 1.0) * abs_pow(u, p);
    return (p + 1.0) * u * abs_pow(u, p - 1.0);
}

double nonlinearity_eval(const FSpec& f, double u) {
    switch (f.kind) {
        case FSpec::Kind::Zero: return 0.0;
        case FSpec::Kind::SignedPower: return f.coeff * u * abs_pow(u, f.q);
        case FSpec::Kind::AbsPower: return f.coeff * abs_pow(u, f.q + 1.0);
        case FSpec::Kind::QuadraticK: return f.coeff * u * u;
    }
    return 0.0;
}

double nonlinearity_derivative(const FSpec& f, double u) {
    switch (f.kind) {
        case FSpec::Kind::Zero: return 0.0;
        case FSpec::Kind::SignedPower: return f.coeff * (f.q + 1.0) * abs_pow(u, f.q);
        case FSpec::Kind::AbsPower: return f.coeff * (f.q + 1.0) * u * abs_pow(u, f.q - 1.0);
        case FSpec::Kind::QuadraticK: return 2.0 * f.coeff * u;
    }
    return 0.0;
}

double nonlinearity_second_derivative(const FSpec& f, double u) {
    const double sgn = (u > 0.0) ? 1.0 : (u < 0.0 ? -1.0 : 0.0);
    switch (f.kind) {
        case FSpec::Kind::Zero: return 0.0;
        case FSpec::Kind::SignedPower:
            return f.coeff * (f.q + 1.0) * f.q * abs_pow(u, f.q - 1.0) * sgn;
        case FSpec::Kind::AbsPower:
            return f.coeff * (f.q + 1.0) * f.q * abs_pow(u, f.q - 1.0);
        case FSpec::Kind::QuadraticK: return 2.0 * f.coeff;
    }
    return 0.0;
}

void validate_spec(const EquationSpec& spec) {
    if (!(spec.p > 0.0)) throw std::invalid_argument("spec: convective exponent p must be > 0");
    if (spec.a < 0.0) throw std::invalid_argument("spec: convection strength a must be >= 0");
    if (spec.model != ModelKind::KS && spec.lambda != 0.0) {
        throw std::invalid_argument("spec: lambda is meaningful only for the KS model");
    }
    if ((spec.f.kind == FSpec::Kind::SignedPower || spec.f.kind == FSpec::Kind::AbsPower) &&
        !(spec.f.q > 0.0)) {
        throw std::invalid_argument("spec: nonlinearity exponent q must be > 0");
    }
    if (spec.g.kind == GSpec::Kind::NodalSamples && spec.g.samples.empty()) {
        throw std::invalid_argument("spec: nodal forcing has no samples");
    }
}

namespace {

// A += beta * B, with B's band contained in A's
void band_axpy(BandedMatrix& a, double beta, const BandedMatrix& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        const std::size_t j0 = (i >= b.lower_bandwidth()) ? i - b.lower_bandwidth() : 0;
        const std::size_t j1 = std::min(i + b.upper_bandwidth(), a.size() - 1);
        for (std::size_t j = j0; j <= j1; ++j) {
            const double v = b.get(i, j);
            if (v != 0.0) a.at(i, j) += beta * v;
        }
    }
}

}  // namespace

BandedOperator linear_operator(const EquationSpec& spec, const Grid& grid) {
    validate_spec(spec);
    switch (spec.model) {
        case ModelKind::Burgers:
            return diff_operator(grid, 2, BcScheme::DirichletPair);
        case ModelKind::KS: {
            BandedOperator op = diff_operator(grid, 4, BcScheme::SimplySupported);
            op.matrix.shift_scale(0.0, -1.0);
            const BandedOperator d2 = diff_operator(grid, 2, BcScheme::SimplySupported);
            band_axpy(op.matrix, -spec.lambda, d2.matrix);
            return op;
        }
        case ModelKind::CH: {
            BandedOperator op = diff_operator(grid, 4, BcScheme::SimplySupported);
            op.matrix.shift_scale(0.0, -1.0);
            return op;
        }
        case ModelKind::KdV: {
            BandedOperator op = diff_operator(grid, 3, BcScheme::KdVMixed);
            op.matrix.shift_scale(0.0, -1.0);
            return op;
        }
    }
    throw std::logic_error("linear_operator: unreachable");
}

ModelOps make_model_ops(const EquationSpec& spec, const Grid& grid) {
    ModelOps ops{spec, linear_operator(spec, grid), diff_operator(grid, 1, spec.bc()),
                 diff_operator(grid, 2, spec.bc())};
    return ops;
}

Field nonlinear_rhs(const ModelOps& ops, const Field& u, double t) {
    const EquationSpec& spec = ops.spec;
    const Grid& grid = u.grid;
    const std::size_t n = grid.n_nodes();

    Field out = make_field(grid);

    // convective term, conservative form: differentiate the nodal flux
    if (spec.a != 0.0) {
        Field fx = make_field(grid);
        for (std::size_t i = 0; i < n; ++i) fx.values[i] = flux(u.values[i], spec.p, spec.flux_form);
        Field conv = apply_operator(ops.d1, fx);
        const double sign = (spec.model == ModelKind::KdV) ? 1.0 : -1.0;
        for (std::size_t i = 0; i < n; ++i) out.values[i] += sign * spec.a * conv.values[i];
    }

    if (spec.model == ModelKind::CH) {
        if (spec.f.kind != FSpec::Kind::Zero) {
            Field fu = make_field(grid);
            for (std::size_t i = 0; i < n; ++i) fu.values[i] = nonlinearity_eval(spec.f, u.values[i]);
            Field fxx = apply_operator(ops.d2, fu);
            for (std::size_t i = 1; i + 1 < n; ++i) out.values[i] -= fxx.values[i];
        }
    } else if (spec.f.kind != FSpec::Kind::Zero) {
        for (std::size_t i = 1; i + 1 < n; ++i) {
            out.values[i] += nonlinearity_eval(spec.f, u.values[i]);
        }
    }

    switch (spec.g.kind) {
        case GSpec::Kind::Zero: break;
        case GSpec::Kind::NodalSamples:
            if (spec.g.samples.size() != n) {
                throw std::invalid_argument("nonlinear_rhs: nodal forcing length mismatch");
            }
            for (std::size_t i = 1; i + 1 < n; ++i) out.values[i] += spec.g.samples[i];
            break;
        case GSpec::Kind::Analytic:
            for (std::size_t i = 1; i + 1 < n; ++i) out.values[i] += spec.g.expr(t, grid.nodes[i]);
            break;
    }

    out.values.front() = 0.0;
    out.values.back() = 0.0;
    if (!all_finite(out)) throw OverflowError("nonlinear_rhs: non-finite intermediate value");
    return out;
}

Field nonlinear_rhs(const EquationSpec& spec, const Grid& grid, const Field& u, double t) {
    return nonlinear_rhs(make_model_ops(spec, grid), u, t);
}

Field MmsSolution::sample(const Grid& grid, double t) const {
    const double amp = std::exp(-t);
    Field u = make_field(grid);
    for (std::size_t i = 0; i < grid.n_nodes(); ++i) u.values[i] = amp * s(grid.nodes[i]);
    return u;
}

MmsSolution mms_half_sine() {
    const double k = M_PI / 2.0;
    MmsSolution m;
    m.name = "half_sine";
    m.s = [k](double x) { return std::sin(k * (x + 1.0)); };
    m.s1 = [k](double x) { return k * std::cos(k * (x + 1.0)); };
    m.s2 = [k](double x) { return -k * k * std::sin(k * (x + 1.0)); };
    m.s3 = [k](double x) { return -k * k * k * std::cos(k * (x + 1.0)); };
    m.s4 = [k](double x) { return k * k * k * k * std::sin(k * (x + 1.0)); };
    return m;
}

MmsSolution mms_kdv_sine() {
    const double k = M_PI;
    MmsSolution m;
    m.name = "kdv_sine";
    m.s = [k](double x) { return std::sin(k * x) * (1.0 - x); };
    m.s1 = [k](double x) { return k * std::cos(k * x) * (1.0 - x) - std::sin(k * x); };
    m.s2 = [k](double x) { return -k * k * std::sin(k * x) * (1.0 - x) - 2.0 * k * std::cos(k * x); };
    m.s3 = [k](double x) {
        return -k * k * k * std::cos(k * x) * (1.0 - x) + 3.0 * k * k * std::sin(k * x);
    };
    m.s4 = [k](double x) {
        return k * k * k * k * std::sin(k * x) * (1.0 - x) + 4.0 * k * k * k * std::cos(k * x);
    };
    return m;
}

std::optional<MmsSolution> mms_by_name(const std::string& name) {
    if (name == "half_sine") return mms_half_sine();
    if (name == "kdv_sine") return mms_kdv_sine();
    return std::nullopt;
}

MmsSolution default_mms(ModelKind model) {
    return model == ModelKind::KdV ? mms_kdv_sine() : mms_half_sine();
}

GSpec mms_forcing(const EquationSpec& spec, const MmsSolution& exact) {
    validate_spec(spec);

    const double tol = 1e-9;
    if (std::abs(exact.s(-1.0)) > tol || std::abs(exact.s(1.0)) > tol) {
        throw std::invalid_argument("mms_forcing: exact solution violates u(+-1)=0");
    }
    if (spec.bc() == BcScheme::SimplySupported &&
        (std::abs(exact.s2(-1.0)) > tol || std::abs(exact.s2(1.0)) > tol)) {
        throw std::invalid_argument("mms_forcing: exact solution violates u_xx(+-1)=0");
    }
    if (spec.bc() == BcScheme::KdVMixed && std::abs(exact.s1(1.0)) > tol) {
        throw std::invalid_argument("mms_forcing: exact solution violates u_x(1)=0");
    }

    const ModelKind model = spec.model;
    const double p = spec.p, a = spec.a, lambda = spec.lambda;
    const FluxForm form = spec.flux_form;
    const FSpec f = spec.f;
    const MmsSolution m = exact;

    auto g = [=](double t, double x) {
        const double T = std::exp(-t);
        const double u = T * m.s(x);
        const double ut = -u;
        const double ux = T * m.s1(x);
        const double uxx = T * m.s2(x);
        const double uxxx = T * m.s3(x);
        const double uxxxx = T * m.s4(x);
        const double conv = a * flux_derivative(u, p, form) * ux;  // d/dx flux(u)
        switch (model) {
            case ModelKind::Burgers:
                return ut - uxx + conv - nonlinearity_eval(f, u);
            case ModelKind::KS:
                return ut + uxxxx + lambda * uxx + conv - nonlinearity_eval(f, u);
            case ModelKind::CH: {
                const double fu_xx = nonlinearity_second_derivative(f, u) * ux * ux +
                                     nonlinearity_derivative(f, u) * uxx;
                return ut + uxxxx + fu_xx + conv;
            }
            case ModelKind::KdV:
                return ut + uxxx - conv - nonlinearity_eval(f, u);
        }
        return 0.0;
    };
    return GSpec::analytic("mms:" + exact.name, g);
}

Field default_profile(ModelKind model, double amplitude, const Grid& grid) {
    const double k = M_PI / 2.0;
    return sample_field(grid, [&](double x) {
        double v = amplitude * std::sin(k * (x + 1.0));
        if (model == ModelKind::KdV) v *= (1.0 - x);
        return v;
    });
}

}  // namespace convpde
