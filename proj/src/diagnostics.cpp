#include "convpde/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace convpde {

double ch_weight(double x) { return (1.0 - x * x) * (x * x * x * x - 14.0 * x * x + 61.0); }

double ch_weight_d2(double x) { return -30.0 * (1.0 - x * x) * (5.0 - x * x); }

double ch_weight_d4(double x) { return 360.0 * (1.0 - x * x); }

void validate_diagnostics(const DiagnosticsConfig& diag, ModelKind model) {
    if (!(diag.L_weight >= 0.0) || !std::isfinite(diag.L_weight)) {
        throw std::invalid_argument("diagnostics: L_weight must be finite and >= 0");
    }
    for (double s : diag.s_list) {
        if (!(s >= 1.0)) throw std::invalid_argument("diagnostics: every exponent s must be >= 1");
    }
    if (diag.moment.kind == MomentSpec::Kind::PowerWeight) {
        if (!(diag.moment.epsilon > 0.0 && diag.moment.epsilon <= 1.0)) {
            throw std::invalid_argument("diagnostics: PowerWeight epsilon must be in (0,1]");
        }
        if (diag.moment.n < 1) {
            throw std::invalid_argument("diagnostics: PowerWeight n must be positive");
        }
    }
    for (int k : diag.sobolev_orders) {
        if (k < 1 || k > 3) throw std::invalid_argument("diagnostics: Sobolev orders are 1..3");
        if (k == 3 && model != ModelKind::KdV) {
            throw std::invalid_argument("diagnostics: H3 needs the KdV boundary closure");
        }
    }
}

const std::vector<double>& NormSeries::column(const std::string& key) const {
    for (std::size_t k = 0; k < keys.size(); ++k) {
        if (keys[k] == key) return columns[k];
    }
    throw std::invalid_argument("NormSeries: no column named '" + key + "'");
}

bool NormSeries::has(const std::string& key) const {
    return std::find(keys.begin(), keys.end(), key) != keys.end();
}

double lebesgue_norm(const Field& u, double s) {
    if (!(s >= 1.0)) throw std::invalid_argument("lebesgue_norm: s must be >= 1");
    std::vector<double> v(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) v[i] = std::pow(std::abs(u.values[i]), s);
    return std::pow(quad_trapz(u.grid, v), 1.0 / s);
}

double weighted_norm(const Field& u, double s, double L, WeightSign sign) {
    if (!(s >= 1.0)) throw std::invalid_argument("weighted_norm: s must be >= 1");
    const double rate = (sign == WeightSign::Plus) ? -L : L;
    std::vector<double> v(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        v[i] = std::pow(std::abs(u.values[i]), s) * std::exp(rate * u.grid.nodes[i]);
    }
    return std::pow(quad_trapz(u.grid, v), 1.0 / s);
}

std::pair<double, double> split_weighted_norm(const Field& u, double s, double L) {
    Field up = u, um = u;
    for (std::size_t i = 0; i < u.size(); ++i) {
        up.values[i] = std::max(u.values[i], 0.0);
        um.values[i] = u.values[i] - up.values[i];
    }
    return {weighted_norm(up, s, L, WeightSign::Plus), weighted_norm(um, s, L, WeightSign::Minus)};
}

double moment(const Field& u, const MomentSpec& spec) {
    std::vector<double> v(u.size(), 0.0);
    switch (spec.kind) {
        case MomentSpec::Kind::None:
            throw std::invalid_argument("moment: no weight configured");
        case MomentSpec::Kind::PowerWeight: {
            if (!(spec.epsilon > 0.0 && spec.epsilon <= 1.0)) {
                throw std::invalid_argument("moment: PowerWeight epsilon must be in (0,1]");
            }
            const double e2 = spec.epsilon * spec.epsilon;
            for (std::size_t i = 0; i < u.size(); ++i) {
                const double x = u.grid.nodes[i];
                const double w = e2 - x * x;
                if (w > 0.0) v[i] = u.values[i] * std::pow(w, spec.n);
            }
            break;
        }
        case MomentSpec::Kind::ChWeight:
            for (std::size_t i = 0; i < u.size(); ++i) {
                v[i] = u.values[i] * ch_weight(u.grid.nodes[i]);
            }
            break;
    }
    return quad_trapz(u.grid, v);
}

int min_moment_order(MomentModel model, double p, double q) {
    if (!(q > 0.0)) throw std::invalid_argument("min_moment_order: q must be > 0");
    if (!(q > p)) {
        throw std::invalid_argument("min_moment_order: requires q > p (blow-up regime)");
    }
    int n = std::max(static_cast<int>(std::ceil((q + 1.0) / (q - p))),
                     static_cast<int>(std::ceil(2.0 * (q + 1.0) / q)));
    if (model == MomentModel::FourthOrder) {
        const double bound = 4.0 * (q + 1.0) / q;  // strict
        n = std::max(n, static_cast<int>(std::floor(bound)) + 1);
    }
    return n;
}

namespace {

// derivative norms need boundary values too; extrapolate them from the
// second-order-accurate interior entries
double seminorm_from_op(const BandedOperator& op, const Field& u) {
    Field d = apply_operator(op, u);
    const std::size_t n = d.size();
    d.values[0] = 3.0 * d.values[1] - 3.0 * d.values[2] + d.values[3];
    d.values[n - 1] = 3.0 * d.values[n - 2] - 3.0 * d.values[n - 3] + d.values[n - 4];
    return lebesgue_norm(d, 2.0);
}

}  // namespace

double sobolev_seminorm(const Field& u, int k, BcScheme bc) {
    const BandedOperator op = diff_operator(u.grid, k, bc);
    return seminorm_from_op(op, u);
}

std::vector<double> derivative_with_boundary(const Field& u) {
    const std::size_t n = u.size();
    const double h = u.grid.h;
    std::vector<double> d(n);
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (u.values[i + 1] - u.values[i - 1]) / (2.0 * h);
    d[0] = (-3.0 * u.values[0] + 4.0 * u.values[1] - u.values[2]) / (2.0 * h);
    d[n - 1] = (3.0 * u.values[n - 1] - 4.0 * u.values[n - 2] + u.values[n - 3]) / (2.0 * h);
    return d;
}

double kdv_energy(const Field& u, double p) {
    if (p < 0.0) throw std::invalid_argument("kdv_energy: p must be >= 0");
    const std::vector<double> ux = derivative_with_boundary(u);
    std::vector<double> density(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        density[i] = 0.5 * ux[i] * ux[i] +
                     std::pow(std::abs(u.values[i]), p + 2.0) / (p + 2.0);
    }
    return quad_trapz(u.grid, density);
}

namespace {

// second-order one-sided second derivatives at the endpoints
std::pair<double, double> boundary_second_derivatives(const Field& u) {
    const std::size_t n = u.size();
    const double h2 = u.grid.h * u.grid.h;
    const double left =
        (2.0 * u.values[0] - 5.0 * u.values[1] + 4.0 * u.values[2] - u.values[3]) / h2;
    const double right = (2.0 * u.values[n - 1] - 5.0 * u.values[n - 2] + 4.0 * u.values[n - 3] -
                          u.values[n - 4]) / h2;
    return {left, right};
}

// energy with the convection strength folded into the potential term
double flux_weighted_energy(const Field& u, double p, double a) {
    const std::vector<double> ux = derivative_with_boundary(u);
    std::vector<double> density(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        density[i] = 0.5 * ux[i] * ux[i] +
                     a * std::pow(std::abs(u.values[i]), p + 2.0) / (p + 2.0);
    }
    return quad_trapz(u.grid, density);
}

}  // namespace

std::vector<std::pair<double, double>> kdv_energy_flux_residual(
    const std::vector<std::pair<double, Field>>& trajectory, const EquationSpec& spec) {
    if (spec.model != ModelKind::KdV) {
        throw std::invalid_argument("kdv_energy_flux_residual: KdV trajectories only");
    }
    if (spec.f.kind != FSpec::Kind::Zero || spec.g.kind != GSpec::Kind::Zero) {
        throw std::invalid_argument("kdv_energy_flux_residual: requires f = 0 and g = 0");
    }
    if (trajectory.size() < 2) {
        throw std::invalid_argument("kdv_energy_flux_residual: needs at least 2 snapshots");
    }
    std::vector<std::pair<double, double>> out;
    out.reserve(trajectory.size() - 1);
    double e_prev = flux_weighted_energy(trajectory.front().second, spec.p, spec.a);
    auto b_prev = boundary_second_derivatives(trajectory.front().second);
    for (std::size_t k = 1; k < trajectory.size(); ++k) {
        const double dt = trajectory[k].first - trajectory[k - 1].first;
        if (!(dt > 0.0)) {
            throw std::invalid_argument("kdv_energy_flux_residual: non-increasing times");
        }
        const double e_next = flux_weighted_energy(trajectory[k].second, spec.p, spec.a);
        const auto b_next = boundary_second_derivatives(trajectory[k].second);
        const double left = 0.25 * (b_prev.first * b_prev.first + b_next.first * b_next.first);
        const double right = 0.25 * (b_prev.second * b_prev.second + b_next.second * b_next.second);
        const double r = (e_next - e_prev) / dt + left - right;
        out.emplace_back(0.5 * (trajectory[k].first + trajectory[k - 1].first), r);
        e_prev = e_next;
        b_prev = b_next;
    }
    return out;
}

FitReport fit_dissipative(const NormSeries& series, const std::string& key) {
    const std::vector<double>& v = series.column(key);
    if (v.size() < 10) throw std::invalid_argument("fit_dissipative: needs >= 10 samples");
    for (double x : v) {
        if (!std::isfinite(x)) {
            throw std::invalid_argument("fit_dissipative: series has non-finite values");
        }
    }
    // crude blow-up-tail guard: a dissipative series must not end far above its median
    std::vector<double> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted[sorted.size() / 2];
    if (v.back() > 1e6 * (median + 1.0)) {
        throw std::invalid_argument("fit_dissipative: series looks like a blow-up tail");
    }

    FitReport rep;
    const std::size_t tail_start = v.size() - std::max<std::size_t>(1, v.size() / 4);
    rep.asymptotic_bound = *std::max_element(v.begin() + static_cast<long>(tail_start), v.end());

    // transient: initial prefix while the excess over the bound stays above 1%
    // of its starting value
    const double floor = 0.99 * rep.asymptotic_bound;
    const double excess0 = v.front() - floor;
    std::vector<double> ts, logs;
    if (excess0 > 0.0) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double e = v[i] - floor;
            if (e <= 0.0 || e < 0.01 * excess0) break;
            ts.push_back(series.times[i]);
            logs.push_back(std::log(e));
        }
    }
    if (ts.size() >= 3) {
        const std::size_t m = ts.size();
        double st = 0, sy = 0, stt = 0, sty = 0;
        for (std::size_t i = 0; i < m; ++i) {
            st += ts[i];
            sy += logs[i];
            stt += ts[i] * ts[i];
            sty += ts[i] * logs[i];
        }
        const double denom = m * stt - st * st;
        if (denom > 0.0) {
            const double slope = (m * sty - st * sy) / denom;
            const double intercept = (sy - slope * st) / m;
            if (slope < 0.0) rep.decay_rate = -slope;
            double ss = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                const double r = logs[i] - (intercept + slope * ts[i]);
                ss += r * r;
            }
            rep.residual = std::sqrt(ss / m);
        }
    }
    return rep;
}

DiagnosticsRecorder::DiagnosticsRecorder(const EquationSpec& spec, const Grid& grid,
                                         const DiagnosticsConfig& diag)
    : spec_(spec), diag_(diag) {
    validate_diagnostics(diag, spec.model);
    keys_ = {"t", "L2", "Linf"};
    for (double s : diag_.s_list) {
        // integral exponents print without a trailing ".0"
        const double r = std::round(s);
        if (s == r) {
            keys_.push_back("Ls_" + std::to_string(static_cast<long long>(r)));
        } else {
            keys_.push_back("Ls_" + std::to_string(s));
        }
    }
    if (diag_.record_weighted) {
        keys_.push_back("WL2p");
        keys_.push_back("WL2m");
    }
    if (diag_.moment.kind == MomentSpec::Kind::PowerWeight) keys_.push_back("moment");
    if (diag_.moment.kind == MomentSpec::Kind::ChWeight) keys_.push_back("ch_moment");
    for (int k : diag_.sobolev_orders) {
        keys_.push_back("H" + std::to_string(k));
        sobolev_ops_.push_back(diff_operator(grid, k, spec.bc()));
    }
    if (diag_.record_kdv_energy) keys_.push_back("kdv_energy");
}

NormSeries DiagnosticsRecorder::make_series() const {
    NormSeries s;
    s.keys.assign(keys_.begin() + 1, keys_.end());  // "t" lives in times
    s.columns.resize(s.keys.size());
    return s;
}

void DiagnosticsRecorder::record(NormSeries& series, double t, const Field& u) const {
    series.times.push_back(t);
    std::size_t c = 0;
    auto push = [&](double v) { series.columns[c++].push_back(v); };
    push(lebesgue_norm(u, 2.0));
    push(sup_norm(u));
    for (double s : diag_.s_list) push(lebesgue_norm(u, s));
    if (diag_.record_weighted) {
        const auto [wp, wm] = split_weighted_norm(u, 2.0, diag_.L_weight);
        push(wp);
        push(wm);
    }
    if (diag_.moment.kind != MomentSpec::Kind::None) push(moment(u, diag_.moment));
    for (std::size_t k = 0; k < sobolev_ops_.size(); ++k) {
        push(seminorm_from_op(sobolev_ops_[k], u));
    }
    if (diag_.record_kdv_energy) push(kdv_energy(u, spec_.p));
}

}  // namespace convpde
