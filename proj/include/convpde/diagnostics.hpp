#pragma once

#include <string>
#include <utility>
#include <vector>

#include "convpde/grid.hpp"
#include "convpde/models.hpp"
#include "convpde/operators.hpp"

namespace convpde {

/// Compactly supported polynomial weight for the moment functional.
struct MomentSpec {
    enum class Kind {
        None,
        PowerWeight,  // phi(x) = (eps^2 - x^2)^n on (-eps, eps), 0 outside
        ChWeight      // phi(x) = (1 - x^2)(x^4 - 14 x^2 + 61)
    };
    Kind kind = Kind::None;
    double epsilon = 1.0;
    int n = 2;

    static MomentSpec none() { return {}; }
    static MomentSpec power(double eps, int n) { return {Kind::PowerWeight, eps, n}; }
    static MomentSpec ch() { return {Kind::ChWeight, 1.0, 0}; }
};

double ch_weight(double x);
double ch_weight_d2(double x);
double ch_weight_d4(double x);

struct DiagnosticsConfig {
    double L_weight = 1.0;           // exponential weight rate
    bool record_weighted = false;    // WL2p / WL2m columns
    std::vector<double> s_list;      // extra Lebesgue exponents (Ls_<s> columns)
    MomentSpec moment;
    std::vector<int> sobolev_orders;  // subset of {1,2,3}
    bool record_kdv_energy = false;
};

void validate_diagnostics(const DiagnosticsConfig& diag, ModelKind model);

/// Aligned time series of recorded diagnostics; keys() match CSV headers.
struct NormSeries {
    std::vector<double> times;
    std::vector<std::string> keys;
    std::vector<std::vector<double>> columns;  // columns[k][i] aligned with times[i]

    const std::vector<double>& column(const std::string& key) const;
    bool has(const std::string& key) const;
};

/// Empirical analog of the estimate shape C*||u0||^2*exp(-alpha*t) + C(||g||^2+1).
struct FitReport {
    double decay_rate = 0.0;
    double asymptotic_bound = 0.0;
    double residual = 0.0;
};

double lebesgue_norm(const Field& u, double s);

enum class WeightSign { Plus, Minus };  // Plus: e^{-Lx}, Minus: e^{+Lx}

double weighted_norm(const Field& u, double s, double L, WeightSign sign);

/// (||u_+||_{L^s, e^{-Lx}}, ||u_-||_{L^s, e^{+Lx}}) with u_+ = max(u,0), u_- = u - u_+.
std::pair<double, double> split_weighted_norm(const Field& u, double s, double L);

double moment(const Field& u, const MomentSpec& spec);

enum class MomentModel { SecondOrder, FourthOrder };

/// Smallest admissible weight exponent n for the blow-up moment functional.
int min_moment_order(MomentModel model, double p, double q);

double sobolev_seminorm(const Field& u, int k, BcScheme bc);

/// Nodal first derivative: central in the interior, second-order one-sided at
/// the endpoints (unlike apply_operator, which zeroes the boundary entries).
std::vector<double> derivative_with_boundary(const Field& u);

/// Integral of 0.5|u_x|^2 + |u|^{p+2}/(p+2).
double kdv_energy(const Field& u, double p);

/// Per-interval defect of the integrated energy-flux identity
/// dE/dt + 0.5|u_xx(-1)|^2 - 0.5|u_xx(+1)|^2 = 0 along a KdV trajectory with
/// f = 0, g = 0. Returns (interval midpoint time, residual) pairs.
std::vector<std::pair<double, double>> kdv_energy_flux_residual(
    const std::vector<std::pair<double, Field>>& trajectory, const EquationSpec& spec);

FitReport fit_dissipative(const NormSeries& series, const std::string& key);

/// Evaluates the configured diagnostics for one state; diff operators are
/// built once at construction.
class DiagnosticsRecorder {
public:
    DiagnosticsRecorder(const EquationSpec& spec, const Grid& grid,
                        const DiagnosticsConfig& diag);

    const std::vector<std::string>& keys() const { return keys_; }
    NormSeries make_series() const;
    void record(NormSeries& series, double t, const Field& u) const;

private:
    EquationSpec spec_;
    DiagnosticsConfig diag_;
    std::vector<std::string> keys_;
    std::vector<BandedOperator> sobolev_ops_;  // aligned with diag_.sobolev_orders
};

}  // namespace convpde
