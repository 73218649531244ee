#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "convpde/stepper.hpp"

namespace convpde {

enum class Regime { Dissipative, BlowUp, Inconclusive };

const char* regime_name(Regime r);

Regime classify_run(const RunOutcome& outcome);

struct RegimeCell {
    double p = 0.0, q = 0.0, amplitude = 0.0;
    Regime regime = Regime::Inconclusive;
    double t_detect_or_bound = 0.0;  // t_detect for blow-up, tail L2 bound otherwise
    std::size_t n_cells = 0;
    std::string note;
};

struct RegimeMap {
    std::vector<double> p_values, q_values, amplitude_values;
    std::vector<RegimeCell> cells;  // p-major, then q, then amplitude
};

/// One integrate call per (p, q, amplitude) cell, initial data
/// amplitude*sin(pi(x+1)/2) (times (1-x) for KdV). Cell failures are recorded
/// as Inconclusive; the sweep never aborts. jobs > 1 runs cells concurrently,
/// aggregation stays in axis order.
RegimeMap sweep(const EquationSpec& tmpl, const std::vector<double>& p_values,
                const std::vector<double>& q_values, const std::vector<double>& amplitude_values,
                const StepControls& controls, std::size_t n_cells, unsigned jobs = 1);

void write_regime_map_csv(std::ostream& os, const RegimeMap& map);

/// Least-squares slope of log(error) against log(h).
double fitted_order(const std::vector<double>& hs, const std::vector<double>& errors);

struct ConvergenceReport {
    ModelKind model = ModelKind::Burgers;
    Scheme scheme = Scheme::CNAB2;
    std::vector<std::size_t> resolutions;
    std::vector<double> errors;  // relative L2 vs the exact solution at t_max
    double order = 0.0;
    bool order_fit_skipped = false;  // errors at roundoff level
};

/// Spatial manufactured-solution study: runs each resolution with tight
/// tolerance so the O(h^2) spatial error dominates. Any blow-up is a hard
/// failure (throws).
ConvergenceReport convergence_study(EquationSpec spec, const MmsSolution& exact,
                                    const std::vector<std::size_t>& resolutions,
                                    StepControls controls);

struct TemporalConvergenceReport {
    Scheme scheme = Scheme::CNAB2;
    std::vector<double> dts;
    std::vector<double> errors;
    double order = 0.0;
};

/// Fixed-step temporal study at one spatial resolution; the spatial error
/// cancels against a reference run at the smallest dt / 4.
TemporalConvergenceReport temporal_convergence_study(EquationSpec spec, const MmsSolution& exact,
                                                     std::size_t n_cells,
                                                     const std::vector<double>& dts,
                                                     Scheme scheme, double t_end);

struct AbsorbingSetReport {
    std::vector<double> amplitudes;
    std::vector<double> tail_bounds;  // max L2 over the final quarter, per amplitude
    double spread = 0.0;              // (max-min)/max over tail_bounds
    double common_bound = 0.0;
    bool passed = false;
    std::string note;
};

/// Verifies the initial-data independence of the long-time L2 bound: passes
/// when the relative spread of tail bounds is <= 5% or all of them lie below
/// common_bound. Any blow-up fails the check.
AbsorbingSetReport absorbing_set_check(const EquationSpec& spec,
                                       const std::vector<double>& amplitudes, double t_end,
                                       StepControls controls, std::size_t n_cells,
                                       double common_bound = 10.0);

/// Seeded rough initial data: a band-limited sum of sine modes with random
/// coefficients (mt19937_64, amplitude ~ 1/k), evaluated analytically on the
/// run grid so every resolution sees the same underlying function.
/// BC-compatible by construction: the (1-x)/2 envelope vanishes at x = 1
/// together with the derivative term, and every mode vanishes at x = -1.
Field rough_initial_data(const Grid& grid, std::uint64_t seed, double amplitude,
                         std::size_t n_modes = 16);

}  // namespace convpde
