#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "convpde/experiments.hpp"

namespace convpde {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Everything that determines a run: equation, grid, controls, diagnostics,
/// initial data, and the sweep/converge axes. Flat `key: value` document with
/// dotted sections; unknown keys are rejected.
struct RunConfig {
    // equation
    std::string model = "burgers";
    double p = 1.0;
    double q = 1.0;
    double a = 1.0;
    double lambda = 0.0;
    std::string flux = "signed";  // signed | unsigned
    std::string f = "zero";       // zero | signed_power | abs_power | quadratic
    double f_coeff = 1.0;

    // grid / stepping
    std::size_t n_cells = 256;
    std::string scheme = "cnab2";  // cnab2 | euler1
    double dt_init = 1e-4;
    double dt_min = 1e-12;
    double dt_max = 0.05;
    double tol = 1e-6;
    double safety = 0.9;
    double t_max = 20.0;
    double blowup_threshold = 1e8;
    double record_every = 0.1;

    // diagnostics
    double L_weight = -1.0;  // < 0: auto (k+1 for Burgers quadratic runs, else 1)
    bool weighted = false;
    std::vector<double> s_list;
    std::string moment = "none";  // none | power | ch
    double moment_eps = 1.0;
    int moment_n = 0;  // 0: auto via min_moment_order when q > p, else 2
    std::vector<int> sobolev;
    bool kdv_energy = false;
    bool record_fields = false;

    // initial data
    std::string profile = "sine";  // sine | rough | file
    double amplitude = 1.0;
    std::uint64_t seed = 1;
    std::string init_file;

    // sweep axes
    std::vector<double> sweep_p{1.0};
    std::vector<double> sweep_q{1.0};
    std::vector<double> sweep_amplitudes{1.0};

    // convergence study
    std::vector<std::size_t> resolutions{64, 128, 256};
    double converge_t_end = 0.5;
    std::string mms = "auto";  // auto | half_sine | kdv_sine

    // not part of the round-trip contract
    std::vector<std::string> warnings;

    bool operator==(const RunConfig& other) const;
};

RunConfig parse_config(const std::string& text);
std::string serialize_config(const RunConfig& cfg);

EquationSpec to_equation_spec(const RunConfig& cfg);
StepControls to_step_controls(const RunConfig& cfg);
DiagnosticsConfig to_diagnostics(const RunConfig& cfg);
Field make_initial_data(const RunConfig& cfg, const Grid& grid);

}  // namespace convpde
