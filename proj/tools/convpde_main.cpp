#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "convpde/acceptance.hpp"
#include "convpde/config.hpp"
#include "convpde/io.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw convpde::ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    return out;
}

struct CommonFlags {
    std::string config_path;
    std::string out_dir = ".";
    unsigned jobs = 1;
    long n_cells = 0;   // 0: keep the config value
    double t_max = -1;  // < 0: keep the config value
};

convpde::RunConfig load_config(const CommonFlags& flags) {
    convpde::RunConfig cfg = convpde::parse_config(read_file(flags.config_path));
    if (flags.n_cells > 0) cfg.n_cells = static_cast<std::size_t>(flags.n_cells);
    if (flags.t_max >= 0) cfg.t_max = flags.t_max;
    for (const std::string& w : cfg.warnings) std::cerr << "warning: " << w << '\n';
    return cfg;
}

int cmd_run(const CommonFlags& flags) {
    const convpde::RunConfig cfg = load_config(flags);
    const convpde::EquationSpec spec = convpde::to_equation_spec(cfg);
    const convpde::StepControls controls = convpde::to_step_controls(cfg);
    const convpde::DiagnosticsConfig diag = convpde::to_diagnostics(cfg);
    const convpde::Grid grid = convpde::make_grid(cfg.n_cells);
    const convpde::Field u0 = convpde::make_initial_data(cfg, grid);

    convpde::IntegrateOptions opts;
    opts.record_fields = cfg.record_fields;
    const convpde::RunOutcome out = convpde::integrate(spec, u0, controls, diag, opts);

    fs::create_directories(flags.out_dir);
    {
        std::ofstream csv = open_out(fs::path(flags.out_dir) / "series.csv");
        convpde::io::write_series_csv(csv, out.series);
    }

    json summary;
    summary["outcome"] = convpde::outcome_name(out.kind);
    summary["t_final"] = out.t_final;
    if (out.kind == convpde::OutcomeKind::BlowUp) {
        summary["t_detect"] = out.t_detect;
        summary["reason"] = convpde::blowup_reason_name(out.reason);
        if (out.t_estimate) summary["t_estimate"] = *out.t_estimate;
    }
    if (!out.note.empty()) summary["note"] = out.note;
    if (out.kind == convpde::OutcomeKind::Completed) {
        try {
            const convpde::FitReport fit = convpde::fit_dissipative(out.series, "L2");
            summary["fit"] = {{"decay_rate", fit.decay_rate},
                              {"asymptotic_bound", fit.asymptotic_bound},
                              {"residual", fit.residual}};
        } catch (const std::exception& e) {
            summary["fit_note"] = e.what();
        }
    }
    if (!cfg.warnings.empty()) summary["warnings"] = cfg.warnings;
    open_out(fs::path(flags.out_dir) / "summary.json") << summary.dump(2) << '\n';

    std::cout << "outcome: " << convpde::outcome_name(out.kind) << " at t = "
              << convpde::io::fmt17(out.t_final) << '\n';
    return 0;
}

int cmd_sweep(const CommonFlags& flags) {
    const convpde::RunConfig cfg = load_config(flags);
    const convpde::EquationSpec tmpl = convpde::to_equation_spec(cfg);
    const convpde::StepControls controls = convpde::to_step_controls(cfg);
    const convpde::RegimeMap map =
        convpde::sweep(tmpl, cfg.sweep_p, cfg.sweep_q, cfg.sweep_amplitudes, controls,
                       cfg.n_cells, flags.jobs);
    fs::create_directories(flags.out_dir);
    std::ofstream csv = open_out(fs::path(flags.out_dir) / "regime_map.csv");
    convpde::write_regime_map_csv(csv, map);
    std::cout << map.cells.size() << " cells written\n";
    return 0;
}

int cmd_converge(const CommonFlags& flags) {
    const convpde::RunConfig cfg = load_config(flags);
    convpde::EquationSpec spec = convpde::to_equation_spec(cfg);
    convpde::StepControls controls = convpde::to_step_controls(cfg);
    controls.t_max = cfg.converge_t_end;

    convpde::MmsSolution exact = (cfg.mms == "auto")
                                     ? convpde::default_mms(spec.model)
                                     : *convpde::mms_by_name(cfg.mms);
    const convpde::ConvergenceReport rep =
        convpde::convergence_study(spec, exact, cfg.resolutions, controls);

    fs::create_directories(flags.out_dir);
    std::ofstream csv = open_out(fs::path(flags.out_dir) / "orders.csv");
    csv << "n_cells,h,rel_l2_error,fitted_order\n";
    for (std::size_t i = 0; i < rep.resolutions.size(); ++i) {
        const double h = 2.0 / static_cast<double>(rep.resolutions[i]);
        csv << rep.resolutions[i] << ',' << convpde::io::fmt17(h) << ','
            << convpde::io::fmt17(rep.errors[i]) << ','
            << (rep.order_fit_skipped ? "nan" : convpde::io::fmt17(rep.order)) << '\n';
    }
    if (rep.order_fit_skipped) {
        std::cout << "errors at roundoff level, order fit skipped\n";
    } else {
        std::cout << "fitted spatial order: " << convpde::io::fmt17(rep.order) << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"1D convective PDE lab: dissipative bounds vs finite-time blow-up"};
    app.require_subcommand(1);

    CommonFlags flags;
    auto add_common = [&](CLI::App* sub, bool need_config) {
        auto* opt = sub->add_option("--config", flags.config_path, "path to a key: value config");
        if (need_config) opt->required();
        sub->add_option("--out", flags.out_dir, "output directory (default .)");
        sub->add_option("--jobs", flags.jobs, "worker threads for sweep cells");
        sub->add_option("--n-cells", flags.n_cells, "override grid.n_cells");
        sub->add_option("--t-max", flags.t_max, "override controls.t_max");
    };

    CLI::App* run = app.add_subcommand("run", "integrate one configuration");
    CLI::App* sweep = app.add_subcommand("sweep", "map regimes over (p, q, amplitude)");
    CLI::App* conv = app.add_subcommand("converge", "manufactured-solution refinement study");
    CLI::App* verify = app.add_subcommand("verify", "run the acceptance suite");
    add_common(run, true);
    add_common(sweep, true);
    add_common(conv, true);
    add_common(verify, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(flags);
        if (sweep->parsed()) return cmd_sweep(flags);
        if (conv->parsed()) return cmd_converge(flags);
        return convpde::report_acceptance(std::cout) ? 0 : 1;
    } catch (const convpde::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
