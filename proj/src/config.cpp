#include "convpde/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "convpde/io.hpp"

namespace convpde {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return d;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a number, got '" + v + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(key + ": expected true/false, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    for (const std::string& item : split_list(v)) out.push_back(parse_double(key, item));
    return out;
}

template <typename T>
std::string join(const std::vector<T>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ",";
        if constexpr (std::is_same_v<T, double>) {
            out += io::fmt17(values[i]);
        } else {
            out += std::to_string(values[i]);
        }
    }
    return out;
}

void check_choice(const std::string& key, const std::string& v,
                  std::initializer_list<const char*> allowed) {
    for (const char* a : allowed) {
        if (v == a) return;
    }
    std::string msg = key + ": '" + v + "' is not one of {";
    bool first = true;
    for (const char* a : allowed) {
        if (!first) msg += ", ";
        msg += a;
        first = false;
    }
    throw ConfigError(msg + "}");
}

}  // namespace

bool RunConfig::operator==(const RunConfig& other) const {
    return serialize_config(*this) == serialize_config(other);
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    using Handler = std::function<void(const std::string&, const std::string&)>;
    const std::map<std::string, Handler> handlers = {
        {"model", [&](const std::string& k, const std::string& v) {
             check_choice(k, v, {"burgers", "ks", "ch", "kdv"});
             cfg.model = v;
         }},
        {"p", [&](const std::string& k, const std::string& v) { cfg.p = parse_double(k, v); }},
        {"q", [&](const std::string& k, const std::string& v) { cfg.q = parse_double(k, v); }},
        {"a", [&](const std::string& k, const std::string& v) { cfg.a = parse_double(k, v); }},
        {"lambda",
         [&](const std::string& k, const std::string& v) { cfg.lambda = parse_double(k, v); }},
        {"flux", [&](const std::string& k, const std::string& v) {
             check_choice(k, v, {"signed", "unsigned"});
             cfg.flux = v;
         }},
        {"f", [&](const std::string& k, const std::string& v) {
             check_choice(k, v, {"zero", "signed_power", "abs_power", "quadratic"});
             cfg.f = v;
         }},
        {"f.coeff",
         [&](const std::string& k, const std::string& v) { cfg.f_coeff = parse_double(k, v); }},
        {"grid.n_cells", [&](const std::string& k, const std::string& v) {
             const double d = parse_double(k, v);
             if (d < 8 || d != std::floor(d)) throw ConfigError(k + ": needs an integer >= 8");
             cfg.n_cells = static_cast<std::size_t>(d);
         }},
        {"scheme", [&](const std::string& k, const std::string& v) {
             check_choice(k, v, {"cnab2", "euler1"});
             cfg.scheme = v;
         }},
        {"controls.dt_init",
         [&](const std::string& k, const std::string& v) { cfg.dt_init = parse_double(k, v); }},
        {"controls.dt_min",
         [&](const std::string& k, const std::string& v) { cfg.dt_min = parse_double(k, v); }},
        {"controls.dt_max",
         [&](const std::string& k, const std::string& v) { cfg.dt_max = parse_double(k, v); }},
        {"controls.tol",
         [&](const std::string& k, const std::string& v) { cfg.tol = parse_double(k, v); }},
        {"controls.safety",
         [&](const std::string& k, const std::string& v) { cfg.safety = parse_double(k, v); }},
        {"controls.t_max",
         [&](const std::string& k, const std::string& v) { cfg.t_max = parse_double(k, v); }},
        {"controls.blowup_threshold",
         [&](const std::string& k, const std::string& v) {
             cfg.blowup_threshold = parse_double(k, v);
         }},
        {"controls.record_every",
         [&](const std::string& k, const std::string& v) {
             cfg.record_every = parse_double(k, v);
         }},
        {"diag.L_weight",
         [&](const std::string& k, const std::string& v) { cfg.L_weight = parse_double(k, v); }},
        {"diag.weighted",
         [&](const std::string& k, const std::string& v) { cfg.weighted = parse_bool(k, v); }},
        {"diag.s_list",
         [&](const std::string& k, const std::string& v) { cfg.s_list = parse_double_list(k, v); }},
        {"diag.moment", [&](const std::string& k, const std::string& v) {
             check_choice(k, v, {"none", "power", "ch"});
             cfg.moment = v;
         }},
        {"diag.moment_eps",
         [&](const std::string& k, const std::string& v) { cfg.moment_eps = parse_double(k, v); }},
        {"diag.moment_n", [&](const std::string& k, const std::string& v) {
             cfg.moment_n = static_cast<int>(parse_double(k, v));
         }},
        {"diag.sobolev", [&](const std::string& k, const std::string& v) {
             cfg.sobolev.clear();
             for (double d : parse_double_list(k, v)) cfg.sobolev.push_back(static_cast<int>(d));
         }},
        {"diag.kdv_energy",
         [&](const std::string& k, const std::string& v) { cfg.kdv_energy = parse_bool(k, v); }},
        {"diag.record_fields",
         [&](const std::string& k, const std::string& v) { cfg.record_fields = parse_bool(k, v); }},
        {"init.profile", [&](const std::string& k, const std::string& v) {
             check_choice(k, v, {"sine", "rough", "file"});
             cfg.profile = v;
         }},
        {"init.amplitude",
         [&](const std::string& k, const std::string& v) { cfg.amplitude = parse_double(k, v); }},
        {"init.seed", [&](const std::string& k, const std::string& v) {
             try {
                 cfg.seed = std::stoull(v);
             } catch (const std::exception&) {
                 throw ConfigError(k + ": expected an unsigned integer");
             }
         }},
        {"init.file", [&](const std::string&, const std::string& v) { cfg.init_file = v; }},
        {"sweep.p_values",
         [&](const std::string& k, const std::string& v) { cfg.sweep_p = parse_double_list(k, v); }},
        {"sweep.q_values",
         [&](const std::string& k, const std::string& v) { cfg.sweep_q = parse_double_list(k, v); }},
        {"sweep.amplitudes", [&](const std::string& k, const std::string& v) {
             cfg.sweep_amplitudes = parse_double_list(k, v);
         }},
        {"converge.resolutions", [&](const std::string& k, const std::string& v) {
             cfg.resolutions.clear();
             for (double d : parse_double_list(k, v)) {
                 if (d < 8 || d != std::floor(d)) throw ConfigError(k + ": integers >= 8 only");
                 cfg.resolutions.push_back(static_cast<std::size_t>(d));
             }
         }},
        {"converge.t_end", [&](const std::string& k, const std::string& v) {
             cfg.converge_t_end = parse_double(k, v);
         }},
        {"converge.mms", [&](const std::string& k, const std::string& v) {
             check_choice(k, v, {"auto", "half_sine", "kdv_sine"});
             cfg.mms = v;
         }},
    };

    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto sep = line.find(':');
        if (sep == std::string::npos) sep = line.find('=');
        if (sep == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key: value'");
        }
        std::string key = trim(line.substr(0, sep));
        const std::string value = trim(line.substr(sep + 1));
        if (key == "amplitude") key = "init.amplitude";  // shorthand
        const auto it = handlers.find(key);
        if (it == handlers.end()) {
            throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
        it->second(key, value);
    }

    // cross-field validation
    if (cfg.lambda != 0.0 && cfg.model != "ks") {
        throw ConfigError("lambda: only valid for model ks");
    }
    if (cfg.model == "ks" && cfg.p > 6.0) {
        cfg.warnings.push_back("p > 6 is outside the proven KS well-posedness regime; "
                               "running as exploratory");
    }
    if (cfg.model == "kdv" && cfg.p > 2.0) {
        cfg.warnings.push_back("p > 2 is outside the proven KdV well-posedness regime; "
                               "running as exploratory");
    }
    if (cfg.profile == "file" && cfg.init_file.empty()) {
        throw ConfigError("init.file: required when init.profile is 'file'");
    }
    return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream os;
    os << "model: " << cfg.model << '\n';
    os << "p: " << io::fmt17(cfg.p) << '\n';
    os << "q: " << io::fmt17(cfg.q) << '\n';
    os << "a: " << io::fmt17(cfg.a) << '\n';
    os << "lambda: " << io::fmt17(cfg.lambda) << '\n';
    os << "flux: " << cfg.flux << '\n';
    os << "f: " << cfg.f << '\n';
    os << "f.coeff: " << io::fmt17(cfg.f_coeff) << '\n';
    os << "grid.n_cells: " << cfg.n_cells << '\n';
    os << "scheme: " << cfg.scheme << '\n';
    os << "controls.dt_init: " << io::fmt17(cfg.dt_init) << '\n';
    os << "controls.dt_min: " << io::fmt17(cfg.dt_min) << '\n';
    os << "controls.dt_max: " << io::fmt17(cfg.dt_max) << '\n';
    os << "controls.tol: " << io::fmt17(cfg.tol) << '\n';
    os << "controls.safety: " << io::fmt17(cfg.safety) << '\n';
    os << "controls.t_max: " << io::fmt17(cfg.t_max) << '\n';
    os << "controls.blowup_threshold: " << io::fmt17(cfg.blowup_threshold) << '\n';
    os << "controls.record_every: " << io::fmt17(cfg.record_every) << '\n';
    os << "diag.L_weight: " << io::fmt17(cfg.L_weight) << '\n';
    os << "diag.weighted: " << (cfg.weighted ? "true" : "false") << '\n';
    if (!cfg.s_list.empty()) os << "diag.s_list: " << join(cfg.s_list) << '\n';
    os << "diag.moment: " << cfg.moment << '\n';
    os << "diag.moment_eps: " << io::fmt17(cfg.moment_eps) << '\n';
    os << "diag.moment_n: " << cfg.moment_n << '\n';
    if (!cfg.sobolev.empty()) os << "diag.sobolev: " << join(cfg.sobolev) << '\n';
    os << "diag.kdv_energy: " << (cfg.kdv_energy ? "true" : "false") << '\n';
    os << "diag.record_fields: " << (cfg.record_fields ? "true" : "false") << '\n';
    os << "init.profile: " << cfg.profile << '\n';
    os << "init.amplitude: " << io::fmt17(cfg.amplitude) << '\n';
    os << "init.seed: " << cfg.seed << '\n';
    if (!cfg.init_file.empty()) os << "init.file: " << cfg.init_file << '\n';
    os << "sweep.p_values: " << join(cfg.sweep_p) << '\n';
    os << "sweep.q_values: " << join(cfg.sweep_q) << '\n';
    os << "sweep.amplitudes: " << join(cfg.sweep_amplitudes) << '\n';
    os << "converge.resolutions: " << join(cfg.resolutions) << '\n';
    os << "converge.t_end: " << io::fmt17(cfg.converge_t_end) << '\n';
    os << "converge.mms: " << cfg.mms << '\n';
    return os.str();
}

EquationSpec to_equation_spec(const RunConfig& cfg) {
    EquationSpec spec;
    spec.model = *model_from_name(cfg.model);
    spec.p = cfg.p;
    spec.a = cfg.a;
    spec.lambda = cfg.lambda;
    spec.flux_form = (cfg.flux == "signed") ? FluxForm::Signed : FluxForm::Unsigned;
    if (cfg.f == "zero") {
        spec.f = FSpec::zero();
    } else if (cfg.f == "signed_power") {
        spec.f = FSpec::signed_power(cfg.q, cfg.f_coeff);
    } else if (cfg.f == "abs_power") {
        spec.f = FSpec::abs_power(cfg.q, cfg.f_coeff);
    } else {
        spec.f = FSpec::quadratic(cfg.f_coeff);
    }
    try {
        validate_spec(spec);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return spec;
}

StepControls to_step_controls(const RunConfig& cfg) {
    StepControls c;
    c.dt_init = cfg.dt_init;
    c.dt_min = cfg.dt_min;
    c.dt_max = cfg.dt_max;
    c.tol = cfg.tol;
    c.safety = cfg.safety;
    c.t_max = cfg.t_max;
    c.blowup_threshold = cfg.blowup_threshold;
    c.record_every = cfg.record_every;
    c.scheme = *scheme_from_name(cfg.scheme);
    try {
        validate_controls(c);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("controls: ") + e.what());
    }
    return c;
}

DiagnosticsConfig to_diagnostics(const RunConfig& cfg) {
    DiagnosticsConfig d;
    if (cfg.L_weight >= 0.0) {
        d.L_weight = cfg.L_weight;
    } else if (cfg.model == "burgers" && cfg.f == "quadratic") {
        d.L_weight = cfg.f_coeff + 1.0;  // the proof's choice L = k+1
    } else {
        d.L_weight = 1.0;
    }
    d.record_weighted = cfg.weighted;
    d.s_list = cfg.s_list;
    if (cfg.moment == "power") {
        int n = cfg.moment_n;
        if (n <= 0) {
            if (cfg.q > cfg.p) {
                const MomentModel mm =
                    (cfg.model == "burgers") ? MomentModel::SecondOrder : MomentModel::FourthOrder;
                n = min_moment_order(mm, cfg.p, cfg.q);
            } else {
                n = 2;
            }
        }
        d.moment = MomentSpec::power(cfg.moment_eps, n);
    } else if (cfg.moment == "ch") {
        d.moment = MomentSpec::ch();
    }
    d.sobolev_orders = cfg.sobolev;
    d.record_kdv_energy = cfg.kdv_energy;
    try {
        validate_diagnostics(d, *model_from_name(cfg.model));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("diag: ") + e.what());
    }
    return d;
}

Field make_initial_data(const RunConfig& cfg, const Grid& grid) {
    if (cfg.profile == "sine") {
        return default_profile(*model_from_name(cfg.model), cfg.amplitude, grid);
    }
    if (cfg.profile == "rough") {
        return rough_initial_data(grid, cfg.seed, cfg.amplitude);
    }
    std::ifstream in(cfg.init_file);
    if (!in) throw ConfigError("init.file: cannot open '" + cfg.init_file + "'");
    std::vector<double> values;
    double v;
    while (in >> v) values.push_back(v);
    if (values.size() != grid.n_nodes()) {
        throw ConfigError("init.file: expected " + std::to_string(grid.n_nodes()) +
                          " values, got " + std::to_string(values.size()));
    }
    Field u;
    u.grid = grid;
    u.values = std::move(values);
    u.values.front() = 0.0;
    u.values.back() = 0.0;
    return u;
}

}  // namespace convpde
