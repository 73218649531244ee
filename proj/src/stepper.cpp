#include "convpde/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace convpde {

const char* scheme_name(Scheme s) { return s == Scheme::Euler1 ? "euler1" : "cnab2"; }

std::optional<Scheme> scheme_from_name(const std::string& name) {
    if (name == "euler1") return Scheme::Euler1;
    if (name == "cnab2") return Scheme::CNAB2;
    return std::nullopt;
}

void validate_controls(const StepControls& c) {
    if (!(c.dt_min > 0.0 && c.dt_min <= c.dt_init && c.dt_init <= c.dt_max)) {
        throw std::invalid_argument("controls: need 0 < dt_min <= dt_init <= dt_max");
    }
    if (!(c.tol > 0.0)) throw std::invalid_argument("controls: tol must be > 0");
    if (!(c.safety > 0.0 && c.safety <= 1.0)) {
        throw std::invalid_argument("controls: safety must be in (0,1]");
    }
    if (!(c.blowup_threshold > 0.0)) {
        throw std::invalid_argument("controls: blowup_threshold must be > 0");
    }
    if (!(c.t_max > 0.0)) throw std::invalid_argument("controls: t_max must be > 0");
    if (!(c.record_every > 0.0)) throw std::invalid_argument("controls: record_every must be > 0");
}

const char* outcome_name(OutcomeKind k) {
    switch (k) {
        case OutcomeKind::Completed: return "completed";
        case OutcomeKind::BlowUp: return "blowup";
        case OutcomeKind::Inconclusive: return "inconclusive";
    }
    return "?";
}

const char* blowup_reason_name(BlowupReason r) {
    switch (r) {
        case BlowupReason::Threshold: return "threshold";
        case BlowupReason::DtCollapse: return "dt-collapse";
        case BlowupReason::Overflow: return "overflow";
    }
    return "?";
}

const BandedLU& SolverCache::get(const BandedOperator& op, double alpha, double beta) {
    const auto key = std::make_pair(alpha, beta);
    auto it = cache_.find(key);
    if (it == cache_.end()) {
        if (cache_.size() >= 8) cache_.clear();
        it = cache_.emplace(key, make_shifted_solver(op, alpha, beta)).first;
    }
    return it->second;
}

namespace {

void impose_boundary(Field& u) {
    u.values.front() = 0.0;
    u.values.back() = 0.0;
}

}  // namespace

Field step_imex(const ModelOps& ops, SolverCache& cache, const Field& u, double t, double dt,
                Scheme scheme, const Field& n_of_u, const NonlinearHistory& hist) {
    if (!(dt > 0.0)) throw std::invalid_argument("step_imex: dt must be > 0");
    const std::size_t n = u.size();
    Field rhs = make_field(u.grid);
    Field next;
    if (scheme == Scheme::CNAB2 && hist.valid) {
        // trapezoid on L, two-point extrapolation of N (classic 3/2, -1/2
        // weights when the previous evaluation is one full step back)
        const double delta = t - hist.t_old;
        const double w_new = 1.0 + dt / (2.0 * delta);
        const double w_old = -dt / (2.0 * delta);
        const Field lu = apply_operator(ops.linear, u);
        for (std::size_t i = 0; i < n; ++i) {
            rhs.values[i] = u.values[i] + 0.5 * dt * lu.values[i] +
                            dt * (w_new * n_of_u.values[i] + w_old * hist.n_old.values[i]);
        }
        const BandedLU& lu_solver = cache.get(ops.linear, 1.0, -0.5 * dt);
        next.grid = u.grid;
        next.values = lu_solver.solve(rhs.values);
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            rhs.values[i] = u.values[i] + dt * n_of_u.values[i];
        }
        const BandedLU& lu_solver = cache.get(ops.linear, 1.0, -dt);
        next.grid = u.grid;
        next.values = lu_solver.solve(rhs.values);
    }
    impose_boundary(next);
    return next;
}

double adapt_dt(double err_rel, double dt, const StepControls& controls, int scheme_order) {
    if (err_rel < 0.0) throw std::invalid_argument("adapt_dt: err_rel must be >= 0");
    if (err_rel == 0.0) return controls.dt_max;
    const double factor = std::pow(controls.tol / err_rel, 1.0 / (scheme_order + 1));
    return std::clamp(controls.safety * dt * factor, controls.dt_min, controls.dt_max);
}

std::optional<BlowupReason> detect_blowup(const Field& u, double proposed_dt,
                                          const StepControls& controls) {
    if (!all_finite(u)) return BlowupReason::Overflow;
    if (sup_norm(u) > controls.blowup_threshold) return BlowupReason::Threshold;
    if (proposed_dt < controls.dt_min) return BlowupReason::DtCollapse;
    return std::nullopt;
}

std::optional<double> estimate_blowup_time(const std::vector<std::pair<double, double>>& samples,
                                           double q_eff) {
    if (!(q_eff > 0.0)) throw std::invalid_argument("estimate_blowup_time: q_eff must be > 0");
    if (samples.size() < 4) return std::nullopt;
    for (std::size_t i = 1; i < samples.size(); ++i) {
        if (!(samples[i].second > samples[i - 1].second) ||
            !(samples[i].first > samples[i - 1].first)) {
            return std::nullopt;  // non-monotone tail
        }
    }
    // y ~ [q alpha (T-t)]^{-1/q}  =>  y^{-q} affine in t, root at T
    const std::size_t m = samples.size();
    double st = 0, sz = 0, stt = 0, stz = 0;
    for (const auto& [t, y] : samples) {
        if (!(y > 0.0)) return std::nullopt;
        const double z = std::pow(y, -q_eff);
        st += t;
        sz += z;
        stt += t * t;
        stz += t * z;
    }
    const double denom = m * stt - st * st;
    if (denom <= 0.0) return std::nullopt;
    const double slope = (m * stz - st * sz) / denom;
    const double intercept = (sz - slope * st) / m;
    if (!(slope < 0.0)) return std::nullopt;
    const double t_root = -intercept / slope;
    if (!std::isfinite(t_root) || t_root < samples.back().first) return std::nullopt;
    return t_root;
}

RunOutcome integrate(const EquationSpec& spec, const Field& u0, const StepControls& controls,
                     const DiagnosticsConfig& diag, const IntegrateOptions& opts) {
    validate_spec(spec);
    validate_controls(controls);

    const Grid& grid = u0.grid;
    const ModelOps ops = make_model_ops(spec, grid);
    const DiagnosticsRecorder recorder(spec, grid, diag);
    const int order = (controls.scheme == Scheme::Euler1) ? 1 : 2;

    RunOutcome out;
    out.series = recorder.make_series();

    Field u = u0;
    impose_boundary(u);
    double t = 0.0;
    double dt = controls.dt_init;

    SolverCache cache;
    NonlinearHistory hist;

    recorder.record(out.series, t, u);
    if (opts.record_fields) out.snapshots.emplace_back(t, u);
    double next_record = controls.record_every;

    // sup-norm trace of recent accepted steps, for the blow-up time fit
    std::deque<std::pair<double, double>> tail;
    tail.emplace_back(t, sup_norm(u));

    const double q_eff =
        (spec.f.kind == FSpec::Kind::SignedPower || spec.f.kind == FSpec::Kind::AbsPower)
            ? spec.f.q
            : 1.0;

    auto finish_blowup = [&](BlowupReason reason) {
        out.kind = OutcomeKind::BlowUp;
        out.reason = reason;
        out.t_detect = t;
        out.t_final = t;
        out.final_state = u;
        // fit on the longest strictly increasing suffix of the trace
        std::vector<std::pair<double, double>> fitpts(tail.begin(), tail.end());
        std::size_t start = fitpts.size();
        while (start > 1 && fitpts[start - 1].second > fitpts[start - 2].second &&
               fitpts[start - 1].first > fitpts[start - 2].first) {
            --start;
        }
        --start;
        std::vector<std::pair<double, double>> inc(fitpts.begin() + static_cast<long>(start),
                                                   fitpts.end());
        out.t_estimate = estimate_blowup_time(inc, q_eff);
        return out;
    };

    while (t < controls.t_max - 1e-14) {
        const double dt_step = std::min(dt, controls.t_max - t);

        Field u_big, u_half;
        double err_rel;
        bool overflow = false;
        try {
            const Field n_u = nonlinear_rhs(ops, u, t);
            u_big = step_imex(ops, cache, u, t, dt_step, controls.scheme, n_u, hist);
            const Field u_h1 =
                step_imex(ops, cache, u, t, 0.5 * dt_step, controls.scheme, n_u, hist);
            const Field n_mid = nonlinear_rhs(ops, u_h1, t + 0.5 * dt_step);
            NonlinearHistory mid_hist;
            if (controls.scheme == Scheme::CNAB2) {
                mid_hist.valid = true;
                mid_hist.n_old = n_u;
                mid_hist.t_old = t;
            }
            u_half = step_imex(ops, cache, u_h1, t + 0.5 * dt_step, 0.5 * dt_step,
                               controls.scheme, n_mid, mid_hist);

            if (!all_finite(u_big) || !all_finite(u_half)) {
                overflow = true;
                err_rel = std::numeric_limits<double>::infinity();
            } else {
                double diff2 = 0.0, ref2 = 0.0;
                for (std::size_t i = 0; i < u.size(); ++i) {
                    const double d = u_big.values[i] - u_half.values[i];
                    diff2 += d * d;
                    ref2 += u_half.values[i] * u_half.values[i];
                }
                err_rel = std::sqrt(diff2) / (std::sqrt(ref2) + 1.0);
                if (!std::isfinite(err_rel)) {
                    overflow = true;
                    err_rel = std::numeric_limits<double>::infinity();
                }
            }
            if (!overflow && err_rel <= controls.tol) {
                // accept; keep the half-step result and the midpoint history
                t += dt_step;
                u = std::move(u_half);
                hist.valid = (controls.scheme == Scheme::CNAB2);
                hist.n_old = n_mid;
                hist.t_old = t - 0.5 * dt_step;
            }
        } catch (const OverflowError&) {
            overflow = true;
            err_rel = std::numeric_limits<double>::infinity();
        } catch (const LinearSolveError&) {
            overflow = true;
            err_rel = std::numeric_limits<double>::infinity();
        }

        if (overflow) {
            // shrink hard; if dt is already at the floor, classify
            if (dt_step <= controls.dt_min * (1.0 + 1e-12)) return finish_blowup(BlowupReason::Overflow);
            dt = std::max(0.25 * dt_step, controls.dt_min);
            continue;
        }

        if (err_rel > controls.tol) {
            const double dt_next = adapt_dt(err_rel, dt_step, controls, order);
            if (dt_next < controls.dt_min * (1.0 + 1e-12) &&
                dt_step <= controls.dt_min * (1.0 + 1e-12)) {
                return finish_blowup(BlowupReason::DtCollapse);
            }
            dt = dt_next;
            continue;  // rejected step: (t, u) unchanged
        }

        // accepted
        const double sup = sup_norm(u);
        tail.emplace_back(t, sup);
        if (tail.size() > 256) tail.pop_front();

        if (next_record <= t + 1e-14) {
            recorder.record(out.series, t, u);
            if (opts.record_fields) out.snapshots.emplace_back(t, u);
            while (next_record <= t + 1e-14) next_record += controls.record_every;
        }

        if (sup > controls.blowup_threshold) return finish_blowup(BlowupReason::Threshold);

        dt = adapt_dt(err_rel, dt_step, controls, order);
    }

    out.t_final = t;
    out.final_state = u;

    // slow growth at the horizon is reported as inconclusive, not dissipative
    const std::vector<double>& linf = out.series.column("Linf");
    if (linf.size() >= 3) {
        const double t_cut = 0.9 * controls.t_max;
        double base = -1.0, peak = 0.0;
        for (std::size_t i = 0; i < out.series.times.size(); ++i) {
            if (out.series.times[i] >= t_cut - 1e-12) {
                if (base < 0.0) base = linf[i];
                peak = std::max(peak, linf[i]);
            }
        }
        if (base > 0.0 && peak > 10.0 * base) {
            out.kind = OutcomeKind::Inconclusive;
            out.note = "sup-norm grew more than 10x over the last 10% of the run";
            return out;
        }
    }
    out.kind = OutcomeKind::Completed;
    return out;
}

}  // namespace convpde
