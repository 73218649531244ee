#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "convpde/diagnostics.hpp"
#include "convpde/models.hpp"

namespace convpde {

enum class Scheme { Euler1, CNAB2 };

const char* scheme_name(Scheme s);
std::optional<Scheme> scheme_from_name(const std::string& name);

struct StepControls {
    double dt_init = 1e-4;
    double dt_min = 1e-12;
    double dt_max = 0.05;
    double tol = 1e-6;            // relative local-error target
    double safety = 0.9;
    double t_max = 20.0;
    double blowup_threshold = 1e8;  // sup-norm cap
    double record_every = 0.1;
    Scheme scheme = Scheme::CNAB2;
};

void validate_controls(const StepControls& c);

enum class OutcomeKind { Completed, BlowUp, Inconclusive };
enum class BlowupReason { Threshold, DtCollapse, Overflow };

const char* outcome_name(OutcomeKind k);
const char* blowup_reason_name(BlowupReason r);

struct RunOutcome {
    OutcomeKind kind = OutcomeKind::Completed;
    Field final_state;
    NormSeries series;
    std::vector<std::pair<double, Field>> snapshots;  // only when requested
    double t_final = 0.0;

    // blow-up specifics
    double t_detect = 0.0;
    BlowupReason reason = BlowupReason::Threshold;
    std::optional<double> t_estimate;

    std::string note;
};

/// Reuses banded LU factorizations of (I + beta*L) until dt changes.
class SolverCache {
public:
    const BandedLU& get(const BandedOperator& op, double alpha, double beta);
    void clear() { cache_.clear(); }

private:
    std::map<std::pair<double, double>, BandedLU> cache_;
};

/// Previous accepted nonlinear evaluation, for the two-step scheme.
struct NonlinearHistory {
    bool valid = false;
    Field n_old;
    double t_old = 0.0;
};

/// One IMEX step: implicit linear part, explicit nonlinearity. CNAB2 without
/// history falls back to the first-order step. Boundary entries of the result
/// are re-imposed to zero.
Field step_imex(const ModelOps& ops, SolverCache& cache, const Field& u, double t, double dt,
                Scheme scheme, const Field& n_of_u, const NonlinearHistory& hist = {});

/// Step-size controller: clamp(safety*dt*(tol/err)^(1/(order+1)), dt_min, dt_max).
double adapt_dt(double err_rel, double dt, const StepControls& controls, int scheme_order);

/// Standalone blow-up classification of one state / proposed step.
std::optional<BlowupReason> detect_blowup(const Field& u, double proposed_dt,
                                          const StepControls& controls);

/// Least-squares fit of sup-norm ~ [q_eff*alpha*(T-t)]^{-1/q_eff}: regresses
/// (sup-norm)^{-q_eff} against t and returns the t-intercept. Requires >= 4
/// samples with increasing sup-norm; returns nullopt when the fit fails.
std::optional<double> estimate_blowup_time(const std::vector<std::pair<double, double>>& samples,
                                           double q_eff);

struct IntegrateOptions {
    bool record_fields = false;  // keep (t, Field) snapshots at the record cadence
};

/// Adaptive step-doubling integration with blow-up detection. All failure
/// modes are encoded in the returned RunOutcome; nothing is thrown for
/// trajectory-level events.
RunOutcome integrate(const EquationSpec& spec, const Field& u0, const StepControls& controls,
                     const DiagnosticsConfig& diag, const IntegrateOptions& opts = {});

}  // namespace convpde
