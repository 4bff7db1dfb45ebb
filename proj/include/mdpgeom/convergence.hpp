#pragma once

#include "mdpgeom/classic.hpp"
#include "mdpgeom/mdp.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace mdpgeom {

/// Runs stop once span(v_t) falls below this.
inline constexpr double kConvergedSpan = 1e-13;

struct ViStep {
    Vector next;
    Policy greedy;
};

/// One advantage-based VI step on new values:
/// v_{t+1}(s) = v_t(s) + C * max_{st(a)=s} a+ . (1, v_t), lowest SAP index on ties.
ViStep vi_step_new(const MdpModel& model, const Vector& v);

struct AssumptionDiagnostics {
    bool unique = false;
    bool unichain = false;
    bool aperiodic = false;
    std::string note;

    bool all_pass() const noexcept { return unique && unichain && aperiodic; }
};

struct TheoremConstants {
    /// Negated max advantage of SAPs outside pi*; +inf when every state has one SAP.
    double delta = 0.0;
    double omega = 0.0;
    unsigned exponent_N = 1;
    /// omega * prod_{t=0}^{N-1} min(1, delta / (gamma span(v_t / C))).
    double phi = 0.0;
    double tau = 1.0;
    /// omega delta^N / (gamma^N prod_{t=1}^N span(v_t / C)), absent when a span
    /// in that window is below kConvergedSpan.
    std::optional<double> phi_stated;
    std::optional<double> tau_stated;
    /// tau outside (0, 1).
    bool degenerate = false;
    bool converged_before_N = false;
};

struct ConvergenceReport {
    std::size_t n = 0;
    double gamma = 1.0;
    std::vector<double> span_trace;
    /// span_trace[t+1] / span_trace[t].
    std::vector<double> per_step_ratios;
    /// greedy_policies[t] maps v_t to v_{t+1}.
    std::vector<Policy> greedy_policies;
    /// Last iterate, mean-centered (the run is defined up to a constant shift).
    Vector final_values;

    AssumptionDiagnostics diagnostics;
    std::optional<Policy> optimal;
    std::optional<TheoremConstants> constants;
    std::optional<double> span_v0;
    std::optional<double> span_vN;
    std::optional<bool> bound_satisfied;
    /// span(v_N) <= gamma^N span(v_0).
    std::optional<bool> sanity_bound_satisfied;
    /// Bound with tau_stated, informational.
    std::optional<bool> stated_bound_satisfied;
    /// First t from which every greedy policy equals pi*.
    std::optional<std::size_t> greedy_stable_from;
    /// The same VI run on the model before normalization.
    std::vector<double> unnormalized_span_trace;
};

/// Iterates vi_step_new for up to `steps` steps; stops early once the span is
/// below kConvergedSpan. Only the trace fields are filled.
///
/// The literal iteration amplifies the constant component of v by
/// gamma (1 - n) per step, so iterates are re-centered on their mean after
/// every step.
ConvergenceReport run_vi_new(const MdpModel& model, const Vector& v0, std::size_t steps);

/// delta = -max over SAPs outside pi_star of their advantage w.r.t. pi_star;
/// +inf when no such SAP exists.
double suboptimality_gap(const MdpModel& model, const Policy& pi_star);

/// Throws AssumptionViolatedError naming the failed diagnostic.
TheoremConstants theorem_constants(const MdpModel& model, const Policy& pi_star, const std::vector<double>& span_trace);

struct VerifyOptions {
    /// Trace length; at least the primitivity exponent when one exists.
    std::size_t steps = 0;
    std::uint64_t enumeration_cap = kDefaultEnumerationCap;
};

/// Full pipeline: optimum, diagnostics, normalization, VI, constants, bound.
/// Failed diagnostics leave bound_satisfied empty.
ConvergenceReport verify_theorem(const MdpModel& model, const Vector& v0, const VerifyOptions& options = {});

/// Checks that prod_t (P_t - E) - prod_t P_t has identical rows within 1e-10.
bool product_expansion_check(const std::vector<Matrix>& matrices);

} // namespace mdpgeom
