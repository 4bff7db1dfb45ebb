#include "mdpgeom/convergence.hpp"
#include "mdpgeom/chain.hpp"
#include "mdpgeom/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mdpgeom {

ViStep vi_step_new(const MdpModel& model, const Vector& v) {
    const auto n = model.num_states();
    if (v.size() != static_cast<Eigen::Index>(n)) throw DomainError("vi_step_new: dimension mismatch");
    const double C = geometry_constant(n, model.gamma());
    const PolicyVector pv{v};

    ViStep out{Vector(n), Policy{std::vector<std::size_t>(n)}};
    for (std::size_t s = 0; s < n; ++s) {
        double best = -std::numeric_limits<double>::infinity();
        for (auto a : model.saps_at(s)) {
            const double adv = advantage(model, a, pv);
            if (adv > best) {
                best = adv;
                out.greedy.choice[s] = a;
            }
        }
        out.next(s) = v(s) + C * best;
    }
    return out;
}

ConvergenceReport run_vi_new(const MdpModel& model, const Vector& v0, std::size_t steps) {
    ConvergenceReport report;
    report.n = model.num_states();
    report.gamma = model.gamma();
    // The step map sends v + c1 to f(v) + gamma (1 - n) c 1, so iterating the
    // mean-centered representative leaves spans and greedy choices unchanged
    // while keeping magnitudes bounded.
    Vector v = v0.array() - v0.mean();
    report.span_trace.push_back(span(v0));
    for (std::size_t t = 0; t < steps && report.span_trace.back() >= kConvergedSpan; ++t) {
        auto step = vi_step_new(model, v);
        v = step.next.array() - step.next.mean();
        report.greedy_policies.push_back(std::move(step.greedy));
        const double prev = report.span_trace.back();
        report.span_trace.push_back(span(v));
        report.per_step_ratios.push_back(report.span_trace.back() / prev);
    }
    report.final_values = std::move(v);
    return report;
}

double suboptimality_gap(const MdpModel& model, const Policy& pi_star) {
    const auto pv = evaluate_policy_new(model, pi_star).vector;
    double max_adv = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < model.num_saps(); ++a)
        if (!pi_star.contains(a)) max_adv = std::max(max_adv, advantage(model, a, pv));
    return -max_adv;
}

TheoremConstants theorem_constants(const MdpModel& model, const Policy& pi_star, const std::vector<double>& span_trace) {
    const auto n = model.num_states();
    const double g = model.gamma();
    const double C = geometry_constant(n, g);
    const Matrix P = policy_kernel(model, pi_star);
    if (!classify_chain(P).is_unichain) throw AssumptionViolatedError("unichain: optimal kernel is multichain");

    TheoremConstants out;
    try {
        const auto cert = primitivity_certificate(P);
        out.exponent_N = cert.exponent;
        out.omega = cert.omega;
    } catch (const NotPrimitiveError&) {
        throw AssumptionViolatedError("aperiodicity: optimal kernel has no positive power");
    }

    out.delta = suboptimality_gap(model, pi_star);
    if (!(out.delta > kUniquenessGap)) throw AssumptionViolatedError("uniqueness: suboptimality gap delta <= 1e-9");

    if (span_trace.empty()) throw DomainError("theorem_constants: empty span trace");
    const unsigned N = out.exponent_N;
    const auto scaled_span = [&](std::size_t t) { return t < span_trace.size() ? span_trace[t] / C : 0.0; };
    out.converged_before_N = span_trace.size() <= N || scaled_span(N) * C < kConvergedSpan;

    double phi = out.omega;
    for (std::size_t t = 0; t < N; ++t) {
        const double s = scaled_span(t);
        phi *= (s * C < kConvergedSpan) ? 1.0 : std::min(1.0, out.delta / (g * s));
    }
    out.phi = phi;
    out.tau = 1.0 - static_cast<double>(n) * phi;
    out.degenerate = !(out.tau > 0.0 && out.tau < 1.0);

    if (!out.converged_before_N && std::isfinite(out.delta)) {
        double stated = out.omega;
        for (std::size_t t = 1; t <= N; ++t) stated *= out.delta / (g * scaled_span(t));
        out.phi_stated = stated;
        out.tau_stated = 1.0 - static_cast<double>(n) * stated;
    }
    return out;
}

ConvergenceReport verify_theorem(const MdpModel& model, const Vector& v0, const VerifyOptions& options) {
    const auto opt = optimal_policy(model, options.enumeration_cap);
    const Matrix P = policy_kernel(model, opt.policy);

    AssumptionDiagnostics diag;
    diag.unique = opt.unique;
    diag.unichain = classify_chain(P).is_unichain;
    std::optional<PrimitivityCertificate> cert;
    if (diag.unichain) {
        try {
            cert = primitivity_certificate(P);
            diag.aperiodic = true;
        } catch (const NotPrimitiveError&) {
            diag.aperiodic = false;
        }
    }

    const bool evaluable = diag.unichain || !model.is_average_reward();
    const MdpModel normalized = evaluable ? normalize_mdp(model, opt.policy) : model;
    if (evaluable && diag.unique && !(suboptimality_gap(normalized, opt.policy) > kUniquenessGap)) diag.unique = false;
    if (!diag.unique) diag.note += "optimal policy is not unique; ";
    if (!diag.unichain) diag.note += "optimal kernel is multichain; ";
    else if (!diag.aperiodic) diag.note += "optimal kernel is not primitive (periodic or with transient states); ";
    if (!evaluable) diag.note += "model not normalized; ";

    const std::size_t N = cert ? cert->exponent : 0;
    const std::size_t steps = std::max<std::size_t>({options.steps, N, 1});

    ConvergenceReport report = run_vi_new(normalized, v0, steps);
    report.unnormalized_span_trace = run_vi_new(model, v0, steps).span_trace;
    report.diagnostics = diag;
    report.optimal = opt.policy;

    for (std::size_t t = report.greedy_policies.size(); t-- > 0;) {
        if (report.greedy_policies[t] != opt.policy) break;
        report.greedy_stable_from = t;
    }
    // A run that converged before its first step has nothing to stabilize.
    if (report.greedy_policies.empty()) report.greedy_stable_from = 0;

    if (!diag.all_pass()) return report;

    const auto consts = theorem_constants(normalized, opt.policy, report.span_trace);
    const double gN = std::pow(model.gamma(), static_cast<double>(N));
    const double s0 = report.span_trace.front();
    const double sN = report.span_trace[std::min(N, report.span_trace.size() - 1)];
    report.constants = consts;
    report.span_v0 = s0;
    report.span_vN = sN;
    report.bound_satisfied = sN <= gN * consts.tau * s0 + 1e-9;
    report.sanity_bound_satisfied = sN <= gN * s0 + 1e-9;
    if (consts.tau_stated) report.stated_bound_satisfied = sN <= gN * *consts.tau_stated * s0 + 1e-9;
    return report;
}

bool product_expansion_check(const std::vector<Matrix>& matrices) {
    if (matrices.empty()) throw DomainError("product_expansion_check: empty matrix list");
    const auto n = matrices.front().rows();
    for (const auto& P : matrices) {
        if (P.rows() != n) throw DomainError("product_expansion_check: dimension mismatch");
        check_stochastic(P);
    }
    const Matrix E = Matrix::Ones(n, n);
    Matrix shifted = Matrix::Identity(n, n);
    Matrix plain = Matrix::Identity(n, n);
    for (const auto& P : matrices) {
        shifted = shifted * (P - E);
        plain = plain * P;
    }
    const Matrix residue = shifted - plain;
    for (Eigen::Index i = 1; i < n; ++i)
        if ((residue.row(i) - residue.row(0)).cwiseAbs().maxCoeff() > 1e-10) return false;
    return true;
}

} // namespace mdpgeom
