#include "mdpgeom/classic.hpp"
#include "mdpgeom/chain.hpp"
#include "mdpgeom/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mdpgeom {

namespace {

double q_value(const Sap& a, double gamma, const Vector& V) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.probs.size(); ++i) acc += a.probs[i] * V(i);
    return a.reward + gamma * acc;
}

/// Bellman max-operator and its greedy policy.
Vector bellman_max(const MdpModel& model, const Vector& V, Policy* greedy) {
    const auto n = model.num_states();
    Vector out(n);
    if (greedy) greedy->choice.assign(n, 0);
    for (std::size_t s = 0; s < n; ++s) {
        double best = -std::numeric_limits<double>::infinity();
        std::size_t arg = 0;
        for (auto a : model.saps_at(s)) {
            const double q = q_value(model.sap(a), model.gamma(), V);
            if (q > best) {
                best = q;
                arg = a;
            }
        }
        out(s) = best;
        if (greedy) greedy->choice[s] = arg;
    }
    return out;
}

} // namespace

ValueVector evaluate_discounted(const MdpModel& model, const Policy& pi) {
    if (model.gamma() >= 1.0) throw CriterionMismatchError("discounted evaluation needs gamma < 1");
    const auto n = model.num_states();
    const Matrix A = Matrix::Identity(n, n) - model.gamma() * policy_kernel(model, pi);
    const Vector R = policy_rewards(model, pi);
    Vector V = A.partialPivLu().solve(R);
    const double residual = residual_inf(A, V, R);
    if (!(residual <= 1e-10 * (1.0 + R.cwiseAbs().maxCoeff())))
        throw InternalError("discounted evaluation residual " + std::to_string(residual));
    return {std::move(V), Criterion::DiscountedClassical};
}

GainBias evaluate_average(const MdpModel& model, const Policy& pi, std::size_t anchor_state) {
    if (!model.is_average_reward()) throw CriterionMismatchError("average-reward evaluation needs gamma = 1");
    const auto n = model.num_states();
    if (anchor_state >= n) throw DomainError("anchor state out of range");
    const Matrix P = policy_kernel(model, pi);
    if (!classify_chain(P).is_unichain) throw NotUnichainError("policy " + to_string(pi) + " is multichain");

    // Unknowns: h with the anchor entry (fixed at 0) replaced by rho.
    Matrix A = Matrix::Identity(n, n) - P;
    A.col(anchor_state).setOnes();
    const Vector R = policy_rewards(model, pi);
    PivotedLu lu(A);
    if (lu.singular()) throw InternalError("gain/bias system singular for a unichain kernel");
    const Vector x = lu.solve(R);

    GainBias out{x(anchor_state), x};
    out.bias(anchor_state) = 0.0;
    return out;
}

Vector gain_vector(const Matrix& P, const Vector& R) {
    const auto cls = classify_chain(P);
    const auto n = P.rows();
    Vector g = Vector::Zero(n);
    for (const auto& members : cls.closed_classes) {
        const auto k = static_cast<Eigen::Index>(members.size());
        Matrix sub(k, k);
        Vector r(k);
        for (Eigen::Index i = 0; i < k; ++i) {
            r(i) = R(members[i]);
            for (Eigen::Index j = 0; j < k; ++j) sub(i, j) = P(members[i], members[j]);
        }
        const double class_gain = stationary_distribution(sub).dot(r);
        for (auto s : members) g(s) = class_gain;
    }
    const auto& tr = cls.transient_states;
    if (!tr.empty()) {
        const auto t = static_cast<Eigen::Index>(tr.size());
        std::vector<bool> transient(n, false);
        for (auto s : tr) transient[s] = true;
        Matrix A = Matrix::Identity(t, t);
        Vector b = Vector::Zero(t);
        for (Eigen::Index i = 0; i < t; ++i)
            for (Eigen::Index j = 0; j < n; ++j) {
                if (transient[j]) {
                    const auto col = std::find(tr.begin(), tr.end(), static_cast<std::size_t>(j)) - tr.begin();
                    A(i, col) -= P(tr[i], j);
                } else {
                    b(i) += P(tr[i], j) * g(j);
                }
            }
        const Vector gt = A.partialPivLu().solve(b);
        for (Eigen::Index i = 0; i < t; ++i) g(tr[i]) = gt(i);
    }
    return g;
}

double discounted_advantage(const MdpModel& model, std::size_t sap_index, const Vector& V) {
    const auto& a = model.sap(sap_index);
    return q_value(a, model.gamma(), V) - V(a.state);
}

double average_advantage(const MdpModel& model, std::size_t sap_index, const GainBias& gb) {
    const auto& a = model.sap(sap_index);
    return q_value(a, 1.0, gb.bias) - gb.gain - gb.bias(a.state);
}

Policy greedy_policy(const MdpModel& model, const Vector& V) {
    Policy pi;
    bellman_max(model, V, &pi);
    return pi;
}

DiscountedViResult value_iteration_discounted(const MdpModel& model, const Vector& v0, std::size_t max_iters,
                                              double epsilon) {
    if (model.gamma() >= 1.0) throw CriterionMismatchError("discounted value iteration needs gamma < 1");
    if (v0.size() != static_cast<Eigen::Index>(model.num_states())) throw DomainError("v0 dimension mismatch");
    const double g = model.gamma();
    const double threshold = epsilon * (1.0 - g) / g;

    DiscountedViResult out;
    Vector V = v0;
    out.trace.iterates.push_back(V);
    for (std::size_t t = 0; t < max_iters; ++t) {
        Vector next = bellman_max(model, V, nullptr);
        const double residual = span(next - V);
        V = std::move(next);
        out.trace.iterates.push_back(V);
        out.trace.bellman_residual_spans.push_back(residual);
        if (residual <= threshold) {
            out.converged = true;
            break;
        }
    }
    out.policy = greedy_policy(model, V);
    out.values = std::move(V);
    return out;
}

RviResult relative_value_iteration(const MdpModel& model, const Vector& v0, std::size_t anchor_state,
                                   std::size_t max_iters, double epsilon) {
    if (!model.is_average_reward()) throw CriterionMismatchError("relative value iteration needs gamma = 1");
    if (v0.size() != static_cast<Eigen::Index>(model.num_states())) throw DomainError("v0 dimension mismatch");
    if (anchor_state >= model.num_states()) throw DomainError("anchor state out of range");

    RviResult out;
    Vector h = v0.array() - v0(anchor_state);
    out.trace.iterates.push_back(h);
    double gain = 0.0;
    for (std::size_t t = 0; t < max_iters; ++t) {
        const Vector w = bellman_max(model, h, nullptr);
        const double residual = span(w - h);
        gain = w(anchor_state);
        h = w.array() - gain;
        out.trace.iterates.push_back(h);
        out.trace.bellman_residual_spans.push_back(residual);
        if (residual <= epsilon) {
            out.converged = true;
            break;
        }
    }
    out.policy = greedy_policy(model, h);
    out.gain_bias = {gain, h};
    return out;
}

namespace {

OptimalPolicy discounted_optimum(const MdpModel& model) {
    const auto n = model.num_states();
    Policy pi;
    pi.choice.resize(n);
    for (std::size_t s = 0; s < n; ++s) pi.choice[s] = model.saps_at(s).front();

    // Policy iteration terminates in at most |policies| rounds; this bound only
    // guards against a tolerance-induced cycle.
    Vector V;
    for (std::size_t round = 0;; ++round) {
        if (round > 100000) throw InternalError("policy iteration did not terminate");
        V = evaluate_discounted(model, pi).values;
        bool changed = false;
        for (std::size_t s = 0; s < n; ++s) {
            const double current = q_value(model.sap(pi.choice[s]), model.gamma(), V);
            double best = current;
            for (auto a : model.saps_at(s)) best = std::max(best, q_value(model.sap(a), model.gamma(), V));
            const double tol = 1e-12 * (1.0 + std::abs(best));
            if (best - current <= tol) continue;
            for (auto a : model.saps_at(s))
                if (q_value(model.sap(a), model.gamma(), V) >= best - tol) {
                    pi.choice[s] = a;
                    break;
                }
            changed = true;
        }
        if (!changed) break;
    }

    double max_other = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < model.num_saps(); ++a)
        if (pi.choice[model.sap(a).state] != a) max_other = std::max(max_other, discounted_advantage(model, a, V));
    return {pi, max_other < -kUniquenessGap, -max_other};
}

OptimalPolicy average_optimum(const MdpModel& model, std::uint64_t cap) {
    if (policy_count(model) > cap)
        throw UnsupportedSizeError("average-reward optimum needs enumeration; " + std::to_string(policy_count(model)) +
                                   " policies exceed cap " + std::to_string(cap));
    std::vector<Policy> policies;
    std::vector<Vector> gains;
    for (const auto& pi : enumerate_policies(model, cap)) {
        gains.push_back(gain_vector(policy_kernel(model, pi), policy_rewards(model, pi)));
        policies.push_back(pi);
    }
    Vector best = gains.front();
    for (const auto& g : gains) best = best.cwiseMax(g);

    std::size_t chosen = policies.size();
    std::size_t optimal_count = 0;
    double margin = std::numeric_limits<double>::infinity();
    std::vector<double> loss(policies.size());
    for (std::size_t k = 0; k < policies.size(); ++k) {
        loss[k] = (best - gains[k]).maxCoeff();
        if (loss[k] <= kUniquenessGap) {
            ++optimal_count;
            if (chosen == policies.size()) chosen = k;
        }
    }
    if (chosen == policies.size()) throw InternalError("no policy attains the per-state optimal gain");
    for (std::size_t k = 0; k < policies.size(); ++k)
        if (k != chosen) margin = std::min(margin, loss[k]);
    return {policies[chosen], optimal_count == 1, margin};
}

} // namespace

OptimalPolicy optimal_policy(const MdpModel& model, std::uint64_t cap) {
    if (model.is_average_reward()) return average_optimum(model, cap);
    return discounted_optimum(model);
}

} // namespace mdpgeom
