#pragma once

#include "mdpgeom/mdp.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace mdpgeom {

/// Gain and anchored bias of a unichain policy.
struct GainBias {
    double gain = 0.0;
    Vector bias;
};

struct SolveTrace {
    std::vector<Vector> iterates;
    std::vector<double> bellman_residual_spans;
};

/// Solves (I - gamma P^pi) V = R^pi; gamma < 1 only.
ValueVector evaluate_discounted(const MdpModel& model, const Policy& pi);

/// Solves (I - P^pi) h + rho 1 = R^pi with h(anchor) = 0; gamma = 1 only.
GainBias evaluate_average(const MdpModel& model, const Policy& pi, std::size_t anchor_state = 0);

/// Per-state long-run average reward of an arbitrary (possibly multichain)
/// chain: closed-class gains propagated to transient states by absorption.
Vector gain_vector(const Matrix& P, const Vector& R);

/// r^a + gamma sum_i p^a_i V(i) - V(st(a)).
double discounted_advantage(const MdpModel& model, std::size_t sap_index, const Vector& V);

/// r^a - rho + sum_i p^a_i h(i) - h(st(a)).
double average_advantage(const MdpModel& model, std::size_t sap_index, const GainBias& gb);

/// Argmax over SAPs of r^a + gamma p^a . V per state, lowest index on ties.
Policy greedy_policy(const MdpModel& model, const Vector& V);

struct DiscountedViResult {
    Policy policy;
    Vector values;
    SolveTrace trace;
    bool converged = false;
};

/// Classical value iteration; stops once span(V_{t+1} - V_t) <= epsilon (1-gamma)/gamma.
DiscountedViResult value_iteration_discounted(const MdpModel& model, const Vector& v0, std::size_t max_iters,
                                              double epsilon);

struct RviResult {
    Policy policy;
    GainBias gain_bias;
    SolveTrace trace;
    bool converged = false;
};

/// Relative value iteration anchored at anchor_state. A run that does not reach
/// residual span <= epsilon returns converged = false with the partial trace.
RviResult relative_value_iteration(const MdpModel& model, const Vector& v0, std::size_t anchor_state,
                                   std::size_t max_iters, double epsilon);

/// Threshold below which two policies count as equally good.
inline constexpr double kUniquenessGap = 1e-9;

struct OptimalPolicy {
    Policy policy;
    bool unique = false;
    /// gamma < 1: -max advantage of non-member SAPs w.r.t. policy.
    /// gamma = 1: smallest worst-state gain loss of any other policy.
    double margin = 0.0;
};

/**
 * gamma < 1: Howard policy iteration from the lowest-index policy; unique iff
 * every SAP outside the result has advantage < -1e-9.
 *
 * gamma = 1: exhaustive enumeration. A policy is optimal when its per-state
 * gain is within 1e-9 of the per-state maximum everywhere; the first optimal
 * policy in lexicographic order is returned. Throws UnsupportedSizeError when
 * the policy count exceeds cap.
 */
OptimalPolicy optimal_policy(const MdpModel& model, std::uint64_t cap = kDefaultEnumerationCap);

} // namespace mdpgeom
