#pragma once

#include "mdpgeom/mdp.hpp"

#include <cstddef>

namespace mdpgeom {

/// MDP constant C = n*gamma + (1 - gamma).
double geometry_constant(std::size_t n, double gamma);

/**
 * Action vector a+ = (r^a, c^a_1, ..., c^a_n) of a SAP a at state s:
 *
 *   c^a_i = (gamma p^a_i - gamma) / C        for i != s
 *   c^a_s = (gamma p^a_s - gamma - 1) / C
 *
 * so that sum_i c^a_i = -1 for every gamma in (0, 1].
 */
struct ActionVector {
    double height = 0.0;
    Vector coeffs;
};

ActionVector action_vector(const MdpModel& model, std::size_t sap_index);

/// Policy vector v+ = (1, v(1), ..., v(n)); the leading 1 is implicit.
struct PolicyVector {
    Vector values;

    /// The full (n+1)-vector with the leading 1.
    Vector augmented() const;
};

struct GeometryConstants {
    double C = 1.0;
    double v_sigma = 0.0;
    double gamma = 1.0;
};

struct NewEvaluation {
    PolicyVector vector;
    GeometryConstants constants;
};

/// Solves (I + gamma E - gamma P^pi)(v / C) = R^pi. At gamma = 1 a singular system
/// means pi is multichain and raises NotUnichainError.
NewEvaluation evaluate_policy_new(const MdpModel& model, const Policy& pi);

/// Inner product a+ . v+ = r^a + sum_i c^a_i v(i).
double advantage(const MdpModel& model, std::size_t sap_index, const PolicyVector& pv);
double advantage(const ActionVector& av, const PolicyVector& pv);

/// Classical discounted values V(s) = v(s)/C + gamma v_sigma / (C (1 - gamma)).
ValueVector classical_from_new(const PolicyVector& pv, const GeometryConstants& consts, const MdpModel& model);

/// Gain rho = v_sigma / C (gamma = 1 only).
double gain_from_new(const GeometryConstants& consts);

/// Bias representative v/C shifted so that h(anchor) = 0 (gamma = 1 only).
ValueVector bias_from_new(const PolicyVector& pv, const GeometryConstants& consts, std::size_t anchor_state = 0);

/// Replaces every reward by that SAP's advantage with respect to pi_star.
MdpModel normalize_mdp(const MdpModel& model, const Policy& pi_star);

} // namespace mdpgeom
