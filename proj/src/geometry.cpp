#include "mdpgeom/geometry.hpp"
#include "mdpgeom/linalg.hpp"

#include <cassert>
#include <cmath>

namespace mdpgeom {

double geometry_constant(std::size_t n, double gamma) {
    return static_cast<double>(n) * gamma + (1.0 - gamma);
}

ActionVector action_vector(const MdpModel& model, std::size_t sap_index) {
    const auto& a = model.sap(sap_index);
    const auto n = model.num_states();
    const double g = model.gamma();
    const double C = geometry_constant(n, g);
    ActionVector out{a.reward, Vector(n)};
    for (std::size_t i = 0; i < n; ++i) out.coeffs(i) = (g * a.probs[i] - g) / C;
    out.coeffs(a.state) -= 1.0 / C;
    return out;
}

Vector PolicyVector::augmented() const {
    Vector out(values.size() + 1);
    out(0) = 1.0;
    out.tail(values.size()) = values;
    return out;
}

NewEvaluation evaluate_policy_new(const MdpModel& model, const Policy& pi) {
    const Matrix P = policy_kernel(model, pi);
    const Vector R = policy_rewards(model, pi);
    const double g = model.gamma();
    const double C = geometry_constant(model.num_states(), g);

    const Matrix A = geometric_system_matrix(P, g);
    PivotedLu lu(A);
    if (lu.singular()) {
        if (model.is_average_reward())
            throw NotUnichainError("policy " + to_string(pi) + " induces a multichain kernel: I + E - P is singular");
        throw InternalError("I + E - gamma P singular at gamma < 1");
    }
    const Vector scaled = lu.solve(R);
    const double residual = residual_inf(A, scaled, R);
    if (!(residual <= 1e-10 * (1.0 + R.cwiseAbs().maxCoeff())))
        throw InternalError("policy evaluation residual " + std::to_string(residual));

    NewEvaluation out;
    out.vector.values = C * scaled;
    out.constants = {C, out.vector.values.sum(), g};
    return out;
}

double advantage(const ActionVector& av, const PolicyVector& pv) {
    if (av.coeffs.size() != pv.values.size())
        throw DomainError("advantage: action vector has " + std::to_string(av.coeffs.size()) +
                          " coefficients, policy vector " + std::to_string(pv.values.size()));
    return av.height + av.coeffs.dot(pv.values);
}

double advantage(const MdpModel& model, std::size_t sap_index, const PolicyVector& pv) {
    if (pv.values.size() != static_cast<Eigen::Index>(model.num_states()))
        throw DomainError("advantage: policy vector dimension does not match model");
    return advantage(action_vector(model, sap_index), pv);
}

ValueVector classical_from_new(const PolicyVector& pv, const GeometryConstants& consts, const MdpModel& model) {
    if (consts.gamma >= 1.0) throw CriterionMismatchError("classical discounted values need gamma < 1");
    if (pv.values.size() != static_cast<Eigen::Index>(model.num_states()))
        throw DomainError("classical_from_new: dimension mismatch");
    const double shift = consts.gamma * consts.v_sigma / (consts.C * (1.0 - consts.gamma));
    return {(pv.values / consts.C).array() + shift, Criterion::DiscountedClassical};
}

double gain_from_new(const GeometryConstants& consts) {
    if (consts.gamma != 1.0) throw CriterionMismatchError("gain is defined for gamma = 1 only");
    return consts.v_sigma / consts.C;
}

ValueVector bias_from_new(const PolicyVector& pv, const GeometryConstants& consts, std::size_t anchor_state) {
    if (consts.gamma != 1.0) throw CriterionMismatchError("bias is defined for gamma = 1 only");
    if (anchor_state >= static_cast<std::size_t>(pv.values.size())) throw DomainError("anchor state out of range");
    const Vector scaled = pv.values / consts.C;
    return {scaled.array() - scaled(anchor_state), Criterion::AverageBias};
}

MdpModel normalize_mdp(const MdpModel& model, const Policy& pi_star) {
    const auto eval = evaluate_policy_new(model, pi_star);
    std::vector<double> rewards(model.num_saps());
    for (std::size_t a = 0; a < model.num_saps(); ++a) rewards[a] = advantage(model, a, eval.vector);
    return model.with_rewards(rewards);
}

} // namespace mdpgeom
