#pragma once

#include "mdpgeom/io.hpp"
#include "mdpgeom/mdp.hpp"

#include <random>

namespace mdpgeom::testing {

inline Sap sap(std::size_t state, double reward, std::vector<double> probs) {
    return Sap{state, reward, std::move(probs)};
}

/// s0 -> s1 (r = 2), s1 -> s0 (r = 0).
inline MdpModel swap_model(double gamma = 1.0) {
    return MdpModel(2, {sap(0, 2.0, {0, 1}), sap(1, 0.0, {1, 0})}, gamma);
}

/// swap_model plus a self-loop at s0 with reward 0.5 (SAP index 2).
inline MdpModel swap_with_loop(double gamma = 1.0) {
    return MdpModel(2, {sap(0, 2.0, {0, 1}), sap(1, 0.0, {1, 0}), sap(0, 0.5, {1, 0})}, gamma);
}

/// Two self-loops with rewards (1, 0).
inline MdpModel two_loops(double gamma) {
    return MdpModel(2, {sap(0, 1.0, {1, 0}), sap(1, 0.0, {0, 1})}, gamma);
}

inline Policy policy(std::vector<std::size_t> c) { return Policy{std::move(c)}; }

inline Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
    Matrix M(rows.size(), rows.begin()->size());
    Eigen::Index i = 0;
    for (auto r : rows) {
        Eigen::Index j = 0;
        for (double x : r) M(i, j++) = x;
        ++i;
    }
    return M;
}

/// Random row-stochastic matrix; each entry zeroed with probability `sparsity`
/// (a zero row gets a random positive entry).
inline Matrix random_stochastic(std::mt19937_64& rng, Eigen::Index n, double sparsity) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
    Matrix P(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double sum = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            P(i, j) = u(rng) < sparsity ? 0.0 : 1.0 - u(rng);
            sum += P(i, j);
        }
        if (sum == 0.0) {
            P(i, pick(rng)) = 1.0;
            sum = 1.0;
        }
        P.row(i) /= sum;
    }
    return P;
}

inline MdpModel random_model(std::uint64_t seed, std::size_t n, std::size_t k, double gamma, double sparsity) {
    GeneratorSpec spec;
    spec.n = n;
    spec.saps_per_state = k;
    spec.gamma = gamma;
    spec.sparsity = sparsity;
    spec.reward_lo = -1.0;
    spec.reward_hi = 1.0;
    spec.seed = seed;
    return generate_model(spec).model;
}

} // namespace mdpgeom::testing
