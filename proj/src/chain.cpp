#include "mdpgeom/chain.hpp"
#include "mdpgeom/linalg.hpp"

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/strong_components.hpp>

#include <algorithm>
#include <map>

namespace mdpgeom {

ChainClassification classify_chain(const Matrix& P) {
    check_stochastic(P);
    const auto n = static_cast<std::size_t>(P.rows());

    using Graph = boost::adjacency_list<boost::vecS, boost::vecS, boost::directedS>;
    Graph g(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (P(i, j) > 0.0) boost::add_edge(i, j, g);

    std::vector<int> component(n);
    const int count = boost::strong_components(g, component.data());

    std::vector<bool> closed(count, true);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (P(i, j) > 0.0 && component[i] != component[j]) closed[component[i]] = false;

    // Group members per component, keyed by their first (smallest) state.
    std::map<int, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < n; ++i) members[component[i]].push_back(i);

    ChainClassification out;
    for (auto& [id, states] : members) {
        if (closed[id])
            out.closed_classes.push_back(states);
        else
            out.transient_states.insert(out.transient_states.end(), states.begin(), states.end());
    }
    std::sort(out.closed_classes.begin(), out.closed_classes.end());
    std::sort(out.transient_states.begin(), out.transient_states.end());
    out.closed_class_count = out.closed_classes.size();
    out.is_unichain = out.closed_class_count == 1;
    return out;
}

bool unichain_by_invertibility(const Matrix& P) {
    return !PivotedLu(geometric_system_matrix(P, 1.0)).singular();
}

unsigned wielandt_bound(std::size_t n) {
    return static_cast<unsigned>(n * n - 2 * n + 2);
}

PrimitivityCertificate primitivity_certificate(const Matrix& P) {
    check_stochastic(P);
    const auto n = P.rows();
    const unsigned bound = wielandt_bound(static_cast<std::size_t>(n));

    // Exact support pattern of P^k; the numeric power only supplies omega.
    using Pattern = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;
    const Pattern base = (P.array() > 0.0).matrix();
    Pattern support = base;
    Matrix power = P;
    for (unsigned k = 1; k <= bound; ++k) {
        if (support.all()) {
            if (!(power.minCoeff() > 0.0)) throw InternalError("numeric power underflowed on a positive pattern");
            return {k, power.minCoeff()};
        }
        Pattern next = Pattern::Constant(n, n, false);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index m = 0; m < n; ++m)
                if (support(i, m))
                    for (Eigen::Index j = 0; j < n; ++j) next(i, j) = next(i, j) || base(m, j);
        support = std::move(next);
        power = power * P;
    }
    throw NotPrimitiveError("no power P^k with k <= " + std::to_string(bound) + " is entrywise positive");
}

Vector stationary_distribution(const Matrix& P) {
    if (!classify_chain(P).is_unichain) throw NotUnichainError("stationary distribution is not unique: multichain kernel");
    const auto n = P.rows();
    Matrix A(n + 1, n);
    A.topRows(n) = P.transpose() - Matrix::Identity(n, n);
    A.row(n).setOnes();
    Vector b = Vector::Zero(n + 1);
    b(n) = 1.0;
    Vector mu = A.colPivHouseholderQr().solve(b);
    const double residual = (P.transpose() * mu - mu).cwiseAbs().maxCoeff();
    if (residual > 1e-10) throw InternalError("stationary distribution residual " + std::to_string(residual));
    return mu;
}

} // namespace mdpgeom
