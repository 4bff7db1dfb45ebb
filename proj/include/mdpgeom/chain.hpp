#pragma once

#include "mdpgeom/mdp.hpp"

#include <cstddef>
#include <vector>

namespace mdpgeom {

struct ChainClassification {
    std::size_t closed_class_count = 0;
    /// Closed communicating classes, each sorted, ordered by smallest member.
    std::vector<std::vector<std::size_t>> closed_classes;
    std::vector<std::size_t> transient_states;
    bool is_unichain = false;
};

/// Closed classes of the support digraph (edge i -> j iff P(i,j) > 0).
ChainClassification classify_chain(const Matrix& P);

/// Unichain test through invertibility of I + E - P (relative pivot threshold
/// 1e-10). Independent of classify_chain.
bool unichain_by_invertibility(const Matrix& P);

/// Smallest N with P^N entrywise positive and omega = min entry of P^N.
struct PrimitivityCertificate {
    unsigned exponent = 1;
    double omega = 0.0;
};

/// Wielandt bound n^2 - 2n + 2 on the index of primitivity.
unsigned wielandt_bound(std::size_t n);

/// Throws NotPrimitiveError if no power up to the Wielandt bound is positive.
PrimitivityCertificate primitivity_certificate(const Matrix& P);

/// Unique invariant distribution of a unichain kernel (row vector as a column).
/// Throws NotUnichainError on multichain input.
Vector stationary_distribution(const Matrix& P);

} // namespace mdpgeom
