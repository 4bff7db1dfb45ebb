#pragma once

#include "mdpgeom/mdp.hpp"

#include <optional>

namespace mdpgeom {

/// Relative pivot threshold below which a dense factorization is singular.
inline constexpr double kSingularPivotRatio = 1e-10;

/// Full-pivot LU of a square matrix with the singularity verdict derived from
/// its pivots: singular iff min |pivot| <= ratio * max |pivot|.
class PivotedLu {
public:
    explicit PivotedLu(const Matrix& A, double ratio = kSingularPivotRatio);

    bool singular() const noexcept { return singular_; }
    double min_pivot() const noexcept { return min_pivot_; }
    double max_pivot() const noexcept { return max_pivot_; }

    /// Requires !singular().
    Vector solve(const Vector& b) const { return lu_.solve(b); }

private:
    Eigen::FullPivLU<Matrix> lu_;
    double min_pivot_ = 0.0;
    double max_pivot_ = 0.0;
    bool singular_ = true;
};

/// max_i |(A x - b)_i|
double residual_inf(const Matrix& A, const Vector& x, const Vector& b);

} // namespace mdpgeom
