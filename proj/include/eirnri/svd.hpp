#pragma once

#include "eirnri/types.hpp"

namespace eirnri {

/// Thin SVD with singular values sorted non-increasingly:
/// a = u * s.asDiagonal() * v.transpose(), u is m x k and v is n x k
/// with k = min(m, n), both column-orthonormal.
struct ThinSvd {
    Matrix u;
    Vector s;
    Matrix v;

    Matrix reconstruct() const { return u * s.asDiagonal() * v.transpose(); }
};

/// Full thin SVD of a dense matrix, values descending.
/// Throws NumericalError if the backend fails to converge.
ThinSvd svd_ordered(const Matrix& a);

enum class RankMode {
    exact_zero,  // post-threshold vectors: count entries > 0 exactly
    relative     // raw SVD output: count entries > 1e-12 * s(0)
};

/// Number of positive singular values of a non-increasing vector.
int rank_of(const Vector& s, RankMode mode);

}  // namespace eirnri
