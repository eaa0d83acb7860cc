#pragma once

#include <optional>

#include "psskit/types.hpp"

namespace psskit {

/// Gram matrix of the family with columns taken in `order` (identity when
/// omitted): entry (i, j) is the dot product of vectors order[i] and order[j].
Matrix gram(const VectorFamily& family, const std::optional<IndexList>& order = std::nullopt);

/// Each vector scaled to unit Euclidean norm, order preserved.
VectorFamily normalize(const VectorFamily& family, const Tolerances& tol = {});

/// Numerical rank of the columns of `m`, decided by singular values.
std::size_t numerical_rank(const Matrix& m, const Tolerances& tol = {});

/// Orthonormal basis of the linear span of the family.
Subspace span_of(const VectorFamily& family, const Tolerances& tol = {});

/// Coordinates of each vector with respect to `sub.onb()`; the result is a
/// sub.dim() x m matrix. Throws OutsideSubspace naming the first vector whose
/// projection residual exceeds zero_tol times its norm.
Matrix coordinates(const VectorFamily& family, const Subspace& sub, const Tolerances& tol = {});

struct PositiveSpanMembership {
    bool member = false;
    Vector coefficients;  // nonnegative minimizer of ||D a - u||
    double residual = 0.0;
};

/// Decides whether u lies in the positive span of the family: the NNLS
/// residual must not exceed zero_tol * max(1, ||u||).
PositiveSpanMembership in_positive_span(const VectorFamily& family, const Vector& u,
                                        const Tolerances& tol = {});

/// Same test on raw columns (which may include the zero vector).
PositiveSpanMembership in_positive_span(const Matrix& columns, const Vector& u, const Tolerances& tol = {});

}  // namespace psskit
