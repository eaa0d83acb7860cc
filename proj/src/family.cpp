#include "psskit/family.hpp"

#include <algorithm>
#include <sstream>

#include "psskit/nnls.hpp"

namespace psskit {

Matrix gram(const VectorFamily& family, const std::optional<IndexList>& order)
{
    if (!order)
        return family.matrix().transpose() * family.matrix();

    const IndexList& perm = *order;
    if (perm.size() != family.size())
        throw InvalidInput("gram: order must list every vector exactly once");
    std::vector<bool> seen(family.size(), false);
    for (std::size_t idx : perm) {
        if (idx >= family.size() || seen[idx])
            throw InvalidInput("gram: order is not a permutation");
        seen[idx] = true;
    }
    const Matrix cols = family.subset(perm).matrix();
    return cols.transpose() * cols;
}

VectorFamily normalize(const VectorFamily& family, const Tolerances& tol)
{
    Matrix m = family.matrix();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        const double norm = m.col(j).norm();
        if (norm <= tol.zero_tol) {
            std::ostringstream msg;
            msg << "normalize: vector " << j << " has norm " << norm;
            throw InvalidInput(msg.str());
        }
        m.col(j) /= norm;
    }
    return VectorFamily(std::move(m));
}

std::size_t numerical_rank(const Matrix& m, const Tolerances& tol)
{
    if (m.rows() == 0 || m.cols() == 0)
        return 0;
    Eigen::JacobiSVD<Matrix> svd(m);
    const Vector& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0)
        return 0;
    const double cutoff = tol.rank_tol * static_cast<double>(std::max(m.rows(), m.cols())) * sv(0);
    std::size_t rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff)
            ++rank;
    return rank;
}

Subspace span_of(const VectorFamily& family, const Tolerances& tol)
{
    // Normalizing first keeps the rank decision independent of vector scales.
    const Matrix cols = normalize(family, tol).matrix();
    Eigen::JacobiSVD<Matrix> svd(cols, Eigen::ComputeThinU);
    const std::size_t rank = numerical_rank(cols, tol);
    return Subspace(family.dim(), svd.matrixU().leftCols(static_cast<Eigen::Index>(rank)));
}

Matrix coordinates(const VectorFamily& family, const Subspace& sub, const Tolerances& tol)
{
    if (sub.ambient_dim() != family.dim())
        throw InvalidInput("coordinates: subspace and family have different ambient dimensions");
    const Matrix& q = sub.onb();
    const Matrix coords = q.transpose() * family.matrix();
    for (Eigen::Index j = 0; j < coords.cols(); ++j) {
        const double norm = family.matrix().col(j).norm();
        const double residual = (family.matrix().col(j) - q * coords.col(j)).norm();
        if (residual > tol.zero_tol * norm) {
            std::ostringstream msg;
            msg << "vector " << j << " lies outside the subspace (relative residual " << residual / norm << ")";
            throw OutsideSubspace(static_cast<std::size_t>(j), msg.str());
        }
    }
    return coords;
}

PositiveSpanMembership in_positive_span(const Matrix& columns, const Vector& u, const Tolerances& tol)
{
    if (columns.rows() != u.size())
        throw InvalidInput("in_positive_span: vector has the wrong dimension");
    const NnlsResult sol = nnls(columns, u);
    PositiveSpanMembership out;
    out.residual = sol.residual;
    out.member = sol.residual <= tol.zero_tol * std::max(1.0, u.norm());
    if (out.member)
        out.coefficients = sol.x;
    return out;
}

PositiveSpanMembership in_positive_span(const VectorFamily& family, const Vector& u, const Tolerances& tol)
{
    return in_positive_span(family.matrix(), u, tol);
}

}  // namespace psskit
