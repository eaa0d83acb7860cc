#include "psskit/pss_check.hpp"

#include <sstream>

#include "psskit/family.hpp"
#include "psskit/lp.hpp"

namespace psskit {

std::string PssCheck::reason() const
{
    std::ostringstream out;
    if (yes)
        out << "positively spanning";
    else if (rank < subspace_dim)
        out << "rank " << rank << " is below subspace dimension " << subspace_dim;
    else if (unreachable)
        out << "negation of vector " << *unreachable << " is not in the positive span";
    else
        out << "not positively spanning";
    return out.str();
}

PssCheck is_pss_coords(const Matrix& unit_coords, std::size_t dim, const Tolerances& tol)
{
    PssCheck out;
    out.subspace_dim = dim;
    out.rank = numerical_rank(unit_coords, tol);
    if (out.rank < dim)
        return out;
    out.coefficients.reserve(static_cast<std::size_t>(unit_coords.cols()));
    for (Eigen::Index j = 0; j < unit_coords.cols(); ++j) {
        const auto hit = in_positive_span(unit_coords, Vector(-unit_coords.col(j)), tol);
        if (!hit.member) {
            out.unreachable = static_cast<std::size_t>(j);
            out.coefficients.clear();
            return out;
        }
        out.coefficients.push_back(hit.coefficients);
    }
    out.yes = true;
    return out;
}

PssCheck is_pss(const VectorFamily& family, const std::optional<Subspace>& sub, const Tolerances& tol)
{
    tol.validate();
    const Subspace target = sub ? *sub : span_of(family, tol);
    const VectorFamily unit = normalize(family, tol);
    const Matrix coords = coordinates(unit, target, tol);

    PssCheck out = is_pss_coords(coords, target.dim(), tol);
    // Rescale certificates so they refer to the caller's vectors:
    // -d_j/|d_j| = sum_i a_i d_i/|d_i|  =>  -d_j = sum_i (a_i |d_j| / |d_i|) d_i.
    for (std::size_t j = 0; j < out.coefficients.size(); ++j) {
        Vector& a = out.coefficients[j];
        const double nj = family.matrix().col(static_cast<Eigen::Index>(j)).norm();
        for (Eigen::Index i = 0; i < a.size(); ++i)
            a(i) *= nj / family.matrix().col(i).norm();
    }
    return out;
}

std::vector<std::size_t> duplicate_classes(const Matrix& columns)
{
    std::vector<std::size_t> ids(static_cast<std::size_t>(columns.cols()));
    for (Eigen::Index j = 0; j < columns.cols(); ++j) {
        ids[static_cast<std::size_t>(j)] = static_cast<std::size_t>(j);
        for (Eigen::Index i = 0; i < j; ++i) {
            if (columns.col(i) == columns.col(j)) {
                ids[static_cast<std::size_t>(j)] = ids[static_cast<std::size_t>(i)];
                break;
            }
        }
    }
    return ids;
}

bool is_positive_basis(const VectorFamily& family, const Tolerances& tol)
{
    tol.validate();
    const Subspace span = span_of(family, tol);
    const Matrix coords = coordinates(normalize(family, tol), span, tol);
    if (!is_pss_coords(coords, span.dim(), tol))
        return false;

    const auto ids = duplicate_classes(family.matrix());
    for (Eigen::Index drop = 0; drop < coords.cols(); ++drop) {
        if (ids[static_cast<std::size_t>(drop)] != static_cast<std::size_t>(drop))
            continue;  // same outcome as removing the first copy
        if (coords.cols() == 1)
            return false;
        Matrix rest(coords.rows(), coords.cols() - 1);
        for (Eigen::Index j = 0, k = 0; j < coords.cols(); ++j)
            if (j != drop)
                rest.col(k++) = coords.col(j);
        if (is_pss_coords(rest, span.dim(), tol))
            return false;
    }
    return true;
}

bool is_positively_independent(const VectorFamily& family, const Tolerances& tol)
{
    tol.validate();
    const Subspace span = span_of(family, tol);
    const Matrix coords = coordinates(normalize(family, tol), span, tol);
    for (Eigen::Index d = 0; d < coords.cols(); ++d) {
        Matrix others(coords.rows(), coords.cols() - 1);
        for (Eigen::Index j = 0, k = 0; j < coords.cols(); ++j)
            if (j != d)
                others.col(k++) = coords.col(j);
        const MarginResult sep = max_separation_margin(coords.col(d), others);
        if (!(sep.margin > tol.zero_tol))
            return false;
    }
    return true;
}

bool is_critical_vector(const VectorFamily& positive_basis, const Vector& c, const Tolerances& tol)
{
    tol.validate();
    if (static_cast<std::size_t>(c.size()) != positive_basis.dim())
        throw InvalidInput("critical vector has the wrong dimension");
    if (!is_positive_basis(positive_basis, tol))
        throw InvalidInput("is_critical_vector requires a positive basis");

    const double scale = positive_basis.matrix().colwise().norm().maxCoeff();
    if (c.norm() <= tol.zero_tol * scale)
        return true;  // the zero vector never helps

    const Subspace span = span_of(positive_basis, tol);
    const double residual = (c - span.onb() * (span.onb().transpose() * c)).norm();
    if (residual > tol.zero_tol * c.norm())
        throw InvalidInput("candidate critical vector lies outside the span of the positive basis");

    for (std::size_t d = 0; d < positive_basis.size(); ++d) {
        if (is_pss(positive_basis.without(d).with(c), span, tol))
            return false;
    }
    return true;
}

}  // namespace psskit
