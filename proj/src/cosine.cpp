#include "psskit/cosine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "psskit/family.hpp"

namespace psskit {

NotPositivelySpanning::NotPositivelySpanning(PssCheck check)
    : Error("family is not positively spanning: " + check.reason()), check_(std::move(check))
{
}

GammaU gamma_u(const Matrix& unit_basis, const Tolerances& tol)
{
    if (unit_basis.rows() != unit_basis.cols() || unit_basis.rows() == 0)
        throw SingularBasis("gamma_u: basis matrix must be square and nonempty");
    const Eigen::Index dim = unit_basis.rows();
    const Vector sv = unit_basis.jacobiSvd().singularValues();
    if (sv(dim - 1) <= tol.rank_tol * static_cast<double>(dim) * sv(0))
        throw SingularBasis("gamma_u: basis is numerically singular");

    const Matrix g = unit_basis.transpose() * unit_basis;
    const Vector x = g.ldlt().solve(Vector::Ones(dim));
    const double s = x.sum();
    if (!(s > 0.0))
        throw SingularBasis("gamma_u: Gram system is not positive definite");
    GammaU out;
    out.gamma = 1.0 / std::sqrt(s);
    out.u = out.gamma * (unit_basis * x);
    return out;
}

GammaU gamma_u(const VectorFamily& basis, const Tolerances& tol)
{
    tol.validate();
    const Subspace span = span_of(basis, tol);
    if (span.dim() != basis.size())
        throw SingularBasis("gamma_u: vectors are linearly dependent");
    const Matrix coords = coordinates(normalize(basis, tol), span, tol);
    GammaU out = gamma_u(coords, tol);
    out.u = span.onb() * out.u;
    return out;
}

double max_cosine(const Vector& u, const VectorFamily& family)
{
    const Matrix& d = family.matrix();
    double best = -std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < d.cols(); ++j)
        best = std::max(best, u.dot(d.col(j)) / d.col(j).norm());
    return best;
}

std::vector<Vector> dedupe_unit_vectors(const std::vector<Vector>& vectors, const Tolerances& tol)
{
    std::vector<Vector> out;
    for (const Vector& v : vectors) {
        const bool seen = std::any_of(out.begin(), out.end(), [&](const Vector& w) {
            return 1.0 - v.dot(w) / (v.norm() * w.norm()) <= tol.dedupe_tol;
        });
        if (!seen)
            out.push_back(v);
    }
    return out;
}

bool same_vector_set(const std::vector<Vector>& a, const std::vector<Vector>& b, const Tolerances& tol)
{
    const auto da = dedupe_unit_vectors(a, tol);
    const auto db = dedupe_unit_vectors(b, tol);
    if (da.size() != db.size())
        return false;
    auto contains = [&](const std::vector<Vector>& set, const Vector& v) {
        return std::any_of(set.begin(), set.end(), [&](const Vector& w) {
            return 1.0 - v.dot(w) / (v.norm() * w.norm()) <= tol.dedupe_tol;
        });
    };
    return std::all_of(da.begin(), da.end(), [&](const Vector& v) { return contains(db, v); })
           && std::all_of(db.begin(), db.end(), [&](const Vector& v) { return contains(da, v); });
}

namespace detail {

namespace {

struct BasisEval {
    bool singular = true;
    double value = 0.0;
    Vector u;
};

}  // namespace

CosineResult enumerate_bases(const Matrix& unit_coords, const Matrix& onb, const Tolerances& tol,
                             const EnumerationOptions& opts)
{
    const std::size_t m = static_cast<std::size_t>(unit_coords.cols());
    const std::size_t dim = static_cast<std::size_t>(unit_coords.rows());
    const std::uint64_t total = binomial(m, dim);
    if (opts.max_subsets != 0 && total > opts.max_subsets) {
        std::ostringstream msg;
        msg << "basis enumeration needs " << total << " subsets, above the cap of " << opts.max_subsets;
        throw Truncated(msg.str());
    }

    const std::vector<IndexList> subsets = all_combinations(m, dim);
    const auto evals = parallel_map<BasisEval>(subsets.size(), opts.jobs, [&](std::size_t s) {
        BasisEval e;
        Matrix b(unit_coords.rows(), static_cast<Eigen::Index>(dim));
        for (std::size_t j = 0; j < dim; ++j)
            b.col(static_cast<Eigen::Index>(j)) = unit_coords.col(static_cast<Eigen::Index>(subsets[s][j]));
        try {
            GammaU g = gamma_u(b, tol);
            e.singular = false;
            e.value = (unit_coords.transpose() * g.u).maxCoeff();
            e.u = std::move(g.u);
        } catch (const SingularBasis&) {
            e.singular = true;
        }
        return e;
    });

    CosineResult out;
    out.method = "generic";
    double best = std::numeric_limits<double>::infinity();
    for (const BasisEval& e : evals) {
        if (e.singular) {
            ++out.singular_skipped;
            continue;
        }
        ++out.bases_examined;
        best = std::min(best, e.value);
    }
    if (out.bases_examined == 0)
        throw SingularBasis("family contains no linear basis of the subspace");

    std::vector<Vector> witnesses;
    for (std::size_t s = 0; s < evals.size(); ++s) {
        if (evals[s].singular || evals[s].value > best + tol.zero_tol)
            continue;
        out.witness_bases.push_back(subsets[s]);
        witnesses.push_back(onb * evals[s].u);
    }
    out.value = std::clamp(best, -1.0, 1.0);
    out.cosine_vectors = dedupe_unit_vectors(witnesses, tol);
    return out;
}

}  // namespace detail

CosineResult cosine_measure_generic(const VectorFamily& family, const std::optional<Subspace>& sub,
                                    const Tolerances& tol, const EnumerationOptions& opts)
{
    tol.validate();
    const Subspace target = sub ? *sub : span_of(family, tol);
    PssCheck check = is_pss(family, target, tol);
    if (!check)
        throw NotPositivelySpanning(std::move(check));
    const Matrix coords = coordinates(normalize(family, tol), target, tol);
    return detail::enumerate_bases(coords, target.onb(), tol, opts);
}

}  // namespace psskit
