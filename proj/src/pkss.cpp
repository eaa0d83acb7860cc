#include "psskit/pkss.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "psskit/cosine.hpp"
#include "psskit/family.hpp"
#include "psskit/lp.hpp"
#include "psskit/pss_check.hpp"

namespace psskit {

namespace {

Matrix take_columns(const Matrix& m, const IndexList& idx)
{
    Matrix out(m.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j)
        out.col(static_cast<Eigen::Index>(j)) = m.col(static_cast<Eigen::Index>(idx[j]));
    return out;
}

// Subsets of size m-k+1 in lexicographic order, grouped by the multiset of
// duplicate classes they contain. Subsets in a group share every result.
struct SubsetTable {
    std::vector<IndexList> subsets;
    std::vector<std::size_t> group;          // subset -> representative slot
    std::vector<std::size_t> representative;  // slot -> first subset index
};

SubsetTable subset_table(const Matrix& columns, std::size_t k, const EnumerationOptions& opts)
{
    const std::size_t m = static_cast<std::size_t>(columns.cols());
    const std::size_t size = m - k + 1;
    const std::uint64_t total = binomial(m, size);
    if (opts.max_subsets != 0 && total > opts.max_subsets) {
        std::ostringstream msg;
        msg << "k-subset enumeration needs " << total << " subsets, above the cap of " << opts.max_subsets;
        throw Truncated(msg.str());
    }
    const auto ids = duplicate_classes(columns);
    SubsetTable t;
    std::map<IndexList, std::size_t> slots;
    for_each_combination(m, size, [&](const IndexList& s) {
        IndexList key;
        key.reserve(s.size());
        for (std::size_t i : s)
            key.push_back(ids[i]);
        std::sort(key.begin(), key.end());
        auto [it, fresh] = slots.emplace(std::move(key), t.representative.size());
        if (fresh)
            t.representative.push_back(t.subsets.size());
        t.group.push_back(it->second);
        t.subsets.push_back(s);
        return true;
    });
    return t;
}

struct Prepared {
    Subspace target;
    Matrix coords;  // unit coordinates in target
};

Prepared prepare(const VectorFamily& family, const std::optional<Subspace>& sub, const Tolerances& tol)
{
    tol.validate();
    Prepared p;
    p.target = sub ? *sub : span_of(family, tol);
    p.coords = coordinates(normalize(family, tol), p.target, tol);
    return p;
}

PkssCheck pkss_coords(const Matrix& coords, std::size_t dim, std::size_t k, const Tolerances& tol,
                      const EnumerationOptions& opts)
{
    const SubsetTable t = subset_table(coords, k, opts);
    const auto ok = parallel_map<char>(t.representative.size(), opts.jobs, [&](std::size_t slot) -> char {
        return is_pss_coords(take_columns(coords, t.subsets[t.representative[slot]]), dim, tol).yes ? 1 : 0;
    });
    PkssCheck out;
    for (std::size_t s = 0; s < t.subsets.size(); ++s) {
        if (!ok[t.group[s]]) {
            out.failing_subset = t.subsets[s];
            return out;
        }
    }
    out.yes = true;
    return out;
}

}  // namespace

void check_k(std::size_t k, std::size_t m)
{
    if (k < 1 || k > m) {
        std::ostringstream msg;
        msg << "k = " << k << " must satisfy 1 <= k <= " << m;
        throw InvalidInput(msg.str());
    }
}

bool k_span_equals(const VectorFamily& family, std::size_t k, const std::optional<Subspace>& sub,
                   const Tolerances& tol, const EnumerationOptions& opts)
{
    check_k(k, family.size());
    const Prepared p = prepare(family, sub, tol);
    const SubsetTable t = subset_table(p.coords, k, opts);
    const auto ok = parallel_map<char>(t.representative.size(), opts.jobs, [&](std::size_t slot) -> char {
        return numerical_rank(take_columns(p.coords, t.subsets[t.representative[slot]]), tol) == p.target.dim();
    });
    return std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; });
}

PkssCheck is_pkss(const VectorFamily& family, std::size_t k, const std::optional<Subspace>& sub,
                  const Tolerances& tol, const EnumerationOptions& opts)
{
    check_k(k, family.size());
    const Prepared p = prepare(family, sub, tol);
    return pkss_coords(p.coords, p.target.dim(), k, tol, opts);
}

KCosineResult k_cosine_measure(const VectorFamily& family, std::size_t k, const std::optional<Subspace>& sub,
                               const Tolerances& tol, const EnumerationOptions& opts)
{
    check_k(k, family.size());
    const Prepared p = prepare(family, sub, tol);
    const SubsetTable t = subset_table(p.coords, k, opts);
    const std::size_t dim = p.target.dim();

    KCosineResult out;
    out.subsets_examined = t.subsets.size();

    const auto ok = parallel_map<char>(t.representative.size(), opts.jobs, [&](std::size_t slot) -> char {
        return is_pss_coords(take_columns(p.coords, t.subsets[t.representative[slot]]), dim, tol).yes ? 1 : 0;
    });
    for (std::size_t s = 0; s < t.subsets.size(); ++s) {
        if (!ok[t.group[s]]) {
            out.status = KStatus::NotPositive;
            out.certificate = t.subsets[s];
            return out;
        }
    }

    EnumerationOptions inner = opts;
    inner.jobs = 1;
    const auto cms = parallel_map<CosineResult>(t.representative.size(), opts.jobs, [&](std::size_t slot) {
        return detail::enumerate_bases(take_columns(p.coords, t.subsets[t.representative[slot]]), p.target.onb(),
                                       tol, inner);
    });

    double best = std::numeric_limits<double>::infinity();
    for (const CosineResult& r : cms)
        best = std::min(best, r.value);

    std::vector<Vector> vectors;
    std::vector<char> used(cms.size(), 0);
    for (std::size_t s = 0; s < t.subsets.size(); ++s) {
        const std::size_t slot = t.group[s];
        if (cms[slot].value > best + tol.zero_tol)
            continue;
        out.witness_subsets.push_back(t.subsets[s]);
        if (!used[slot]) {
            used[slot] = 1;
            vectors.insert(vectors.end(), cms[slot].cosine_vectors.begin(), cms[slot].cosine_vectors.end());
        }
    }
    out.status = KStatus::Positive;
    out.value = best;
    out.witness_vectors = dedupe_unit_vectors(vectors, tol);
    return out;
}

double kth_largest_cosine(const Vector& u, const VectorFamily& family, std::size_t k)
{
    check_k(k, family.size());
    if (static_cast<std::size_t>(u.size()) != family.dim())
        throw InvalidInput("kth_largest_cosine: dimension mismatch");
    std::vector<double> cos(family.size());
    for (std::size_t j = 0; j < family.size(); ++j) {
        const auto col = family.matrix().col(static_cast<Eigen::Index>(j));
        cos[j] = u.dot(col) / col.norm();
    }
    std::nth_element(cos.begin(), cos.begin() + static_cast<std::ptrdiff_t>(k - 1), cos.end(), std::greater<>());
    return cos[k - 1];
}

bool is_positive_k_basis(const VectorFamily& family, std::size_t k, const Tolerances& tol,
                         const EnumerationOptions& opts)
{
    check_k(k, family.size());
    const Prepared p = prepare(family, std::nullopt, tol);
    const std::size_t dim = p.target.dim();
    if (!pkss_coords(p.coords, dim, k, tol, opts))
        return false;
    if (family.size() == k)
        return true;  // nothing left to delete into a smaller PkSS

    const auto ids = duplicate_classes(family.matrix());
    for (std::size_t drop = 0; drop < family.size(); ++drop) {
        if (ids[drop] != drop)
            continue;
        IndexList rest = complement(family.size(), {drop});
        if (rest.size() < k)
            continue;
        if (pkss_coords(take_columns(p.coords, rest), dim, k, tol, opts))
            return false;
    }
    return true;
}

bool is_positively_k_independent(const VectorFamily& family, std::size_t k, const Tolerances& tol)
{
    check_k(k, family.size());
    const Prepared p = prepare(family, std::nullopt, tol);
    const std::size_t m = family.size();
    std::vector<char> covered(m, 0);
    for (std::size_t d = 0; d < m; ++d) {
        if (covered[d])
            continue;
        // k-subsets of the remaining indices, each completed with d.
        IndexList others = complement(m, {d});
        bool found = false;
        for_each_combination(others.size(), k - 1, [&](const IndexList& pick) {
            IndexList in{d};
            for (std::size_t i : pick)
                in.push_back(others[i]);
            std::sort(in.begin(), in.end());
            const MarginResult sep = max_separation_margin(take_columns(p.coords, in),
                                                           take_columns(p.coords, complement(m, in)));
            if (sep.margin > tol.zero_tol) {
                for (std::size_t i : in)
                    covered[i] = 1;
                found = true;
                return false;
            }
            return true;
        });
        if (!found)
            return false;
    }
    return true;
}

}  // namespace psskit
