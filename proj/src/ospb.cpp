#include "psskit/ospb.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <sstream>

#include "psskit/family.hpp"
#include "psskit/pss_check.hpp"

namespace psskit {

namespace {

std::vector<IndexList> gram_components(const VectorFamily& family, const Tolerances& tol)
{
    const Matrix g = gram(family);
    const std::size_t m = family.size();
    Vector norms = family.matrix().colwise().norm().transpose();

    std::vector<int> label(m, -1);
    std::vector<IndexList> comps;
    for (std::size_t start = 0; start < m; ++start) {
        if (label[start] >= 0)
            continue;
        const int id = static_cast<int>(comps.size());
        comps.emplace_back();
        std::queue<std::size_t> todo;
        todo.push(start);
        label[start] = id;
        while (!todo.empty()) {
            const std::size_t i = todo.front();
            todo.pop();
            comps.back().push_back(i);
            for (std::size_t j = 0; j < m; ++j) {
                if (label[j] >= 0)
                    continue;
                const auto ii = static_cast<Eigen::Index>(i);
                const auto jj = static_cast<Eigen::Index>(j);
                if (std::abs(g(ii, jj)) > tol.zero_tol * norms(ii) * norms(jj)) {
                    label[j] = id;
                    todo.push(j);
                }
            }
        }
        std::sort(comps.back().begin(), comps.back().end());
    }
    // Components were discovered in order of their smallest index.
    return comps;
}

}  // namespace

OspbDetection detect_ospb(const VectorFamily& family, const Tolerances& tol)
{
    tol.validate();
    OspbDetection out;
    const std::size_t n = family.dim();
    const std::size_t m = family.size();

    const Subspace span = span_of(family, tol);
    if (span.dim() != n) {
        out.failure = OspbFailure::NotSpanning;
        out.reason = "family spans a subspace of dimension " + std::to_string(span.dim()) + " < " + std::to_string(n);
        return out;
    }

    const auto comps = gram_components(family, tol);
    if (m < n || comps.size() != m - n) {
        out.failure = OspbFailure::ComponentCount;
        std::ostringstream msg;
        msg << "Gram graph has " << comps.size() << " connected component(s), expected m - n = "
            << static_cast<long long>(m) - static_cast<long long>(n);
        out.reason = msg.str();
        return out;
    }

    OspbDecomposition dec;
    std::size_t dim_sum = 0;
    for (std::size_t c = 0; c < comps.size(); ++c) {
        const VectorFamily block = family.subset(comps[c]);
        Subspace sub = span_of(block, tol);
        if (block.size() != sub.dim() + 1 || !is_positive_basis(block, tol)) {
            out.failure = OspbFailure::BlockNotMinimal;
            std::ostringstream msg;
            msg << "component " << c << " (" << block.size() << " vectors spanning dimension " << sub.dim()
                << ") is not a minimal positive basis of its span";
            out.reason = msg.str();
            return out;
        }
        dim_sum += sub.dim();
        dec.blocks.push_back({comps[c], std::move(sub)});
    }
    if (dim_sum != n) {
        out.failure = OspbFailure::DimensionMismatch;
        out.reason = "block dimensions sum to " + std::to_string(dim_sum) + ", expected " + std::to_string(n);
        return out;
    }
    out.decomposition = std::move(dec);
    return out;
}

void validate_decomposition(const VectorFamily& family, const OspbDecomposition& dec, const Tolerances& tol)
{
    const std::size_t m = family.size();
    std::vector<int> owner(m, -1);
    std::size_t dim_sum = 0;
    for (std::size_t b = 0; b < dec.blocks.size(); ++b) {
        const OspbBlock& blk = dec.blocks[b];
        if (blk.indices.empty())
            throw InvalidDecomposition("decomposition has an empty block");
        for (std::size_t idx : blk.indices) {
            if (idx >= m)
                throw InvalidDecomposition("decomposition index out of range");
            if (owner[idx] >= 0)
                throw InvalidDecomposition("vector " + std::to_string(idx) + " appears in two blocks");
            owner[idx] = static_cast<int>(b);
        }
        if (blk.subspace.ambient_dim() != family.dim())
            throw InvalidDecomposition("block subspace has the wrong ambient dimension");
        if (blk.indices.size() != blk.subspace.dim() + 1)
            throw InvalidDecomposition("block " + std::to_string(b) + " does not have dim + 1 vectors");
        const VectorFamily block = family.subset(blk.indices);
        Matrix coords;
        try {
            coords = coordinates(normalize(block, tol), blk.subspace, tol);
        } catch (const OutsideSubspace& e) {
            throw InvalidDecomposition("block " + std::to_string(b) + ": " + e.what());
        }
        if (!is_pss_coords(coords, blk.subspace.dim(), tol))
            throw InvalidDecomposition("block " + std::to_string(b) + " is not a minimal positive basis");
        dim_sum += blk.subspace.dim();
    }
    if (std::find(owner.begin(), owner.end(), -1) != owner.end())
        throw InvalidDecomposition("decomposition does not cover every vector");
    if (dim_sum != family.dim())
        throw InvalidDecomposition("block dimensions do not sum to the ambient dimension");
    for (std::size_t a = 0; a < dec.blocks.size(); ++a) {
        for (std::size_t b = a + 1; b < dec.blocks.size(); ++b) {
            const Matrix cross = dec.blocks[a].subspace.onb().transpose() * dec.blocks[b].subspace.onb();
            if (cross.size() > 0 && cross.cwiseAbs().maxCoeff() > std::sqrt(tol.zero_tol))
                throw InvalidDecomposition("block subspaces " + std::to_string(a) + " and " + std::to_string(b)
                                           + " are not orthogonal");
        }
    }
}

CosineResult cosine_measure_ospb(const VectorFamily& family, const OspbDecomposition& dec, const Tolerances& tol,
                                 const OspbCosineOptions& opts)
{
    tol.validate();
    validate_decomposition(family, dec, tol);

    struct Deletion {
        std::size_t dropped;  // family index
        double inv_gamma_sq;
        Vector w;             // ambient B^{-T} 1 restricted to the block
    };
    struct BlockResult {
        double beta = 0.0;
        std::vector<Deletion> argmax;
    };

    CosineResult out;
    out.method = "ospb";
    std::vector<BlockResult> blocks;
    for (const OspbBlock& blk : dec.blocks) {
        const Matrix coords = coordinates(normalize(family.subset(blk.indices), tol), blk.subspace, tol);
        const auto dim = static_cast<Eigen::Index>(blk.subspace.dim());
        std::vector<Deletion> all;
        for (Eigen::Index drop = 0; drop <= dim; ++drop) {
            Matrix b(dim, dim);
            for (Eigen::Index j = 0, k = 0; j <= dim; ++j)
                if (j != drop)
                    b.col(k++) = coords.col(j);
            Deletion del;
            del.dropped = blk.indices[static_cast<std::size_t>(drop)];
            if (dim == 1) {
                // Single unit vector: G = [1], so gamma = 1 and B^{-T} 1 = b.
                del.inv_gamma_sq = 1.0;
                del.w = blk.subspace.onb() * b.col(0);
            } else {
                const Vector sv = b.jacobiSvd().singularValues();
                if (sv(dim - 1) <= tol.rank_tol * static_cast<double>(dim) * sv(0))
                    throw InvalidDecomposition("block deletion produced a singular basis");
                const Vector x = (b.transpose() * b).ldlt().solve(Vector::Ones(dim));
                del.inv_gamma_sq = x.sum();
                del.w = blk.subspace.onb() * (b * x);
            }
            ++out.bases_examined;
            all.push_back(std::move(del));
        }
        BlockResult br;
        for (const Deletion& d : all)
            br.beta = std::max(br.beta, d.inv_gamma_sq);
        for (Deletion& d : all)
            if (d.inv_gamma_sq >= br.beta * (1.0 - tol.zero_tol))
                br.argmax.push_back(std::move(d));
        blocks.push_back(std::move(br));
    }

    const double beta_sum = std::accumulate(blocks.begin(), blocks.end(), 0.0,
                                            [](double acc, const BlockResult& b) { return acc + b.beta; });
    out.value = std::clamp(1.0 / std::sqrt(beta_sum), -1.0, 1.0);

    // Odometer over A_1 x ... x A_s in lexicographic order.
    std::vector<std::size_t> pick(blocks.size(), 0);
    std::vector<Vector> raw;
    while (true) {
        if (raw.size() >= opts.max_cosine_vectors) {
            out.truncated = true;
            break;
        }
        Vector u = Vector::Zero(static_cast<Eigen::Index>(family.dim()));
        IndexList dropped;
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            const Deletion& d = blocks[b].argmax[pick[b]];
            u += d.w;
            dropped.push_back(d.dropped);
        }
        std::sort(dropped.begin(), dropped.end());
        out.witness_bases.push_back(complement(family.size(), dropped));
        raw.push_back(u / std::sqrt(beta_sum));

        std::size_t b = blocks.size();
        while (b > 0) {
            --b;
            if (++pick[b] < blocks[b].argmax.size())
                break;
            pick[b] = 0;
            if (b == 0) {
                b = blocks.size() + 1;  // wrapped around: done
                break;
            }
        }
        if (b == blocks.size() + 1 || blocks.empty())
            break;
    }
    out.cosine_vectors = dedupe_unit_vectors(raw, tol);
    return out;
}

}  // namespace psskit
