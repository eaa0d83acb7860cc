#pragma once

#include <optional>
#include <string>

#include "psskit/cosine.hpp"
#include "psskit/types.hpp"

namespace psskit {

/// One minimal positive basis of the decomposition: indices into the family
/// (sorted) and an orthonormal basis of the subspace they span.
struct OspbBlock {
    IndexList indices;
    Subspace subspace;
};

/// Partition of an orthogonally structured positive basis into minimal
/// positive bases of pairwise orthogonal subspaces. Blocks are ordered by
/// their smallest member index.
struct OspbDecomposition {
    std::vector<OspbBlock> blocks;
    std::size_t s() const noexcept { return blocks.size(); }
};

enum class OspbFailure {
    None,
    NotSpanning,         // family does not span R^n
    ComponentCount,      // Gram graph components != m - n
    BlockNotMinimal,     // a component is not a minimal positive basis of its span
    DimensionMismatch,   // block dimensions do not add up to n
};

struct OspbDetection {
    std::optional<OspbDecomposition> decomposition;
    OspbFailure failure = OspbFailure::None;
    std::string reason;

    explicit operator bool() const noexcept { return decomposition.has_value(); }
};

/// Splits the Gram-matrix sparsity graph (edge when |d_i'd_j| exceeds
/// zero_tol * |d_i| |d_j|) into connected components and checks that they
/// form an OSPB decomposition. Failure is reported, not thrown.
OspbDetection detect_ospb(const VectorFamily& family, const Tolerances& tol = {});

class InvalidDecomposition : public Error {
public:
    using Error::Error;
};

/// Throws InvalidDecomposition unless `dec` is an OSPB decomposition of `family`.
void validate_decomposition(const VectorFamily& family, const OspbDecomposition& dec, const Tolerances& tol = {});

struct OspbCosineOptions {
    std::size_t max_cosine_vectors = 10000;
};

/// Cosine measure of an OSPB from its decomposition, evaluating exactly
/// |D| = n + s bases: per block the largest gamma^{-2} over element deletions,
/// combined as 1/sqrt(sum of block maxima). The cosine vector set is assembled
/// from the Cartesian product of the per-block maximizers, capped by
/// `max_cosine_vectors` (CosineResult::truncated is set when the cap bites).
CosineResult cosine_measure_ospb(const VectorFamily& family, const OspbDecomposition& dec,
                                 const Tolerances& tol = {}, const OspbCosineOptions& opts = {});

}  // namespace psskit
