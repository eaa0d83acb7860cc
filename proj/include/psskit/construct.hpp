#pragma once

#include <cstdint>
#include <utility>

#include "psskit/combinations.hpp"
#include "psskit/types.hpp"

namespace psskit {

/// {e_1, ..., e_n, -1_n}.
VectorFamily gen_minimal(std::size_t n);

/// {e_1, ..., e_n, -e_1, ..., -e_n}.
VectorFamily gen_maximal(std::size_t n);

/// Seeded random orthogonal matrix with determinant +1 (QR of a standard
/// normal matrix, signs fixed by the diagonal of R).
Matrix random_rotation(std::size_t n, std::uint64_t seed);

/// Random OSPB: the columns of random_rotation(n, seed) are split into
/// consecutive groups of the given sizes and each group q_1..q_l contributes
/// {q_1, ..., q_l, -(q_1 + ... + q_l)}. Blocks appear in order.
VectorFamily gen_ospb(std::size_t n, const std::vector<std::size_t>& block_dims, std::uint64_t seed);

/// Vectors v_1..v_{l+1} in the span of a minimal positive basis with
/// d_i'v_i > 0 and d_i'v_j < 0 for j != i.
std::vector<Vector> separating_vectors(const VectorFamily& minimal_pb, const Tolerances& tol = {});

struct RhoResult {
    double value = 0.0;
    std::vector<std::pair<std::size_t, std::size_t>> skipped_pairs;  // zero projections (i, i')
};

/// Largest cosine between d_i and its projection onto span(D) intersected
/// with the hyperplane orthogonal to v_{i'}, over all pairs (i, i').
RhoResult rho(const VectorFamily& minimal_pb, const std::vector<Vector>& v, const Tolerances& tol = {});

struct RotationPlan {
    std::size_t block_index = 0;
    Matrix plane;                // n x 2, orthonormal, inside the block subspace
    std::vector<double> angles;  // radians, increasing, below acos(rho)
    double rho = 0.0;
    std::vector<Vector> separating_vectors;
    std::vector<std::pair<std::size_t, std::size_t>> skipped_pairs;
    unsigned attempts = 0;  // planes drawn
};

struct BlockRotation {
    RotationPlan plan;
    std::vector<VectorFamily> rotated;  // one family per angle
};

class ConstructionError : public Error {
public:
    enum class Kind { DimOneBlock, RetriesExhausted, NotPss, NotRotation, NotOspb, VerificationFailed };
    ConstructionError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/// Plane rotation by `theta` in the plane spanned by orthonormal columns p, q.
Matrix plane_rotation(const Matrix& plane, double theta);

/// k rotated copies of a minimal positive basis of dimension >= 2 whose union
/// is a positive k-basis of its span. The plane is redrawn (up to
/// `max_retries` times) while some vector barely moves or two outputs are
/// parallel.
BlockRotation rotations_for_block(const VectorFamily& minimal_pb, std::size_t k, std::uint64_t seed,
                                  const Tolerances& tol = {}, unsigned max_retries = 32,
                                  std::size_t block_index = 0);

/// k concatenated copies of a positive spanning set.
VectorFamily build_pkss_copies(const VectorFamily& family, std::size_t k, const Tolerances& tol = {});

/// Union of R_j D over the supplied rotations (orthogonal, determinant +1).
VectorFamily build_pkss_global_rotations(const VectorFamily& family, const std::vector<Matrix>& rotations,
                                         const Tolerances& tol = {});

/// Same with k seeded random rotations.
VectorFamily build_pkss_global_rotations(const VectorFamily& family, std::size_t k, std::uint64_t seed,
                                         const Tolerances& tol = {});

struct BlockwiseBuild {
    VectorFamily family;  // ordered by angle, then block
    std::vector<RotationPlan> plans;
    double cm_k = 0.0;
    double cm_base = 0.0;
};

/// Rotates every block of an OSPB independently. Requires all blocks to have
/// dimension >= 2 and checks the output is a positive k-basis without
/// repeated vectors whose k-cosine measure is at least that of the input.
BlockwiseBuild build_pkbasis_blockwise(const VectorFamily& family, std::size_t k, std::uint64_t seed,
                                       const Tolerances& tol = {}, unsigned max_retries = 32,
                                       const EnumerationOptions& opts = {});

}  // namespace psskit
