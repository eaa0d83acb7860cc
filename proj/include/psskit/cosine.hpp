#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "psskit/combinations.hpp"
#include "psskit/pss_check.hpp"
#include "psskit/types.hpp"

namespace psskit {

/// gamma_B and u_B of a linear basis B: u_B is the unique unit vector making
/// the same cosine gamma_B with every element of B.
struct GammaU {
    double gamma = 0.0;
    Vector u;
};

/// Square matrix of unit columns (coordinates of a basis). Solves G x = 1 with
/// G = B'B; gamma = 1/sqrt(1'x) and u = gamma * B x (= gamma * B^{-T} 1).
/// Throws SingularBasis when B is numerically singular.
GammaU gamma_u(const Matrix& unit_basis, const Tolerances& tol = {});

/// Family forming a linear basis of its span; vectors are normalized first and
/// u is returned in ambient coordinates.
GammaU gamma_u(const VectorFamily& basis, const Tolerances& tol = {});

struct BasisCertificate {
    IndexList indices;
    double gamma = 0.0;
    Vector u;  // subspace coordinates
};

struct CosineResult {
    double value = 0.0;
    std::vector<Vector> cosine_vectors;  // ambient coordinates, deduplicated
    std::vector<IndexList> witness_bases;
    std::uint64_t bases_examined = 0;    // invertible subsets evaluated
    std::uint64_t singular_skipped = 0;  // subsets rejected by the rank test
    bool truncated = false;              // cosine vector set hit its cap
    std::string method;
};

class NotPositivelySpanning : public Error {
public:
    explicit NotPositivelySpanning(PssCheck check);
    const PssCheck& check() const noexcept { return check_; }

private:
    PssCheck check_;
};

/// Cosine measure by enumerating every linear basis contained in the family:
/// min over bases B of max_d u_B'd/|d|. The family must positively span `sub`
/// (its own span when omitted); otherwise NotPositivelySpanning is thrown.
CosineResult cosine_measure_generic(const VectorFamily& family, const std::optional<Subspace>& sub = std::nullopt,
                                    const Tolerances& tol = {}, const EnumerationOptions& opts = {});

/// max_d u'd/|d| for a unit vector u.
double max_cosine(const Vector& u, const VectorFamily& family);

/// Drops vectors within dedupe_tol (1 - cos) of an earlier one.
std::vector<Vector> dedupe_unit_vectors(const std::vector<Vector>& vectors, const Tolerances& tol = {});

/// True when the two sets coincide after deduplication.
bool same_vector_set(const std::vector<Vector>& a, const std::vector<Vector>& b, const Tolerances& tol = {});

namespace detail {

/// Enumeration core on unit coordinate columns; skips the PSS check.
CosineResult enumerate_bases(const Matrix& unit_coords, const Matrix& onb, const Tolerances& tol,
                             const EnumerationOptions& opts);

}  // namespace detail

}  // namespace psskit
