#pragma once

#include <optional>
#include <string>

#include "psskit/types.hpp"

namespace psskit {

/// Outcome of a positive-spanning test. On success `coefficients[i]` holds
/// nonnegative weights expressing -d_i in terms of the family (original
/// scaling). On failure either the rank is short of the subspace dimension
/// or `unreachable` names an element whose negation is not reachable.
struct PssCheck {
    bool yes = false;
    std::size_t rank = 0;
    std::size_t subspace_dim = 0;
    std::optional<std::size_t> unreachable;
    std::vector<Vector> coefficients;

    explicit operator bool() const noexcept { return yes; }
    std::string reason() const;
};

/// Positive spanning test relative to `sub` (the span of the family when
/// omitted): full rank in `sub` and -d in the positive span for every d.
PssCheck is_pss(const VectorFamily& family, const std::optional<Subspace>& sub = std::nullopt,
                const Tolerances& tol = {});

/// Same test on unit-norm coordinate columns of a `dim`-dimensional space.
PssCheck is_pss_coords(const Matrix& unit_coords, std::size_t dim, const Tolerances& tol = {});

/// Inclusion-wise minimal positive spanning set of its own span.
bool is_positive_basis(const VectorFamily& family, const Tolerances& tol = {});

/// For every element d some u in the span has u'd > 0 and u'v <= 0 for the
/// other elements; strictness is certified by an LP margin above zero_tol.
bool is_positively_independent(const VectorFamily& family, const Tolerances& tol = {});

/// True when c cannot replace any element of the positive basis while keeping
/// the positive spanning property. Throws InvalidInput when the family is not
/// a positive basis or c lies outside its span.
bool is_critical_vector(const VectorFamily& positive_basis, const Vector& c, const Tolerances& tol = {});

/// ids[j] is the smallest index holding a vector bitwise equal to vector j.
std::vector<std::size_t> duplicate_classes(const Matrix& columns);

}  // namespace psskit
