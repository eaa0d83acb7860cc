#pragma once

#include <cstdint>
#include <optional>

#include "psskit/combinations.hpp"
#include "psskit/types.hpp"

namespace psskit {

enum class KStatus { Positive, NotPositive };

/// k-cosine measure as the minimum of the cosine measure over all subsets of
/// size m - k + 1. `certificate` names a subset that is not positively
/// spanning when the status is NotPositive; `value` is then meaningless.
struct KCosineResult {
    KStatus status = KStatus::NotPositive;
    double value = 0.0;
    std::vector<IndexList> witness_subsets;
    std::vector<Vector> witness_vectors;  // ambient, deduplicated
    std::optional<IndexList> certificate;
    std::uint64_t subsets_examined = 0;
};

struct PkssCheck {
    bool yes = false;
    std::optional<IndexList> failing_subset;
    explicit operator bool() const noexcept { return yes; }
};

/// Throws InvalidInput unless 1 <= k <= m.
void check_k(std::size_t k, std::size_t m);

/// True when every subset of size m - k + 1 spans `sub` (the family's span
/// when omitted).
bool k_span_equals(const VectorFamily& family, std::size_t k, const std::optional<Subspace>& sub = std::nullopt,
                   const Tolerances& tol = {}, const EnumerationOptions& opts = {});

/// Every subset of size m - k + 1 positively spans `sub`.
PkssCheck is_pkss(const VectorFamily& family, std::size_t k, const std::optional<Subspace>& sub = std::nullopt,
                  const Tolerances& tol = {}, const EnumerationOptions& opts = {});

KCosineResult k_cosine_measure(const VectorFamily& family, std::size_t k,
                               const std::optional<Subspace>& sub = std::nullopt, const Tolerances& tol = {},
                               const EnumerationOptions& opts = {});

/// k-th largest of u'd/|d| over the family (ties kept).
double kth_largest_cosine(const Vector& u, const VectorFamily& family, std::size_t k);

/// PkSS of its span such that no single deletion leaves a PkSS.
bool is_positive_k_basis(const VectorFamily& family, std::size_t k, const Tolerances& tol = {},
                         const EnumerationOptions& opts = {});

/// Every d belongs to some k-subset T admitting u with u't > 0 on T and
/// u'v <= 0 off T.
bool is_positively_k_independent(const VectorFamily& family, std::size_t k, const Tolerances& tol = {});

}  // namespace psskit
