#pragma once

#include "psskit/types.hpp"

namespace psskit {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    double objective = 0.0;
    Vector x;
};

/// Dense two-phase simplex for: maximize c'x subject to A x <= b, x >= 0.
/// Uses Bland's rule throughout, so degenerate problems terminate.
LpResult solve_lp(const Matrix& a, const Vector& b, const Vector& c);

/// Largest t such that some u with |u_i| <= 1 satisfies u'p >= t for every
/// column p of `positive` and u'q <= 0 for every column q of `nonpositive`.
/// Both matrices share the row dimension. Returns the optimal margin (>= 0)
/// and the separating vector.
struct MarginResult {
    double margin = 0.0;
    Vector u;
};
MarginResult max_separation_margin(const Matrix& positive, const Matrix& nonpositive);

}  // namespace psskit
