#pragma once

#include "psskit/types.hpp"

namespace psskit {

struct NnlsResult {
    Vector x;
    double residual = 0.0;  // ||A x - b||
    int iterations = 0;
    bool converged = true;
};

/// Lawson-Hanson active-set solver for min ||A x - b|| subject to x >= 0.
NnlsResult nnls(const Matrix& a, const Vector& b, int max_iterations = 0);

}  // namespace psskit
