#include "psskit/nnls.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace psskit {

namespace {

Vector solve_passive(const Matrix& a, const Vector& b, const std::vector<bool>& passive)
{
    std::vector<Eigen::Index> cols;
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        if (passive[static_cast<std::size_t>(j)])
            cols.push_back(j);

    Matrix ap(a.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k)
        ap.col(static_cast<Eigen::Index>(k)) = a.col(cols[k]);
    const Vector zp = ap.colPivHouseholderQr().solve(b);

    Vector z = Vector::Zero(a.cols());
    for (std::size_t k = 0; k < cols.size(); ++k)
        z(cols[k]) = zp(static_cast<Eigen::Index>(k));
    return z;
}

}  // namespace

NnlsResult nnls(const Matrix& a, const Vector& b, int max_iterations)
{
    if (a.rows() != b.size())
        throw InvalidInput("nnls: dimension mismatch between matrix and right-hand side");

    const Eigen::Index n = a.cols();
    if (max_iterations <= 0)
        max_iterations = 3 * static_cast<int>(n) + 10;

    const double eps = std::numeric_limits<double>::epsilon();
    const double tol = 10.0 * eps * std::max<double>(1.0, static_cast<double>(n))
                       * std::max(1.0, a.cwiseAbs().colwise().sum().maxCoeff())
                       * std::max(1.0, b.norm());

    NnlsResult res;
    res.x = Vector::Zero(n);
    std::vector<bool> passive(static_cast<std::size_t>(n), false);

    Vector w = a.transpose() * (b - a * res.x);
    while (res.iterations < max_iterations) {
        Eigen::Index best = -1;
        double wmax = tol;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (!passive[static_cast<std::size_t>(j)] && w(j) > wmax) {
                wmax = w(j);
                best = j;
            }
        }
        if (best < 0)
            break;
        passive[static_cast<std::size_t>(best)] = true;

        // Inner loop: restore feasibility of the passive-set solution.
        while (true) {
            ++res.iterations;
            Vector z = solve_passive(a, b, passive);
            bool feasible = true;
            for (Eigen::Index j = 0; j < n; ++j)
                if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0)
                    feasible = false;
            if (feasible) {
                res.x = z;
                break;
            }
            double alpha = std::numeric_limits<double>::infinity();
            for (Eigen::Index j = 0; j < n; ++j) {
                if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0) {
                    const double denom = res.x(j) - z(j);
                    if (denom > 0.0)
                        alpha = std::min(alpha, res.x(j) / denom);
                }
            }
            if (!std::isfinite(alpha))
                alpha = 0.0;
            res.x += alpha * (z - res.x);
            for (Eigen::Index j = 0; j < n; ++j) {
                if (passive[static_cast<std::size_t>(j)] && res.x(j) <= tol) {
                    passive[static_cast<std::size_t>(j)] = false;
                    res.x(j) = 0.0;
                }
            }
            if (res.iterations >= max_iterations)
                break;
        }
        w = a.transpose() * (b - a * res.x);
    }
    res.converged = res.iterations < max_iterations;
    res.x = res.x.cwiseMax(0.0);
    res.residual = (a * res.x - b).norm();
    return res;
}

}  // namespace psskit
