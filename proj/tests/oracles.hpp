// Independent reference computations used by the unit tests and the
// acceptance binary. Nothing here calls the library's cosine, ospb or
// construct code.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "psskit/lp.hpp"

namespace oracle {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline double max_cos_at(const Matrix& unit, double theta)
{
    const double c = std::cos(theta), s = std::sin(theta);
    double best = -2.0;
    for (Eigen::Index j = 0; j < unit.cols(); ++j)
        best = std::max(best, c * unit(0, j) + s * unit(1, j));
    return best;
}

inline double min_cos_at(const Matrix& unit, double theta)
{
    const double c = std::cos(theta), s = std::sin(theta);
    double best = 2.0;
    for (Eigen::Index j = 0; j < unit.cols(); ++j)
        best = std::min(best, c * unit(0, j) + s * unit(1, j));
    return best;
}

inline Matrix unit_columns(const Matrix& d)
{
    Matrix u = d;
    for (Eigen::Index j = 0; j < u.cols(); ++j)
        u.col(j) /= u.col(j).norm();
    return u;
}

struct Scan {
    double value;
    double angle;
};

// Dense scan of the unit circle for min over u of max_j u'd_j/|d_j|, then a
// ternary refinement inside the best grid cell. The plain grid is accurate to
// about (2 pi / points)^2 / 2 only where the minimum is smooth; at a kink
// between two cosines the error is first order, hence the refinement.
template <class F>
inline Scan scan_circle(F&& f, std::size_t points, bool minimize)
{
    const double step = 2.0 * std::numbers::pi / static_cast<double>(points);
    std::size_t best_i = 0;
    double best = minimize ? 1e300 : -1e300;
    for (std::size_t i = 0; i < points; ++i) {
        const double v = f(step * static_cast<double>(i));
        if (minimize ? v < best : v > best) {
            best = v;
            best_i = i;
        }
    }
    double lo = step * (static_cast<double>(best_i) - 1.0);
    double hi = step * (static_cast<double>(best_i) + 1.0);
    for (int it = 0; it < 200; ++it) {
        const double a = lo + (hi - lo) / 3.0, b = hi - (hi - lo) / 3.0;
        const bool keep_left = minimize ? f(a) < f(b) : f(a) > f(b);
        (keep_left ? hi : lo) = keep_left ? b : a;
    }
    const double mid = 0.5 * (lo + hi);
    const double refined = f(mid);
    if (minimize ? refined < best : refined > best)
        return {refined, mid};
    return {best, step * static_cast<double>(best_i)};
}

// Cosine measure of a planar family.
inline Scan circle_cosine_measure(const Matrix& d, std::size_t points = 1000000)
{
    const Matrix unit = unit_columns(d);
    return scan_circle([&](double t) { return max_cos_at(unit, t); }, points, true);
}

// max over u of min_j u'd_j/|d_j| for a planar basis: gamma_B.
inline Scan circle_gamma(const Matrix& basis, std::size_t points = 1000000)
{
    const Matrix unit = unit_columns(basis);
    return scan_circle([&](double t) { return min_cos_at(unit, t); }, points, false);
}

// Largest cosine between d_i and its projection onto the hyperplane of the
// span orthogonal to v_{i'}; zero projections are skipped.
inline double brute_rho(const Matrix& d, const std::vector<Vector>& v, double zero = 1e-10)
{
    double best = 0.0;
    for (const Vector& w : v) {
        const Vector wn = w / w.norm();
        for (Eigen::Index i = 0; i < d.cols(); ++i) {
            const Vector di = d.col(i);
            const Vector p = di - di.dot(wn) * wn;
            if (p.norm() <= zero * di.norm())
                continue;
            best = std::max(best, di.dot(p) / (di.norm() * p.norm()));
        }
    }
    return best;
}

// Polar-cone witness for a full-rank family in R^n: maximizes
// -sum_j d_j'u/|d_j| subject to d_j'u <= 0 and |u_i| <= 1. A positive optimum
// yields u != 0 with u'd <= 0 for all d, so the family is not positively
// spanning; an optimum of zero means the polar cone is trivial.
struct PolarWitness {
    double objective = 0.0;
    Vector u;
};

inline PolarWitness polar_witness(const Matrix& d)
{
    const Matrix unit = unit_columns(d);
    const Eigen::Index n = unit.rows(), m = unit.cols();
    Matrix a = Matrix::Zero(m + 2 * n, 2 * n);
    Vector b = Vector::Zero(m + 2 * n);
    for (Eigen::Index j = 0; j < m; ++j) {
        a.block(j, 0, 1, n) = unit.col(j).transpose();
        a.block(j, n, 1, n) = -unit.col(j).transpose();
    }
    for (Eigen::Index i = 0; i < 2 * n; ++i) {
        a(m + i, i) = 1.0;
        b(m + i) = 1.0;
    }
    const Vector s = unit.rowwise().sum();
    Vector c(2 * n);
    c << -s, s;
    const psskit::LpResult lp = psskit::solve_lp(a, b, c);
    PolarWitness out;
    out.objective = lp.objective;
    out.u = lp.x.head(n) - lp.x.tail(n);
    return out;
}

// Unit u with u'd <= 0 for every column, or an empty vector when the polar
// cone is trivial. A rank-deficient family always has one orthogonal to its span.
inline Vector polar_direction(const Matrix& d, double zero = 1e-9)
{
    const PolarWitness w = polar_witness(d);
    if (w.objective > zero && w.u.norm() > zero)
        return w.u.normalized();
    Eigen::JacobiSVD<Matrix> svd(d.transpose(), Eigen::ComputeFullV);
    const Eigen::Index r = (svd.singularValues().array() > zero).count();
    if (r < d.rows())
        return svd.matrixV().col(d.rows() - 1);
    return Vector();
}

inline Matrix random_orthogonal(Eigen::Index n, std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    Matrix a(n, n);
    for (Eigen::Index i = 0; i < a.size(); ++i)
        a.data()[i] = g(rng);
    Eigen::ColPivHouseholderQR<Matrix> qr(a);
    Matrix q = qr.householderQ();
    if (q.determinant() < 0)
        q.col(0) = -q.col(0);
    return q;
}

inline Matrix gaussian(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    Matrix a(rows, cols);
    for (Eigen::Index i = 0; i < a.size(); ++i)
        a.data()[i] = g(rng);
    return a;
}

// Random minimal positive basis of R^l: a random basis plus the negation of a
// random positive combination of it.
inline Matrix random_minimal_pb(Eigen::Index l, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> pos(0.3, 2.0);
    Matrix out(l, l + 1);
    Matrix b;
    do {
        b = gaussian(l, l, rng);
    } while (std::abs(b.determinant()) < 0.1);
    out.leftCols(l) = b;
    Vector lambda(l);
    for (Eigen::Index i = 0; i < l; ++i)
        lambda(i) = pos(rng);
    out.col(l) = -b * lambda;
    return out;
}

// Random composition of n into s positive parts.
inline std::vector<std::size_t> random_partition(std::size_t n, std::mt19937_64& rng)
{
    std::vector<std::size_t> parts;
    std::size_t left = n;
    while (left > 0) {
        std::uniform_int_distribution<std::size_t> pick(1, left);
        parts.push_back(pick(rng));
        left -= parts.back();
    }
    return parts;
}

// Random OSPB: minimal positive bases of random shapes on consecutive groups
// of columns of a random orthogonal matrix, rescaled and shuffled. `blocks`
// receives the generating partition as index lists into the shuffled output.
inline Matrix random_ospb(std::size_t n, const std::vector<std::size_t>& dims, std::mt19937_64& rng,
                          std::vector<std::vector<std::size_t>>* blocks = nullptr)
{
    const Matrix q = random_orthogonal(static_cast<Eigen::Index>(n), rng);
    std::uniform_real_distribution<double> scale(0.5, 3.0);
    std::vector<Vector> cols;
    std::vector<std::size_t> owner;
    Eigen::Index at = 0;
    for (std::size_t b = 0; b < dims.size(); ++b) {
        const auto l = static_cast<Eigen::Index>(dims[b]);
        const Matrix local = random_minimal_pb(l, rng);
        for (Eigen::Index j = 0; j < local.cols(); ++j) {
            cols.push_back(scale(rng) * (q.middleCols(at, l) * local.col(j)));
            owner.push_back(b);
        }
        at += l;
    }
    std::vector<std::size_t> perm(cols.size());
    for (std::size_t i = 0; i < perm.size(); ++i)
        perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    Matrix out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(cols.size()));
    if (blocks)
        blocks->assign(dims.size(), {});
    for (std::size_t i = 0; i < perm.size(); ++i) {
        out.col(static_cast<Eigen::Index>(i)) = cols[perm[i]];
        if (blocks)
            (*blocks)[owner[perm[i]]].push_back(i);
    }
    return out;
}

// Random family in R^n with m vectors; every other draw is forced to be a PSS
// by including a rotated minimal positive basis.
inline Matrix random_family(std::size_t n, std::size_t m, bool force_pss, std::mt19937_64& rng)
{
    Matrix out = gaussian(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m), rng);
    if (force_pss && m >= n + 1) {
        const Matrix q = random_orthogonal(static_cast<Eigen::Index>(n), rng);
        out.leftCols(static_cast<Eigen::Index>(n + 1)) = q * random_minimal_pb(static_cast<Eigen::Index>(n), rng);
    }
    return out;
}

}  // namespace oracle
