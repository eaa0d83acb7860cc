#include "psskit/lp.hpp"

#include <limits>
#include <vector>

namespace psskit {

namespace {

constexpr double kPivotEps = 1e-12;

// Tableau layout: rows 0..m-1 constraints, row m objective, row m+1 phase-one
// objective. Columns 0..n-1 nonbasic variables, column n the auxiliary
// variable, column n+1 the right-hand side. Variable ids: 0..n-1 structural,
// n..n+m-1 slacks, -1 the auxiliary.
class Tableau {
public:
    Tableau(const Matrix& a, const Vector& b, const Vector& c)
        : m_(static_cast<int>(a.rows())), n_(static_cast<int>(a.cols())),
          d_(Matrix::Zero(m_ + 2, n_ + 2)), basis_(m_), nonbasis_(n_ + 1)
    {
        for (int i = 0; i < m_; ++i) {
            for (int j = 0; j < n_; ++j)
                d_(i, j) = a(i, j);
            basis_[i] = n_ + i;
            d_(i, n_) = -1.0;
            d_(i, n_ + 1) = b(i);
        }
        for (int j = 0; j < n_; ++j) {
            nonbasis_[j] = j;
            d_(m_, j) = -c(j);
        }
        nonbasis_[n_] = -1;
        d_(m_ + 1, n_) = 1.0;
    }

    LpResult solve()
    {
        LpResult res;
        int r = 0;
        for (int i = 1; i < m_; ++i)
            if (d_(i, n_ + 1) < d_(r, n_ + 1))
                r = i;
        if (m_ > 0 && d_(r, n_ + 1) < -kPivotEps) {
            pivot(r, n_);
            if (!simplex(1) || d_(m_ + 1, n_ + 1) < -1e-9) {
                res.status = LpStatus::Infeasible;
                return res;
            }
            for (int i = 0; i < m_; ++i) {
                if (basis_[i] == -1) {
                    int s = -1;
                    for (int j = 0; j <= n_; ++j)
                        if (s == -1 || d_(i, j) < d_(i, s) || (d_(i, j) == d_(i, s) && nonbasis_[j] < nonbasis_[s]))
                            s = j;
                    pivot(i, s);
                }
            }
        }
        if (!simplex(2)) {
            res.status = LpStatus::Unbounded;
            return res;
        }
        res.status = LpStatus::Optimal;
        res.x = Vector::Zero(n_);
        for (int i = 0; i < m_; ++i)
            if (basis_[i] >= 0 && basis_[i] < n_)
                res.x(basis_[i]) = d_(i, n_ + 1);
        res.objective = d_(m_, n_ + 1);
        return res;
    }

private:
    void pivot(int r, int s)
    {
        const double inv = 1.0 / d_(r, s);
        for (int i = 0; i < m_ + 2; ++i) {
            if (i == r)
                continue;
            const double f = d_(i, s) * inv;
            if (f == 0.0)
                continue;
            for (int j = 0; j < n_ + 2; ++j)
                if (j != s)
                    d_(i, j) -= d_(r, j) * f;
        }
        for (int j = 0; j < n_ + 2; ++j)
            if (j != s)
                d_(r, j) *= inv;
        for (int i = 0; i < m_ + 2; ++i)
            if (i != r)
                d_(i, s) *= -inv;
        d_(r, s) = inv;
        std::swap(basis_[r], nonbasis_[s]);
    }

    // Bland's rule: entering variable with smallest id among improving
    // columns; leaving row by minimum ratio, ties broken by smallest id.
    bool simplex(int phase)
    {
        const int obj = phase == 1 ? m_ + 1 : m_;
        while (true) {
            int s = -1;
            for (int j = 0; j <= n_; ++j) {
                if (phase == 2 && nonbasis_[j] == -1)
                    continue;
                if (d_(obj, j) < -kPivotEps && (s == -1 || nonbasis_[j] < nonbasis_[s]))
                    s = j;
            }
            if (s == -1)
                return true;
            int r = -1;
            double best = 0.0;
            for (int i = 0; i < m_; ++i) {
                if (d_(i, s) <= kPivotEps)
                    continue;
                const double ratio = d_(i, n_ + 1) / d_(i, s);
                if (r == -1 || ratio < best - 1e-15 || (ratio <= best + 1e-15 && basis_[i] < basis_[r])) {
                    r = i;
                    best = ratio;
                }
            }
            if (r == -1)
                return false;
            pivot(r, s);
        }
    }

    int m_;
    int n_;
    Matrix d_;
    std::vector<int> basis_;
    std::vector<int> nonbasis_;
};

}  // namespace

LpResult solve_lp(const Matrix& a, const Vector& b, const Vector& c)
{
    if (a.rows() != b.size() || a.cols() != c.size())
        throw InvalidInput("solve_lp: inconsistent dimensions");
    Tableau t(a, b, c);
    return t.solve();
}

MarginResult max_separation_margin(const Matrix& positive, const Matrix& nonpositive)
{
    const Eigen::Index dim = positive.rows();
    if (nonpositive.cols() > 0 && nonpositive.rows() != dim)
        throw InvalidInput("max_separation_margin: dimension mismatch");

    // Variables: p (dim), q (dim), t; u = p - q with 0 <= p, q <= 1.
    const Eigen::Index nvar = 2 * dim + 1;
    const Eigen::Index nrow = positive.cols() + nonpositive.cols() + 2 * dim;
    Matrix a = Matrix::Zero(nrow, nvar);
    Vector b = Vector::Zero(nrow);
    Eigen::Index row = 0;
    for (Eigen::Index j = 0; j < positive.cols(); ++j, ++row) {
        // t - p'u <= 0
        a.block(row, 0, 1, dim) = -positive.col(j).transpose();
        a.block(row, dim, 1, dim) = positive.col(j).transpose();
        a(row, 2 * dim) = 1.0;
    }
    for (Eigen::Index j = 0; j < nonpositive.cols(); ++j, ++row) {
        a.block(row, 0, 1, dim) = nonpositive.col(j).transpose();
        a.block(row, dim, 1, dim) = -nonpositive.col(j).transpose();
    }
    for (Eigen::Index i = 0; i < 2 * dim; ++i, ++row) {
        a(row, i) = 1.0;
        b(row) = 1.0;
    }
    Vector c = Vector::Zero(nvar);
    c(2 * dim) = 1.0;

    const LpResult lp = solve_lp(a, b, c);
    MarginResult out;
    out.u = Vector::Zero(dim);
    if (lp.status != LpStatus::Optimal)
        return out;
    out.margin = lp.objective;
    out.u = lp.x.head(dim) - lp.x.segment(dim, dim);
    return out;
}

}  // namespace psskit
