#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace psskit {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using IndexList = std::vector<std::size_t>;

/// Numerical thresholds shared by every operation.
///
/// `zero_tol` is relative: each use scales it by the natural magnitude of the
/// quantity being compared (vector norms, right-hand sides). Cosines and other
/// dimensionless values compare against it directly. `rank_tol` is multiplied
/// by max(rows, cols) and the largest singular value. `dedupe_tol` bounds
/// 1 - cos between two unit vectors considered identical.
struct Tolerances {
    double zero_tol = 1e-10;
    double rank_tol = 1e-12;
    double dedupe_tol = 1e-9;

    void validate() const;
};

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
public:
    using Error::Error;
};

class OutsideSubspace : public Error {
public:
    OutsideSubspace(std::size_t index, const std::string& what)
        : Error(what), index_(index) {}
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

class SingularBasis : public Error {
public:
    using Error::Error;
};

/// Raised when an enumeration would exceed the configured subset cap.
class Truncated : public Error {
public:
    using Error::Error;
};

/// Ordered multiset of nonzero vectors of a common dimension, stored as the
/// columns of a dim x m matrix.
class VectorFamily {
public:
    VectorFamily() = default;
    explicit VectorFamily(Matrix columns);
    VectorFamily(std::size_t dim, const std::vector<std::vector<double>>& rows);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(cols_.rows()); }
    std::size_t size() const noexcept { return static_cast<std::size_t>(cols_.cols()); }
    const Matrix& matrix() const noexcept { return cols_; }
    Vector operator[](std::size_t i) const { return cols_.col(static_cast<Eigen::Index>(i)); }

    VectorFamily subset(const IndexList& indices) const;
    VectorFamily without(std::size_t index) const;
    VectorFamily with(const Vector& extra) const;
    VectorFamily concat(const VectorFamily& other) const;

    std::vector<std::vector<double>> rows() const;

private:
    Matrix cols_;
};

/// Linear subspace of R^ambient given by an orthonormal basis (columns).
class Subspace {
public:
    Subspace() = default;
    Subspace(std::size_t ambient_dim, Matrix onb);

    static Subspace full(std::size_t ambient_dim);

    std::size_t ambient_dim() const noexcept { return ambient_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(onb_.cols()); }
    const Matrix& onb() const noexcept { return onb_; }

private:
    std::size_t ambient_ = 0;
    Matrix onb_;
};

}  // namespace psskit
