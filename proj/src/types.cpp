#include "psskit/types.hpp"

#include <cmath>
#include <sstream>

namespace psskit {

void Tolerances::validate() const
{
    if (!(zero_tol > 0.0) || !(rank_tol > 0.0) || !(dedupe_tol > 0.0))
        throw InvalidInput("tolerances must be strictly positive");
}

VectorFamily::VectorFamily(Matrix columns) : cols_(std::move(columns))
{
    if (cols_.rows() < 1)
        throw InvalidInput("vector family needs dimension >= 1");
    if (cols_.cols() < 1)
        throw InvalidInput("vector family needs at least one vector");
    if (!cols_.allFinite())
        throw InvalidInput("vector family contains NaN or Inf");
    const double min_norm = Tolerances{}.zero_tol;
    for (Eigen::Index j = 0; j < cols_.cols(); ++j) {
        if (cols_.col(j).norm() <= min_norm) {
            std::ostringstream msg;
            msg << "vector " << j << " has (near) zero norm";
            throw InvalidInput(msg.str());
        }
    }
}

VectorFamily::VectorFamily(std::size_t dim, const std::vector<std::vector<double>>& rows)
    : VectorFamily([&] {
          Matrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(rows.size()));
          for (std::size_t j = 0; j < rows.size(); ++j) {
              if (rows[j].size() != dim) {
                  std::ostringstream msg;
                  msg << "vector " << j << " has length " << rows[j].size() << ", expected " << dim;
                  throw InvalidInput(msg.str());
              }
              for (std::size_t i = 0; i < dim; ++i)
                  m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[j][i];
          }
          return m;
      }())
{
}

VectorFamily VectorFamily::subset(const IndexList& indices) const
{
    Matrix m(cols_.rows(), static_cast<Eigen::Index>(indices.size()));
    for (std::size_t j = 0; j < indices.size(); ++j) {
        if (indices[j] >= size())
            throw InvalidInput("subset index out of range");
        m.col(static_cast<Eigen::Index>(j)) = cols_.col(static_cast<Eigen::Index>(indices[j]));
    }
    return VectorFamily(std::move(m));
}

VectorFamily VectorFamily::without(std::size_t index) const
{
    if (size() < 2)
        throw InvalidInput("cannot remove the only vector of a family");
    IndexList keep;
    for (std::size_t j = 0; j < size(); ++j)
        if (j != index)
            keep.push_back(j);
    return subset(keep);
}

VectorFamily VectorFamily::with(const Vector& extra) const
{
    if (static_cast<std::size_t>(extra.size()) != dim())
        throw InvalidInput("appended vector has wrong dimension");
    Matrix m(cols_.rows(), cols_.cols() + 1);
    m << cols_, extra;
    return VectorFamily(std::move(m));
}

VectorFamily VectorFamily::concat(const VectorFamily& other) const
{
    if (other.dim() != dim())
        throw InvalidInput("cannot concatenate families of different dimension");
    Matrix m(cols_.rows(), cols_.cols() + other.cols_.cols());
    m << cols_, other.cols_;
    return VectorFamily(std::move(m));
}

std::vector<std::vector<double>> VectorFamily::rows() const
{
    std::vector<std::vector<double>> out(size(), std::vector<double>(dim()));
    for (std::size_t j = 0; j < size(); ++j)
        for (std::size_t i = 0; i < dim(); ++i)
            out[j][i] = cols_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    return out;
}

Subspace::Subspace(std::size_t ambient_dim, Matrix onb) : ambient_(ambient_dim), onb_(std::move(onb))
{
    if (ambient_ < 1)
        throw InvalidInput("subspace needs ambient dimension >= 1");
    if (onb_.cols() == 0) {
        onb_.resize(static_cast<Eigen::Index>(ambient_), 0);
        return;
    }
    if (static_cast<std::size_t>(onb_.rows()) != ambient_)
        throw InvalidInput("subspace basis has wrong ambient dimension");
    if (static_cast<std::size_t>(onb_.cols()) > ambient_)
        throw InvalidInput("subspace basis has more vectors than the ambient dimension");
    if (!onb_.allFinite())
        throw InvalidInput("subspace basis contains NaN or Inf");
    const Matrix defect = onb_.transpose() * onb_ - Matrix::Identity(onb_.cols(), onb_.cols());
    if (defect.cwiseAbs().maxCoeff() > 1e-9)
        throw InvalidInput("subspace basis is not orthonormal");
}

Subspace Subspace::full(std::size_t ambient_dim)
{
    const auto n = static_cast<Eigen::Index>(ambient_dim);
    return Subspace(ambient_dim, Matrix::Identity(n, n));
}

}  // namespace psskit
