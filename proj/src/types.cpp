#include "gmmv/types.hpp"

#include <algorithm>
#include <cmath>

namespace gmmv {

SupportSet::SupportSet(std::vector<int> indices, int ambient_dim)
    : indices_(std::move(indices)), ambient_dim_(ambient_dim) {
  if (ambient_dim_ < 0) throw std::invalid_argument("SupportSet: negative ambient dimension");
  std::sort(indices_.begin(), indices_.end());
  for (size_t k = 0; k < indices_.size(); ++k) {
    if (indices_[k] < 0 || indices_[k] >= ambient_dim_)
      throw std::invalid_argument("SupportSet: index out of [0, n)");
    if (k > 0 && indices_[k] == indices_[k - 1])
      throw std::invalid_argument("SupportSet: duplicate index");
  }
}

bool SupportSet::contains(int l) const {
  return std::binary_search(indices_.begin(), indices_.end(), l);
}

std::vector<int> SupportSet::complement() const {
  std::vector<int> out;
  out.reserve(static_cast<size_t>(ambient_dim_ - size()));
  size_t k = 0;
  for (int l = 0; l < ambient_dim_; ++l) {
    if (k < indices_.size() && indices_[k] == l) {
      ++k;
    } else {
      out.push_back(l);
    }
  }
  return out;
}

MeasurementEnsemble::MeasurementEnsemble(std::vector<Matrix> matrices)
    : matrices_(std::move(matrices)) {
  if (matrices_.empty()) throw std::invalid_argument("MeasurementEnsemble: no matrices");
  rows_ = static_cast<int>(matrices_[0].rows());
  cols_ = static_cast<int>(matrices_[0].cols());
  if (rows_ < 1 || cols_ < 1)
    throw std::invalid_argument("MeasurementEnsemble: empty matrix shape");
  for (const Matrix& A : matrices_) {
    if (A.rows() != rows_ || A.cols() != cols_)
      throw std::invalid_argument("MeasurementEnsemble: inconsistent matrix shapes");
    if (!A.allFinite())
      throw std::invalid_argument("MeasurementEnsemble: non-finite entries");
  }
  unit_columns_ = true;
  for (const Matrix& A : matrices_) {
    for (Index j = 0; j < A.cols(); ++j) {
      if (std::abs(A.col(j).norm() - 1.0) > 1e-12) {
        unit_columns_ = false;
        break;
      }
    }
    if (!unit_columns_) break;
  }
}

Matrix MeasurementEnsemble::submatrix(int i, const SupportSet& support) const {
  return submatrix(i, support.indices());
}

Matrix MeasurementEnsemble::submatrix(int i, const std::vector<int>& indices) const {
  const Matrix& A = matrix(i);
  Matrix out(A.rows(), static_cast<Index>(indices.size()));
  for (size_t k = 0; k < indices.size(); ++k) out.col(static_cast<Index>(k)) = A.col(indices[k]);
  return out;
}

MeasurementEnsemble MeasurementEnsemble::prefix(int d) const {
  if (d < 1 || d > count())
    throw std::invalid_argument("MeasurementEnsemble::prefix: d out of range");
  std::vector<Matrix> sub(matrices_.begin(), matrices_.begin() + d);
  MeasurementEnsemble out(std::move(sub));
  out.seed = seed;
  if (permutations) {
    out.permutations = std::vector<std::vector<int>>(permutations->begin(),
                                                     permutations->begin() + d);
  }
  return out;
}

SignalEnsemble::SignalEnsemble(Matrix values, SupportSet support)
    : values_(std::move(values)), support_(std::move(support)) {
  if (values_.rows() != support_.ambient_dim())
    throw std::invalid_argument("SignalEnsemble: row count != ambient dimension");
  for (int l = 0; l < support_.ambient_dim(); ++l) {
    if (!support_.contains(l) && !values_.row(l).isZero(0.0))
      throw std::invalid_argument("SignalEnsemble: nonzero entry off support");
  }
}

double Observations::joint_norm() const {
  double ss = 0.0;
  for (const Vector& y : vectors) ss += y.squaredNorm();
  return std::sqrt(ss);
}

}  // namespace gmmv
