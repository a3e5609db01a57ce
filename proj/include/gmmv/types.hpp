#ifndef GMMV_TYPES_HPP
#define GMMV_TYPES_HPP

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

// Core data types for the generalized multiple-measurement-vector (GMMV)
// setting: d measurement matrices A^(0..d-1), jointly row-sparse signals
// x^(0..d-1) sharing a support set, and the observations y^(i) = A^(i) x^(i) + e^(i).
namespace gmmv {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Index set S of the shared nonzero rows, kept sorted and validated against
// the ambient dimension n.
class SupportSet {
 public:
  SupportSet() = default;
  SupportSet(std::vector<int> indices, int ambient_dim);

  static SupportSet empty(int ambient_dim) { return SupportSet({}, ambient_dim); }

  const std::vector<int>& indices() const { return indices_; }
  int ambient_dim() const { return ambient_dim_; }
  int size() const { return static_cast<int>(indices_.size()); }
  bool contains(int l) const;
  // Complement in {0, ..., n-1}, ascending.
  std::vector<int> complement() const;

  bool operator==(const SupportSet& other) const {
    return ambient_dim_ == other.ambient_dim_ && indices_ == other.indices_;
  }

 private:
  std::vector<int> indices_;
  int ambient_dim_ = 0;
};

// The d measurement matrices, all m x n. `unit_columns` is true only when
// every column of every matrix has l2 norm within 1e-12 of 1.
// `permutations`, when present, records how each matrix was obtained from a
// common base matrix (column j of A^(i) = base column permutations[i][j]).
class MeasurementEnsemble {
 public:
  MeasurementEnsemble() = default;
  explicit MeasurementEnsemble(std::vector<Matrix> matrices);

  const std::vector<Matrix>& matrices() const { return matrices_; }
  const Matrix& matrix(int i) const { return matrices_.at(static_cast<size_t>(i)); }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int count() const { return static_cast<int>(matrices_.size()); }
  bool unit_columns() const { return unit_columns_; }

  // Columns of matrix i with indices in S, in ascending index order.
  Matrix submatrix(int i, const SupportSet& support) const;
  Matrix submatrix(int i, const std::vector<int>& indices) const;

  // Ensemble consisting of the first d matrices (shares values, copies data).
  MeasurementEnsemble prefix(int d) const;

  std::optional<std::uint64_t> seed;
  std::optional<std::vector<std::vector<int>>> permutations;

 private:
  std::vector<Matrix> matrices_;
  int rows_ = 0;
  int cols_ = 0;
  bool unit_columns_ = false;
};

// Jointly sparse signals stored as an n x d matrix whose column i is x^(i).
// Rows outside the support are exactly zero (enforced at construction).
class SignalEnsemble {
 public:
  SignalEnsemble() = default;
  SignalEnsemble(Matrix values, SupportSet support);

  const Matrix& values() const { return values_; }
  const SupportSet& support() const { return support_; }
  int ambient_dim() const { return static_cast<int>(values_.rows()); }
  int count() const { return static_cast<int>(values_.cols()); }

 private:
  Matrix values_;
  SupportSet support_;
};

// The d measurement vectors plus the joint noise budget eps, where the noise
// satisfies sum_i ||e^(i)||^2 <= eps^2.
struct Observations {
  std::vector<Vector> vectors;
  double noise_budget = 0.0;

  int count() const { return static_cast<int>(vectors.size()); }
  int rows() const { return vectors.empty() ? 0 : static_cast<int>(vectors[0].size()); }
  double joint_norm() const;
};

// Joint noise budget for synthetic observations: the drawn noise is rescaled
// so that sum_i ||e^(i)||^2 equals epsilon^2.
struct NoiseSpec {
  double epsilon = 0.0;
};

// Zero-mean unit-variance signal distributions. `sub_gaussian_rho` is the rho
// in the moment-generating-function bound E[exp(t x)] <= exp(rho t^2):
//  - gaussian: rho = 1/2 (exact),
//  - rademacher: rho = 1/2 (Hoeffding, E[exp(t x)] = cosh t <= exp(t^2/2)),
//  - uniform_bounded(M): samples are uniform on [-M, M] rescaled to unit
//    variance, i.e. uniform on [-sqrt(3), sqrt(3)]; rho = 3/2 (Hoeffding,
//    (b-a)^2/8 for support width 2*sqrt(3)).
// The rademacher/uniform values are documented Hoeffding-style bounds, not
// tight constants; bound evaluators use whatever rho the distribution carries.
struct SignalDistribution {
  enum class Kind { gaussian, rademacher, uniform_bounded };

  Kind kind = Kind::gaussian;
  double bound = 1.0;  // nominal M for uniform_bounded, ignored otherwise
  double sub_gaussian_rho = 0.5;

  static SignalDistribution gaussian() { return {Kind::gaussian, 1.0, 0.5}; }
  static SignalDistribution rademacher() { return {Kind::rademacher, 1.0, 0.5}; }
  static SignalDistribution uniform_bounded(double M) {
    return {Kind::uniform_bounded, M, 1.5};
  }
};

}  // namespace gmmv

#endif  // GMMV_TYPES_HPP
