#pragma once

// Index-2 pseudo-Euclidean form on R^n and Gram diagnostics of vector systems.
//
// Vector systems are passed as the columns of a dense matrix; the metric is
// <x, y> = -x1 y1 - x2 y2 + x3 y3 + ... + xn yn.

#include <nullframe/errors.hpp>

#include <Eigen/Core>

#include <string>
#include <vector>

namespace nullframe {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

class PseudoMetric {
 public:
  static constexpr int index = 2;

  explicit PseudoMetric(int dimension) : dimension_(dimension) {
    if (dimension < 4) {
      throw InputError("index-2 metric needs dimension >= 4, got " + std::to_string(dimension));
    }
  }

  int dimension() const noexcept { return dimension_; }

  /// Diagonal of the form: -1, -1, +1, ..., +1.
  Vector signature() const {
    Vector g = Vector::Ones(dimension_);
    g.head<2>().setConstant(-1.0);
    return g;
  }

  template <typename DerivedX, typename DerivedY>
  typename DerivedX::Scalar inner(const Eigen::MatrixBase<DerivedX>& x,
                                  const Eigen::MatrixBase<DerivedY>& y) const {
    check(x.size(), "left");
    check(y.size(), "right");
    const auto m = dimension_ - 2;
    return -x(0) * y(0) - x(1) * y(1) + x.tail(m).dot(y.tail(m));
  }

  template <typename Derived>
  typename Derived::Scalar squared(const Eigen::MatrixBase<Derived>& x) const {
    return inner(x, x);
  }

  /// g x, i.e. the covector paired with x.
  template <typename Derived>
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Derived::ColsAtCompileTime> lower(
      const Eigen::MatrixBase<Derived>& x) const {
    if (x.rows() != dimension_) mismatch(x.rows());
    Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Derived::ColsAtCompileTime> r = x;
    r.topRows(2) *= -1;
    return r;
  }

  /// Entry (i, j) is <v_i, v_j> for the columns v_i of `vectors`.
  template <typename Derived>
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> gram(
      const Eigen::MatrixBase<Derived>& vectors) const {
    if (vectors.cols() == 0) return {};
    return vectors.transpose() * lower(vectors);
  }

 private:
  void check(Eigen::Index size, const char* side) const {
    if (size != dimension_) {
      throw InputError(std::string(side) + " vector has " + std::to_string(size) +
                       " components, metric dimension is " + std::to_string(dimension_));
    }
  }
  [[noreturn]] void mismatch(Eigen::Index rows) const {
    throw InputError("vector system has " + std::to_string(rows) +
                     " rows, metric dimension is " + std::to_string(dimension_));
  }

  int dimension_;
};

inline constexpr double kDefaultRankTolerance = 1e-9;

/// Rank, radical dimension and index of the form restricted to span(vectors).
struct SubspaceProfile {
  int rank = 0;
  int radical_dim = 0;
  int index = 0;
  double tolerance_used = 0.0;
};

/// Classification sequences of an ordered basis.
struct SequenceReport {
  std::vector<int> nullity;  // r_0 ... r_n
  std::vector<int> index;    // q_0 ... q_n
  int degeneration_degree = 0;
};

/// Inertia of the Gram matrix of the columns.
///
/// Each column is first scaled to unit Euclidean length (a congruence, so the
/// inertia is unchanged); eigenvalues of magnitude at most tol * max(1, max|lambda|)
/// count as zero. The span dimension uses the same threshold on singular values,
/// and radical_dim = dim span - rank.
SubspaceProfile subspace_profile(const PseudoMetric& metric, const Matrix& vectors,
                                 double tol = kDefaultRankTolerance);

/// Nullity and index sequences of the flag spanned by the leading columns.
/// Throws ClassificationError naming the first dependent prefix.
SequenceReport sequence_report(const PseudoMetric& metric, const Matrix& basis,
                               double tol = kDefaultRankTolerance);

/// Sign of det of the coordinate matrix; NumericalError when the normalized
/// determinant is below 1e-12 in magnitude.
int orientation_sign(const Matrix& basis);

/// Numerical rank of the column-normalized system (singular values relative to the largest).
int numerical_rank(const Matrix& vectors, double tol = kDefaultRankTolerance);

/// The {0,1,2,2,1,0,...,0} nullity sequence of length n+1.
std::vector<int> family_nullity(int dimension);

}  // namespace nullframe
