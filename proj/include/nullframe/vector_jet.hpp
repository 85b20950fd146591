#pragma once

// Truncated Taylor series of an R^n-valued function: column k of the
// coefficient matrix is f^(k)(t0) / k!.

#include <nullframe/jet.hpp>
#include <nullframe/metric.hpp>

#include <Eigen/Core>

namespace nullframe {

template <typename Scalar>
class VectorJet {
 public:
  using Coefficients = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Column = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  VectorJet() = default;
  VectorJet(int dimension, int order) : c_(Coefficients::Zero(dimension, order + 1)) {}
  explicit VectorJet(Coefficients coefficients) : c_(std::move(coefficients)) {}

  /// Constant vector field.
  static VectorJet constant(const Column& value, int order) {
    VectorJet j(static_cast<int>(value.size()), order);
    j.c_.col(0) = value;
    return j;
  }

  int dimension() const { return static_cast<int>(c_.rows()); }
  int order() const { return static_cast<int>(c_.cols()) - 1; }
  const Coefficients& coefficients() const { return c_; }
  Coefficients& coefficients() { return c_; }

  Column value() const { return c_.col(0); }

  /// k-th derivative at the base point.
  Column derivative(int k) const {
    if (k < 0 || k > order()) {
      throw InputError("derivative order " + std::to_string(k) + " outside jet order " +
                       std::to_string(order()));
    }
    Scalar factorial(1);
    for (int i = 2; i <= k; ++i) factorial *= Scalar(i);
    return factorial * c_.col(k);
  }

  /// Columns alpha^(1) ... alpha^(m).
  Coefficients derivatives(int m) const {
    Coefficients d(dimension(), m);
    for (int k = 1; k <= m; ++k) d.col(k - 1) = derivative(k);
    return d;
  }

  Jet<Scalar> component(int i) const { return Jet<Scalar>(Column(c_.row(i).transpose())); }

  VectorJet truncated(int order) const {
    order = std::min(order, this->order());
    return VectorJet(Coefficients(c_.leftCols(order + 1)));
  }

  VectorJet differentiated() const {
    if (order() == 0) return VectorJet(dimension(), 0);
    Coefficients d(dimension(), order());
    for (int k = 0; k < order(); ++k) d.col(k) = Scalar(k + 1) * c_.col(k + 1);
    return VectorJet(std::move(d));
  }

  /// k-fold derivative.
  VectorJet differentiated(int times) const {
    VectorJet r = *this;
    for (int i = 0; i < times; ++i) r = r.differentiated();
    return r;
  }

  Column evaluate(Scalar h) const {
    Column r = Column::Zero(dimension());
    for (int k = order(); k >= 0; --k) r = r * h + c_.col(k);
    return r;
  }

  VectorJet operator-() const { return VectorJet(Coefficients(-c_)); }

  friend VectorJet operator+(const VectorJet& a, const VectorJet& b) {
    const int k = std::min(a.order(), b.order());
    return VectorJet(Coefficients(a.c_.leftCols(k + 1) + b.c_.leftCols(k + 1)));
  }
  friend VectorJet operator-(const VectorJet& a, const VectorJet& b) {
    const int k = std::min(a.order(), b.order());
    return VectorJet(Coefficients(a.c_.leftCols(k + 1) - b.c_.leftCols(k + 1)));
  }
  friend VectorJet operator*(Scalar s, const VectorJet& a) { return VectorJet(Coefficients(s * a.c_)); }
  friend VectorJet operator*(const VectorJet& a, Scalar s) { return s * a; }

  /// Product with a scalar series (Cauchy product per component).
  friend VectorJet operator*(const Jet<Scalar>& f, const VectorJet& a) {
    const int order = std::min(f.order(), a.order());
    Coefficients r = Coefficients::Zero(a.dimension(), order + 1);
    for (int k = 0; k <= order; ++k) {
      for (int j = 0; j <= k; ++j) r.col(k) += f[j] * a.c_.col(k - j);
    }
    return VectorJet(std::move(r));
  }
  friend VectorJet operator*(const VectorJet& a, const Jet<Scalar>& f) { return f * a; }
  friend VectorJet operator/(const VectorJet& a, const Jet<Scalar>& f) {
    return (Scalar(1) / f) * a;
  }

 private:
  Coefficients c_;
};

/// Series of <x(t), y(t)>.
template <typename Scalar>
Jet<Scalar> inner(const PseudoMetric& metric, const VectorJet<Scalar>& x, const VectorJet<Scalar>& y) {
  const int order = std::min(x.order(), y.order());
  if (x.dimension() != metric.dimension() || y.dimension() != metric.dimension()) {
    throw InputError("vector jet dimension does not match the metric");
  }
  const auto lowered = metric.lower(y.coefficients().leftCols(order + 1));
  const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> pairs =
      x.coefficients().leftCols(order + 1).transpose() * lowered;
  Jet<Scalar> r(order);
  for (int k = 0; k <= order; ++k) {
    Scalar sum(0);
    for (int i = 0; i <= k; ++i) sum += pairs(i, k - i);
    r[k] = sum;
  }
  return r;
}

/// Series of x(inner(h)); `inner` has no constant term.
template <typename Scalar>
VectorJet<Scalar> compose(const VectorJet<Scalar>& outer, const Jet<Scalar>& inner) {
  const int order = std::min(outer.order(), inner.order());
  typename VectorJet<Scalar>::Coefficients r(outer.dimension(), order + 1);
  for (int i = 0; i < outer.dimension(); ++i) {
    r.row(i) = compose(outer.component(i), inner).coefficients().head(order + 1).transpose();
  }
  return VectorJet<Scalar>(std::move(r));
}

}  // namespace nullframe
