#pragma once

// Truncated Taylor arithmetic.
//
// A Jet of order K holds c_0 ... c_K with c_k = f^(k)(t0) / k!. Every
// operation works on the normalized coefficients directly, so the result of
// an arithmetic chain is the exact truncated series of the composite
// function (up to rounding). Mixing orders truncates to the smaller one.

#include <nullframe/errors.hpp>

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <string>

namespace nullframe {

template <typename Scalar>
class Jet {
 public:
  using Coefficients = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Jet() : c_(Coefficients::Zero(1)) {}

  explicit Jet(int order, Scalar value = Scalar(0)) : c_(Coefficients::Zero(order + 1)) {
    c_(0) = value;
  }

  explicit Jet(Coefficients coefficients) : c_(std::move(coefficients)) {
    if (c_.size() == 0) c_ = Coefficients::Zero(1);
  }

  /// The identity function t -> t expanded about `base`.
  static Jet variable(Scalar base, int order) {
    Jet j(order, base);
    if (order >= 1) j.c_(1) = Scalar(1);
    return j;
  }

  static Jet constant(Scalar value, int order) { return Jet(order, value); }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  const Coefficients& coefficients() const { return c_; }
  Coefficients& coefficients() { return c_; }

  Scalar operator[](int k) const { return c_(k); }
  Scalar& operator[](int k) { return c_(k); }
  Scalar value() const { return c_(0); }

  /// k! c_k, the k-th derivative at the base point.
  Scalar derivative(int k) const {
    if (k < 0 || k > order()) {
      throw InputError("derivative order " + std::to_string(k) + " outside jet order " +
                       std::to_string(order()));
    }
    Scalar factorial(1);
    for (int i = 2; i <= k; ++i) factorial *= Scalar(i);
    return factorial * c_(k);
  }

  Jet truncated(int order) const {
    order = std::min(order, this->order());
    return Jet(Coefficients(c_.head(order + 1)));
  }

  /// Series of f'. Order drops by one (an order-0 jet differentiates to zero).
  Jet differentiated() const {
    if (order() == 0) return Jet(0);
    Coefficients d(order());
    for (int k = 0; k < order(); ++k) d(k) = Scalar(k + 1) * c_(k + 1);
    return Jet(std::move(d));
  }

  /// Series of the antiderivative taking `constant` at the base point. Order grows by one.
  Jet integrated(Scalar constant = Scalar(0)) const {
    Coefficients d(order() + 2);
    d(0) = constant;
    for (int k = 0; k <= order(); ++k) d(k + 1) = c_(k) / Scalar(k + 1);
    return Jet(std::move(d));
  }

  /// Horner evaluation of the truncated polynomial at offset h.
  Scalar evaluate(Scalar h) const {
    Scalar r(0);
    for (int k = order(); k >= 0; --k) r = r * h + c_(k);
    return r;
  }

  Jet operator-() const { return Jet(Coefficients(-c_)); }

  Jet& operator+=(const Jet& o) { return *this = *this + o; }
  Jet& operator-=(const Jet& o) { return *this = *this - o; }
  Jet& operator*=(const Jet& o) { return *this = *this * o; }
  Jet& operator/=(const Jet& o) { return *this = *this / o; }

  friend Jet operator+(const Jet& a, const Jet& b) {
    const int k = std::min(a.order(), b.order());
    return Jet(Coefficients(a.c_.head(k + 1) + b.c_.head(k + 1)));
  }
  friend Jet operator-(const Jet& a, const Jet& b) {
    const int k = std::min(a.order(), b.order());
    return Jet(Coefficients(a.c_.head(k + 1) - b.c_.head(k + 1)));
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    const int order = std::min(a.order(), b.order());
    Coefficients r = Coefficients::Zero(order + 1);
    for (int k = 0; k <= order; ++k) {
      Scalar sum(0);
      for (int j = 0; j <= k; ++j) sum += a.c_(j) * b.c_(k - j);
      r(k) = sum;
    }
    return Jet(std::move(r));
  }
  friend Jet operator/(const Jet& a, const Jet& b) {
    const int order = std::min(a.order(), b.order());
    if (b.c_(0) == Scalar(0)) throw EvaluationError("division by a series with zero constant term");
    Coefficients q(order + 1);
    for (int k = 0; k <= order; ++k) {
      Scalar sum = a.c_(k);
      for (int j = 1; j <= k; ++j) sum -= b.c_(j) * q(k - j);
      q(k) = sum / b.c_(0);
    }
    return Jet(std::move(q));
  }

  friend Jet operator+(const Jet& a, Scalar s) {
    Jet r = a;
    r.c_(0) += s;
    return r;
  }
  friend Jet operator+(Scalar s, const Jet& a) { return a + s; }
  friend Jet operator-(const Jet& a, Scalar s) { return a + (-s); }
  friend Jet operator-(Scalar s, const Jet& a) { return (-a) + s; }
  friend Jet operator*(const Jet& a, Scalar s) { return Jet(Coefficients(a.c_ * s)); }
  friend Jet operator*(Scalar s, const Jet& a) { return a * s; }
  friend Jet operator/(const Jet& a, Scalar s) {
    if (s == Scalar(0)) throw EvaluationError("division by zero");
    return Jet(Coefficients(a.c_ / s));
  }
  friend Jet operator/(Scalar s, const Jet& a) { return Jet(a.order(), s) / a; }

 private:
  Coefficients c_;
};

template <typename Scalar>
Jet<Scalar> sqrt(const Jet<Scalar>& a) {
  using std::sqrt;
  if (!(a[0] > Scalar(0)) && !(a.order() == 0 && a[0] == Scalar(0))) {
    throw EvaluationError("sqrt of a nonpositive value");
  }
  const int order = a.order();
  typename Jet<Scalar>::Coefficients r(order + 1);
  r(0) = sqrt(a[0]);
  for (int k = 1; k <= order; ++k) {
    Scalar sum = a[k];
    for (int j = 1; j < k; ++j) sum -= r(j) * r(k - j);
    r(k) = sum / (Scalar(2) * r(0));
  }
  return Jet<Scalar>(std::move(r));
}

template <typename Scalar>
Jet<Scalar> exp(const Jet<Scalar>& a) {
  using std::exp;
  const int order = a.order();
  typename Jet<Scalar>::Coefficients r(order + 1);
  r(0) = exp(a[0]);
  for (int k = 1; k <= order; ++k) {
    Scalar sum(0);
    for (int j = 1; j <= k; ++j) sum += Scalar(j) * a[j] * r(k - j);
    r(k) = sum / Scalar(k);
  }
  return Jet<Scalar>(std::move(r));
}

template <typename Scalar>
Jet<Scalar> log(const Jet<Scalar>& a) {
  using std::log;
  if (!(a[0] > Scalar(0))) throw EvaluationError("log of a nonpositive value");
  const int order = a.order();
  typename Jet<Scalar>::Coefficients r(order + 1);
  r(0) = log(a[0]);
  for (int k = 1; k <= order; ++k) {
    Scalar sum = Scalar(k) * a[k];
    for (int j = 1; j < k; ++j) sum -= Scalar(j) * r(j) * a[k - j];
    r(k) = sum / (Scalar(k) * a[0]);
  }
  return Jet<Scalar>(std::move(r));
}

/// Coupled sine/cosine recurrence; returns {sin a, cos a}.
template <typename Scalar>
std::pair<Jet<Scalar>, Jet<Scalar>> sincos(const Jet<Scalar>& a) {
  using std::cos;
  using std::sin;
  const int order = a.order();
  typename Jet<Scalar>::Coefficients s(order + 1), c(order + 1);
  s(0) = sin(a[0]);
  c(0) = cos(a[0]);
  for (int k = 1; k <= order; ++k) {
    Scalar ss(0), cc(0);
    for (int j = 1; j <= k; ++j) {
      ss += Scalar(j) * a[j] * c(k - j);
      cc -= Scalar(j) * a[j] * s(k - j);
    }
    s(k) = ss / Scalar(k);
    c(k) = cc / Scalar(k);
  }
  return {Jet<Scalar>(std::move(s)), Jet<Scalar>(std::move(c))};
}

template <typename Scalar>
Jet<Scalar> sin(const Jet<Scalar>& a) {
  return sincos(a).first;
}

template <typename Scalar>
Jet<Scalar> cos(const Jet<Scalar>& a) {
  return sincos(a).second;
}

/// Integer power by repeated squaring; negative exponents go through one division.
template <typename Scalar>
Jet<Scalar> pow(const Jet<Scalar>& a, int exponent) {
  if (exponent < 0) return Scalar(1) / pow(a, -exponent);
  Jet<Scalar> result(a.order(), Scalar(1));
  Jet<Scalar> base = a;
  while (exponent > 0) {
    if (exponent & 1) result = result * base;
    exponent >>= 1;
    if (exponent > 0) base = base * base;
  }
  return result;
}

/// Real power a^p for a positive constant term, from a y' = p a' y.
template <typename Scalar>
Jet<Scalar> pow(const Jet<Scalar>& a, Scalar exponent) {
  using std::pow;
  if (!(a[0] > Scalar(0))) throw EvaluationError("real power of a nonpositive value");
  const int order = a.order();
  typename Jet<Scalar>::Coefficients y(order + 1);
  y(0) = pow(a[0], exponent);
  for (int k = 1; k <= order; ++k) {
    Scalar sum(0);
    for (int j = 1; j <= k; ++j) sum += (exponent * Scalar(j) - Scalar(k - j)) * a[j] * y(k - j);
    y(k) = sum / (Scalar(k) * a[0]);
  }
  return Jet<Scalar>(std::move(y));
}

/// Series of outer(inner(h)), where `inner` has no constant term (it is ignored).
/// Result order is min(outer, inner).
template <typename Scalar>
Jet<Scalar> compose(const Jet<Scalar>& outer, const Jet<Scalar>& inner) {
  const int order = std::min(outer.order(), inner.order());
  Jet<Scalar> g = inner.truncated(order);
  g[0] = Scalar(0);
  Jet<Scalar> r(order, outer[outer.order()]);
  for (int k = outer.order() - 1; k >= 0; --k) r = r * g + outer[k];
  return r.truncated(order);
}

/// Compositional inverse of a series s(h) = s_1 h + s_2 h^2 + ..., s_1 != 0.
/// Returns h(d) with s(h(d)) = d to the series order.
template <typename Scalar>
Jet<Scalar> revert(const Jet<Scalar>& series) {
  const int order = series.order();
  if (order < 1 || series[1] == Scalar(0)) {
    throw NumericalError("series reversion needs a nonzero linear term");
  }
  // Fixed point h = (d - sum_{k>=2} s_k h^k) / s_1 fixes one more coefficient per pass.
  Jet<Scalar> h(order);
  if (order >= 1) h[1] = Scalar(1) / series[1];
  Jet<Scalar> higher = series;
  higher[0] = Scalar(0);
  higher[1] = Scalar(0);
  const Jet<Scalar> d = Jet<Scalar>::variable(Scalar(0), order);
  for (int pass = 1; pass < order; ++pass) {
    h = (d - compose(higher, h)) / series[1];
  }
  return h;
}

}  // namespace nullframe
