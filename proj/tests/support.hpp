#pragma once

// Shared fixtures and independent oracles for the unit and acceptance tests.

#include <nullframe/bertrand.hpp>
#include <nullframe/evolute.hpp>
#include <nullframe/sphere.hpp>
#include <nullframe/synthesis.hpp>

#include <quadmath.h>

#include <cmath>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace nullframe::testing {

inline const std::vector<std::string> kGoldenComponents = {
    "(s - s^5)/(4*sqrt(15))", "(s^2 + s^4)/(4*sqrt(6))", "s^3/6", "(s^2 - s^4)/(4*sqrt(6))",
    "(s + s^5)/(4*sqrt(15))"};

inline std::shared_ptr<const Curve> golden_curve(Interval domain = {-1.0, 2.0}) {
  return std::make_shared<const Curve>(Curve::from_strings(kGoldenComponents, "s", domain));
}

/// Golden curve precomposed with t = phi(u), given as an expression in u.
inline std::shared_ptr<const Curve> golden_precomposed(const std::string& phi, Interval domain) {
  std::vector<std::string> c;
  for (const std::string& e : kGoldenComponents) {
    std::string out;
    for (std::size_t i = 0; i < e.size(); ++i) {
      const bool symbol = e[i] == 's' && (i + 1 == e.size() || e[i + 1] != 'q');  // skip "sqrt"
      out += symbol ? "(" + phi + ")" : std::string(1, e[i]);
    }
    c.push_back(out);
  }
  return std::make_shared<const Curve>(Curve::from_strings(c, "u", domain));
}

// Closed forms of the golden frame.
struct GoldenFrame {
  Vector alpha, L1, L2, W3, N2, N1;
};

inline GoldenFrame golden_frame(double s) {
  const double r15 = std::sqrt(15.0), r6 = std::sqrt(6.0);
  auto v = [](std::initializer_list<double> x) {
    Vector r(static_cast<Eigen::Index>(x.size()));
    Eigen::Index i = 0;
    for (double e : x) r(i++) = e;
    return r;
  };
  const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
  GoldenFrame f;
  f.alpha = v({(s - s5) / (4 * r15), (s2 + s4) / (4 * r6), s3 / 6, (s2 - s4) / (4 * r6), (s + s5) / (4 * r15)});
  f.L1 = v({(1 - 5 * s4) / (4 * r15), (2 * s + 4 * s3) / (4 * r6), s2 / 2, (2 * s - 4 * s3) / (4 * r6),
            (1 + 5 * s4) / (4 * r15)});
  f.L2 = v({-5 * s3 / r15, (2 + 12 * s2) / (4 * r6), s, (2 - 12 * s2) / (4 * r6), 5 * s3 / r15});
  f.W3 = v({-r15 * s2, r6 * s, 1, -r6 * s, r15 * s2});
  f.N2 = v({-2 * r15 * s, r6, 0, -r6, 2 * r15 * s});
  f.N1 = v({-2 * r15, 0, 0, 0, 2 * r15});
  return f;
}

/// The displayed Bertrand mate of the golden curve.
inline Vector golden_mate(double sb, double mu) {
  const double r15 = std::sqrt(15.0), r6 = std::sqrt(6.0);
  const double s2 = sb * sb, s4 = s2 * s2, s5 = s4 * sb;
  Vector r(5);
  r << (sb - 60 * mu * s2 - s5) / (4 * r15), (24 * mu * sb + s2 + s4) / (4 * r6), (s2 * sb + 6 * mu) / 6,
      (-24 * mu * sb + s2 - s4) / (4 * r6), (sb + 60 * mu * s2 + s5) / (4 * r15);
  return r;
}

/// Initial state of the golden curve at s = 0 in state column order.
inline Matrix golden_initial_state() {
  const GoldenFrame f = golden_frame(0.0);
  Matrix s(5, 6);
  s << f.alpha, f.L1, f.L2, f.W3, f.N2, f.N1;
  return s;
}

inline std::shared_ptr<const SynthesizedCurve> synthesized(int n, const std::vector<std::string>& k, Interval interval,
                                                           SynthesisOptions options = {}) {
  return std::make_shared<const SynthesizedCurve>(
      synthesize(CurvatureProfile::from_strings(n, k), interval, options));
}

/// Random isometry of the index-2 metric applied to the standard frame, with a random base point.
inline Matrix random_initial_state(int n, std::mt19937_64& rng, double scale = 0.4) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix skew = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      skew(i, j) = scale * normal(rng);
      skew(j, i) = -skew(i, j);
    }
  }
  const PseudoMetric metric(n);
  const Matrix q = metric_isometry(metric, skew);
  Matrix s = q * standard_initial_frame(n);
  for (int i = 0; i < n; ++i) s(i, 0) = normal(rng);
  return s;
}

// ---------------------------------------------------------------------------
// Exact inertia of small integer symmetric matrices.

using Wide = __int128;

/// Rank by fraction-free Bareiss elimination.
inline int exact_rank(std::vector<std::vector<Wide>> a) {
  const int rows = static_cast<int>(a.size());
  const int cols = rows ? static_cast<int>(a[0].size()) : 0;
  int rank = 0;
  Wide previous = 1;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int pivot = -1;
    for (int r = rank; r < rows; ++r) {
      if (a[r][c] != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(a[pivot], a[rank]);
    for (int r = rank + 1; r < rows; ++r) {
      for (int k = c + 1; k < cols; ++k) a[r][k] = (a[rank][c] * a[r][k] - a[r][c] * a[rank][k]) / previous;
      a[r][c] = 0;
    }
    previous = a[rank][c];
    ++rank;
  }
  return rank;
}

/// Characteristic polynomial det(lambda I - A) = sum c_k lambda^k by Faddeev-LeVerrier (exact on integers).
inline std::vector<Wide> characteristic_polynomial(const std::vector<std::vector<Wide>>& a) {
  const int n = static_cast<int>(a.size());
  std::vector<Wide> c(n + 1, 0);
  c[n] = 1;
  std::vector<std::vector<Wide>> m(n, std::vector<Wide>(n, 0));  // M_0 = 0
  for (int k = 1; k <= n; ++k) {
    // M_k = A M_(k-1) + c_(n-k+1) I
    std::vector<std::vector<Wide>> next(n, std::vector<Wide>(n, 0));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        Wide sum = 0;
        for (int l = 0; l < n; ++l) sum += a[i][l] * m[l][j];
        next[i][j] = sum + (i == j ? c[n - k + 1] : 0);
      }
    }
    m = next;
    Wide trace = 0;  // tr(A M_k)
    for (int i = 0; i < n; ++i) {
      for (int l = 0; l < n; ++l) trace += a[i][l] * m[l][i];
    }
    c[n - k] = -trace / k;
  }
  return c;
}

struct Inertia {
  int positive = 0, negative = 0, zero = 0;
};

/// Exact inertia from sign variations (Descartes' rule is exact for real-rooted polynomials).
inline Inertia exact_inertia(const std::vector<std::vector<Wide>>& a) {
  std::vector<Wide> c = characteristic_polynomial(a);
  Inertia r;
  std::size_t low = 0;
  while (low < c.size() && c[low] == 0) ++low;
  r.zero = static_cast<int>(low);
  auto variations = [&](bool mirrored) {
    int count = 0, last = 0;
    for (std::size_t k = low; k < c.size(); ++k) {
      Wide v = c[k];
      if (mirrored && (k % 2 == 1)) v = -v;
      const int sign = v > 0 ? 1 : (v < 0 ? -1 : 0);
      if (sign == 0) continue;
      if (last != 0 && sign != last) ++count;
      last = sign;
    }
    return count;
  };
  r.positive = variations(false);
  r.negative = variations(true);
  return r;
}

/// Integer Gram matrix of integer column vectors under the index-2 metric.
inline std::vector<std::vector<Wide>> integer_gram(const std::vector<std::vector<long>>& columns) {
  const std::size_t m = columns.size();
  std::vector<std::vector<Wide>> g(m, std::vector<Wide>(m, 0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      Wide sum = 0;
      for (std::size_t k = 0; k < columns[i].size(); ++k) {
        sum += (k < 2 ? -1 : 1) * static_cast<Wide>(columns[i][k]) * columns[j][k];
      }
      g[i][j] = sum;
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// Finite-difference oracle: central differences in binary128 with Richardson extrapolation.

/// IEEE binary128 scalar that Expr::evaluate accepts.
struct Quad {
  __float128 v = 0;
  Quad() = default;
  Quad(double d) : v(d) {}  // NOLINT: implicit like a builtin float
  static Quad raw(__float128 x) {
    Quad q;
    q.v = x;
    return q;
  }
  explicit operator double() const { return static_cast<double>(v); }
  Quad operator-() const { return raw(-v); }
  Quad& operator+=(Quad o) { v += o.v; return *this; }
  Quad& operator*=(Quad o) { v *= o.v; return *this; }
  friend Quad operator+(Quad a, Quad b) { return raw(a.v + b.v); }
  friend Quad operator-(Quad a, Quad b) { return raw(a.v - b.v); }
  friend Quad operator*(Quad a, Quad b) { return raw(a.v * b.v); }
  friend Quad operator/(Quad a, Quad b) { return raw(a.v / b.v); }
};
inline Quad sqrt(Quad x) { return Quad::raw(sqrtq(x.v)); }
inline Quad sin(Quad x) { return Quad::raw(sinq(x.v)); }
inline Quad cos(Quad x) { return Quad::raw(cosq(x.v)); }
inline Quad exp(Quad x) { return Quad::raw(expq(x.v)); }
inline Quad log(Quad x) { return Quad::raw(logq(x.v)); }
inline Quad pow(Quad x, int n) { return Quad::raw(powq(x.v, n)); }

}  // namespace nullframe::testing

template <>
struct nullframe::detail::Algebra<nullframe::testing::Quad> {
  using Q = nullframe::testing::Quad;
  static double constant_term(const Q& x) { return static_cast<double>(x); }
  static int order(const Q&) { return 0; }
  static Q constant(double v, const Q&) { return Q(v); }
};

namespace nullframe::testing {

/// k-th central difference with binomial weights at offsets (j - k/2) h.
template <typename F>
Quad central_difference(F&& f, Quad x, int k, Quad h) {
  Quad sum = 0, binomial = 1;
  for (int j = 0; j <= k; ++j) {
    const Quad offset = Quad(j - 0.5 * k) * h;
    sum += Quad((k - j) % 2 ? -1.0 : 1.0) * binomial * f(x + offset);
    binomial = binomial * Quad(k - j) / Quad(j + 1);
  }
  return sum / pow(h, k);
}

/// Richardson table over steps h, h/2, ... eliminating the even error terms.
template <typename F>
double richardson_derivative(F&& f, double x, int k, double h = 0.05, int levels = 5) {
  if (k == 0) return static_cast<double>(f(Quad(x)));
  std::vector<std::vector<Quad>> t(levels, std::vector<Quad>(levels));
  for (int i = 0; i < levels; ++i) {
    t[i][0] = central_difference(f, Quad(x), k, Quad(h / std::pow(2.0, i)));
    for (int j = 1; j <= i; ++j) {
      const Quad factor = std::pow(4.0, j);
      t[i][j] = (factor * t[i][j - 1] - t[i - 1][j - 1]) / (factor - Quad(1.0));
    }
  }
  return static_cast<double>(t[levels - 1][levels - 1]);
}

/// Finite-difference derivative of an expression.
inline double fd_derivative(const Expr& e, double x, int k) {
  return richardson_derivative([&](Quad t) { return e.evaluate(t); }, x, k);
}

/// Random elementary expression in s that is smooth on [-1, 1].
inline std::string random_expression(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, 9);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  auto number = [&] {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", std::abs(coef(rng)) + 0.1);
    return std::string(buf);
  };
  if (depth == 0) return pick(rng) < 6 ? std::string("s") : number();
  const std::string a = random_expression(rng, depth - 1);
  switch (pick(rng)) {
    case 0:
      return "(" + a + " + " + random_expression(rng, depth - 1) + ")";
    case 1:
      return "(" + a + " - " + random_expression(rng, depth - 1) + ")";
    case 2:
      return "(" + a + " * " + random_expression(rng, depth - 1) + ")";
    case 3:
      return "(" + a + ")/(2 + (" + random_expression(rng, depth - 1) + ")^2)";
    case 4:
      return "sin(" + a + ")";
    case 5:
      return "cos(" + a + ")";
    case 6:
      return "exp(" + number() + "*sin(" + a + "))";
    case 7:
      return "log(3 + sin(" + a + "))";
    case 8:
      return "sqrt(2 + cos(" + a + "))";
    default:
      return "(" + a + ")^" + std::to_string(1 + pick(rng) % 3);
  }
}

}  // namespace nullframe::testing
