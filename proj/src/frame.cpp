#include <nullframe/frame.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nullframe {

namespace {

std::string number(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

std::string join(const std::vector<int>& values) {
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < values.size(); ++i) out << (i ? "," : "") << values[i];
  out << '}';
  return out.str();
}

// Normalizes a spacelike vector jet; `index` is the curvature being produced.
struct Normalized {
  VectorJetd unit;
  Jetd length;
};

Normalized normalize_spacelike(const PseudoMetric& metric, const VectorJetd& v, int index,
                               const FrameJet& partial) {
  const Jetd q = inner(metric, v, v);
  const double euclidean = v.value().norm();
  const double scale = std::max(1.0, euclidean * euclidean);
  if (q[0] < -1e-8 * scale) {
    throw HypothesisError("normal direction for k" + std::to_string(index) +
                          " is timelike (<v,v> = " + number(q[0]) + "); not a Cartan curve");
  }
  if (!(std::sqrt(std::max(q[0], 0.0)) >= 1e-10 * std::sqrt(scale))) {
    throw FrameDegeneracyError("curvature k" + std::to_string(index) + " vanishes (|k| = " +
                                   number(std::sqrt(std::max(q[0], 0.0))) +
                                   "); frame cannot be continued",
                               index, partial.value());
  }
  Normalized r;
  r.length = sqrt(q);
  r.unit = v / r.length;
  return r;
}

}  // namespace

Matrix CartanFrame::ordered() const {
  const int n = dimension();
  Matrix f(n, n);
  f.col(0) = L1;
  f.col(1) = L2;
  f.col(2) = W.col(0);
  f.col(3) = N2;
  f.col(4) = N1;
  for (Eigen::Index j = 1; j < W.cols(); ++j) f.col(4 + j) = W.col(j);
  return f;
}

Matrix CartanFrame::state() const {
  const int n = dimension();
  Matrix s(n, n + 1);
  s.col(0) = point;
  s.rightCols(n) = ordered();
  return s;
}

CartanFrame FrameJet::value() const {
  CartanFrame f;
  f.parameter = parameter;
  f.speed = speed;
  f.closure_residual = closure_residual;
  const int n = dimension();
  f.point = alpha.value();
  f.L1 = L1.dimension() ? L1.value() : Vector();
  f.L2 = L2.dimension() ? L2.value() : Vector();
  f.N1 = N1.dimension() ? N1.value() : Vector();
  f.N2 = N2.dimension() ? N2.value() : Vector();
  f.W.resize(n, static_cast<Eigen::Index>(W.size()));
  for (std::size_t j = 0; j < W.size(); ++j) f.W.col(j) = W[j].value();
  f.curvatures.resize(static_cast<Eigen::Index>(k.size()));
  for (std::size_t j = 0; j < k.size(); ++j) f.curvatures(j) = k[j][0];
  return f;
}

int frame_jet_order(int dimension, const FrameOptions& options) {
  return dimension + 1 + std::max(0, options.extra_order);
}

FrameJet frame_from_jet(const PseudoMetric& metric, const VectorJetd& alpha, const FrameOptions& options) {
  const int n = metric.dimension();
  if (alpha.dimension() != n) throw InputError("curve dimension does not match the metric");
  if (n < 5) throw InputError("Cartan frames need dimension >= 5");
  if (alpha.order() < n + 1) {
    throw InputError("frame extraction needs a jet of order >= " + std::to_string(n + 1));
  }

  const Matrix basis = alpha.derivatives(n);
  if (options.check_family) {
    const SequenceReport report = sequence_report(metric, basis, options.family_tol);
    if (report.nullity != family_nullity(n)) {
      throw HypothesisError("nullity sequence " + join(report.nullity) + " is not the family " +
                            join(family_nullity(n)));
    }
  }
  const double self = metric.squared(basis.col(2));
  if (std::abs(self - 1.0) > options.pseudo_arc_tol) {
    throw HypothesisError("curve is not pseudo-arc parametrized: <alpha''', alpha'''> = " + number(self));
  }

  FrameJet f;
  f.alpha = alpha;
  f.L1 = alpha.differentiated();
  f.L2 = f.L1.differentiated();
  f.W3 = f.L2.differentiated();
  f.W.push_back(f.W3);

  const VectorJetd dW3 = f.W3.differentiated();
  const Jetd k1 = 0.5 * inner(metric, dW3, dW3);
  f.k.push_back(k1);
  f.N2 = dW3 + k1 * f.L2;

  const VectorJetd dN2 = f.N2.differentiated();
  const Jetd k2 = 0.5 * (inner(metric, dN2, dN2) - k1 * k1);
  f.k.push_back(k2);
  f.N1 = dN2 - k2 * f.L1 + k1 * f.W3;

  const VectorJetd dN1 = f.N1.differentiated();
  if (n == 5) {
    f.closure_residual = (dN1 - k2 * f.L2).value().norm();
  } else {
    Normalized w4 = normalize_spacelike(metric, dN1 - k2 * f.L2, 3, f);
    f.k.push_back(w4.length);
    f.W.push_back(w4.unit);
    for (int i = 4; i <= n - 3; ++i) {
      const VectorJetd& previous = i == 4 ? f.L1 : f.w(i - 1);
      Normalized next = normalize_spacelike(metric, f.w(i).differentiated() + f.curvature(i - 1) * previous, i, f);
      f.k.push_back(next.length);
      f.W.push_back(next.unit);
    }
    const int last = n - 2;
    const VectorJetd& previous = last == 4 ? f.L1 : f.w(last - 1);
    f.closure_residual = (f.w(last).differentiated() + f.curvature(last - 1) * previous).value().norm();
  }

  const CartanFrame value = f.value();
  if (orientation_sign(value.ordered()) != orientation_sign(basis)) {
    throw NumericalError("frame orientation disagrees with the derivative basis");
  }
  return f;
}

FrameJet cartan_frame_jet(const JetCurve& curve, double t, const FrameOptions& options) {
  const PseudoMetric metric(curve.dimension());
  if (!curve.domain().contains(t)) throw InputError("frame parameter " + number(t) + " outside the curve domain");
  const int order = frame_jet_order(metric.dimension(), options);
  FrameJet f;
  if (options.reparametrize) {
    const ReparametrizedJet rj = pseudo_arc_jet(metric, curve.jet(t, order + 2));
    f = frame_from_jet(metric, rj.curve, options);
    f.speed = rj.speed;
  } else {
    f = frame_from_jet(metric, curve.jet(t, order), options);
  }
  f.parameter = t;
  return f;
}

CartanFrame cartan_frame_at(const JetCurve& curve, double t, const FrameOptions& options) {
  return cartan_frame_jet(curve, t, options).value();
}

Matrix frenet_generator(int n, const Vector& k) {
  if (k.size() != n - 3) throw InputError("frame equations in dimension n need n-3 curvatures");
  // Column indices of the state.
  constexpr int alpha = 0, L1 = 1, L2 = 2, W3 = 3, N2 = 4, N1 = 5;
  auto W = [](int i) { return i + 2; };  // i >= 4
  Matrix m = Matrix::Zero(n + 1, n + 1);
  m(L1, alpha) = 1.0;
  m(L2, L1) = 1.0;
  m(W3, L2) = 1.0;
  m(L2, W3) = -k(0);
  m(N2, W3) = 1.0;
  m(L1, N2) = k(1);
  m(N1, N2) = 1.0;
  m(W3, N2) = -k(0);
  m(L2, N1) = k(1);
  if (n >= 6) {
    m(W(4), N1) = k(2);
    m(L1, W(4)) = -k(2);
    for (int i = 4; i <= n - 3; ++i) {
      m(W(i + 1), W(i)) = k(i - 1);
      m(W(i), W(i + 1)) = -k(i - 1);
    }
  }
  return m;
}

std::vector<std::string> frenet_equation_names(int n) {
  std::vector<std::string> names = {"alpha' = L1", "L1' = L2", "L2' = W3", "W3' = -k1 L2 + N2",
                                    "N2' = k2 L1 + N1 - k1 W3"};
  if (n == 5) {
    names.push_back("N1' = k2 L2");
    return names;
  }
  names.push_back("N1' = k2 L2 + k3 W4");
  names.push_back(n == 6 ? "W4' = -k3 L1" : "W4' = -k3 L1 + k4 W5");
  for (int i = 5; i <= n - 2; ++i) {
    std::string s = "W" + std::to_string(i) + "' = -k" + std::to_string(i - 1) + " W" + std::to_string(i - 1);
    if (i <= n - 3) s += " + k" + std::to_string(i) + " W" + std::to_string(i + 1);
    names.push_back(s);
  }
  return names;
}

FrenetResidualReport frenet_residuals(const JetCurve& curve, std::span<const double> grid,
                                      const FrameOptions& options) {
  if (grid.size() < 7) throw InputError("Frenet residuals need a grid of at least 7 points");
  const double h = (grid.back() - grid.front()) / static_cast<double>(grid.size() - 1);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (std::abs(grid[i] - grid[i - 1] - h) > 1e-9 * std::max(1.0, std::abs(h))) {
      throw InputError("Frenet residuals need a uniform grid");
    }
  }
  const int n = curve.dimension();
  std::vector<CartanFrame> frames;
  frames.reserve(grid.size());
  for (double t : grid) frames.push_back(cartan_frame_at(curve, t, options));

  std::vector<Matrix> states;
  states.reserve(frames.size());
  for (const CartanFrame& f : frames) states.push_back(f.state());

  FrenetResidualReport report;
  report.equations = frenet_equation_names(n);
  report.max_residual.assign(n + 1, 0.0);
  report.grid.assign(grid.begin(), grid.end());
  const std::size_t count = states.size();
  for (std::size_t i = 0; i < count; ++i) {
    Matrix d;
    const auto& s = states;
    if (i == 0) {
      d = -25.0 * s[0] + 48.0 * s[1] - 36.0 * s[2] + 16.0 * s[3] - 3.0 * s[4];
    } else if (i == 1) {
      d = -3.0 * s[0] - 10.0 * s[1] + 18.0 * s[2] - 6.0 * s[3] + s[4];
    } else if (i == count - 1) {
      const std::size_t e = count - 1;
      d = 25.0 * s[e] - 48.0 * s[e - 1] + 36.0 * s[e - 2] - 16.0 * s[e - 3] + 3.0 * s[e - 4];
    } else if (i == count - 2) {
      const std::size_t e = count - 1;
      d = 3.0 * s[e] + 10.0 * s[e - 1] - 18.0 * s[e - 2] + 6.0 * s[e - 3] - s[e - 4];
    } else {
      d = s[i - 2] - 8.0 * s[i - 1] + 8.0 * s[i + 1] - s[i + 2];
    }
    d /= 12.0 * h;
    d /= frames[i].speed;  // d/dsbar = (dt/dsbar) d/dt
    const Matrix rhs = states[i] * frenet_generator(n, frames[i].curvatures);
    for (int j = 0; j <= n; ++j) {
      report.max_residual[j] = std::max(report.max_residual[j], (d.col(j) - rhs.col(j)).norm());
    }
  }
  report.overall = *std::max_element(report.max_residual.begin(), report.max_residual.end());
  return report;
}

}  // namespace nullframe
