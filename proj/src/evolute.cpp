#include <nullframe/evolute.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

namespace nullframe {

namespace {

std::string format(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void require_r26(int n, const char* what) {
  if (n != 6) throw HypothesisError(std::string(what) + " is defined in R^6_2; curve has dimension " + std::to_string(n));
}

// Frame options giving frame vectors and k3 to `order` in dimension 6.
FrameOptions evolute_options(int order) {
  FrameOptions o;
  o.extra_order = std::max(2, order - 1);
  return o;
}

std::size_t node_index(const std::vector<double>& grid, double t0) {
  const double slack = 1e-12 * std::max(1.0, std::abs(t0));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (std::abs(grid[i] - t0) <= slack) return i;
  }
  throw InputError("base point t0 = " + format(t0) + " is not a grid node");
}

// Gauss-Legendre nodes and weights on [-1, 1], eight points.
constexpr std::array<double, 4> kGaussNodes = {0.18343464249564980, 0.52553240991632899, 0.79666647741362674,
                                               0.96028985649753623};
constexpr std::array<double, 4> kGaussWeights = {0.36268378337836198, 0.31370664587788729, 0.22238103445337447,
                                                 0.10122853629037626};

}  // namespace

EvoluteCurve::EvoluteCurve(JetCurvePtr alpha) : alpha_(std::move(alpha)) {
  if (!alpha_) throw InputError("evolute needs a curve");
  require_r26(alpha_->dimension(), "the evolute");
}

VectorJetd EvoluteCurve::jet(double s, int order) const {
  const FrameJet f = cartan_frame_jet(*alpha_, s, evolute_options(order));
  return f.alpha.truncated(order) + (f.w(4) / f.curvature(3)).truncated(order);
}

EvoluteReport evolute(JetCurvePtr alpha, std::span<const double> grid, double tol) {
  if (!alpha) throw InputError("evolute needs a curve");
  require_r26(alpha->dimension(), "the evolute");
  const PseudoMetric metric(6);
  const EvoluteCurve e(alpha);
  EvoluteReport r;
  r.spacelike = true;
  for (double s : grid) {
    const FrameJet f = cartan_frame_jet(*alpha, s, evolute_options(2));
    const Jetd& k3 = f.curvature(3);
    if (std::abs(k3[0]) <= tol) throw HypothesisError("k3 vanishes at s = " + format(s));
    const Jetd rho = 1.0 / k3;
    const double drho = rho.derivative(1);
    if (std::abs(drho) <= tol) throw HypothesisError("(1/k3)' vanishes at s = " + format(s));
    const VectorJetd ej = e.jet(s, 1);
    const double speed2 = metric.squared(ej.derivative(1));
    r.speed_squared.push_back(speed2);
    r.expected.push_back(drho * drho);
    r.k3.push_back(k3[0]);
    r.max_deviation = std::max(r.max_deviation, std::abs(speed2 - drho * drho));
    r.radius_defect = std::max(r.radius_defect,
                               std::abs(metric.squared(ej.value() - f.alpha.value()) - rho[0] * rho[0]));
    if (!(speed2 > 0)) r.spacelike = false;
  }
  r.curve = sample(e, grid, 2);
  return r;
}

std::vector<double> arc_length_table(const SampledCurve& c, double t0) {
  c.validate();
  if (c.derivative_order() < 2) throw InputError("arc length needs first and second derivative samples");
  const PseudoMetric metric(c.dimension());
  const std::size_t count = c.size();
  std::vector<double> f(count), df(count);
  for (std::size_t i = 0; i < count; ++i) {
    const Vector d1 = c.derivatives[0].col(i);
    const double q = metric.squared(d1);
    if (!(q > 0)) {
      throw HypothesisError("curve is not spacelike at t = " + format(c.grid[i]) + " (<c',c'> = " + format(q) + ")");
    }
    f[i] = std::sqrt(q);
    df[i] = metric.inner(d1, Vector(c.derivatives[1].col(i))) / f[i];
  }
  const std::size_t base = node_index(c.grid, t0);
  std::vector<double> s(count, 0.0);
  auto panel = [&](std::size_t i) {
    const double h = c.grid[i + 1] - c.grid[i];
    return 0.5 * h * (f[i] + f[i + 1]) + h * h / 12.0 * (df[i] - df[i + 1]);
  };
  for (std::size_t i = base; i + 1 < count; ++i) s[i + 1] = s[i] + panel(i);
  for (std::size_t i = base; i > 0; --i) s[i - 1] = s[i] - panel(i - 1);
  return s;
}

SampledCurve involute(const SampledCurve& c, double t0, double arc_offset) {
  const std::vector<double> s = arc_length_table(c, t0);
  const PseudoMetric metric(c.dimension());
  SampledCurve r;
  r.grid = c.grid;
  r.points.resize(c.dimension(), static_cast<Eigen::Index>(c.size()));
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Vector d1 = c.derivatives[0].col(i);
    const Vector T = d1 / std::sqrt(metric.squared(d1));
    r.points.col(i) = c.points.col(i) - (s[i] + arc_offset) * T;
  }
  return r;
}

InvoluteCurve::InvoluteCurve(JetCurvePtr c, double t0, double arc_offset)
    : c_(std::move(c)), metric_(c_ ? c_->dimension() : 4), t0_(t0), offset_(arc_offset) {
  if (!c_) throw InputError("involute needs a curve");
  if (!c_->domain().contains(t0)) throw InputError("base point t0 = " + format(t0) + " outside the curve domain");
}

double InvoluteCurve::arc_length(double t) const {
  const double length = t - t0_;
  const int panels = std::max(1, static_cast<int>(std::ceil(std::abs(length) / 0.05)));
  const double h = length / panels;
  auto speed = [&](double u) {
    const double q = metric_.squared(c_->jet(u, 1).derivative(1));
    if (!(q > 0)) throw HypothesisError("curve is not spacelike at t = " + format(u));
    return std::sqrt(q);
  };
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = t0_ + (p + 0.5) * h;
    for (std::size_t j = 0; j < kGaussNodes.size(); ++j) {
      const double dx = 0.5 * h * kGaussNodes[j];
      sum += kGaussWeights[j] * (speed(mid - dx) + speed(mid + dx));
    }
  }
  return offset_ + 0.5 * h * sum;
}

VectorJetd InvoluteCurve::jet(double t, int order) const {
  const VectorJetd c = c_->jet(t, order + 1);
  const VectorJetd d = c.differentiated();
  const Jetd q = inner(metric_, d, d);
  if (!(q[0] > 0)) throw HypothesisError("curve is not spacelike at t = " + format(t));
  const Jetd speed = sqrt(q);
  const VectorJetd T = d / speed;
  const Jetd s = speed.integrated(arc_length(t));
  return c.truncated(order) - s * T;
}

InvoluteFrameReport involute_frame_check(JetCurvePtr c, double t0, double arc_offset, std::span<const double> grid,
                                         double tol) {
  if (!c) throw InputError("involute check needs a curve");
  require_r26(c->dimension(), "the involute construction");
  const PseudoMetric metric(6);
  const InvoluteCurve I(c, t0, arc_offset);
  FrameOptions local;
  local.reparametrize = true;

  InvoluteFrameReport r;
  r.tolerance = tol;
  r.grid.assign(grid.begin(), grid.end());
  r.min_eta_squared = INFINITY;
  int sign = 0;
  bool sign_flipped = false;
  for (double t : grid) {
    const double s = I.arc_length(t);
    if (!(s > 0)) throw InputError("arc length must be positive on the grid; s = " + format(s) + " at t = " + format(t));

    // Hypotheses on c, read in its arc length sigma about t.
    const ReparametrizedJet unit = arc_length_jet(metric, c->jet(t, 8));
    const VectorJetd& cs = unit.curve;
    const Matrix d = cs.derivatives(7);  // c' ... c^(7); T^(k) = c^(k+1)
    const double scale2 = std::max(1.0, d.col(1).squaredNorm());
    const double c2 = metric.squared(d.col(1));
    if (std::abs(c2) > tol * scale2) throw HypothesisError("c'' is not null at t = " + format(t) + ": <c'',c''> = " + format(c2));
    const double eta2 = metric.squared(d.col(3));
    if (std::abs(eta2) <= 1e-12 * std::max(1.0, d.col(3).squaredNorm())) {
      throw HypothesisError("<c'''',c''''> vanishes at t = " + format(t));
    }
    if (eta2 < 0) throw HypothesisError("<T''',T'''> < 0 at t = " + format(t) + ": " + format(eta2));
    if (numerical_rank(d.middleCols(1, 5)) != 5) {
      throw HypothesisError("{c'',...,c^(6)} is linearly dependent at t = " + format(t));
    }
    r.tangent_null_defect = std::max(r.tangent_null_defect, std::abs(c2));
    r.min_eta_squared = std::min(r.min_eta_squared, eta2);

    // Identities of I = c - s T in the arc length of c.
    const VectorJetd Ts = cs.differentiated();
    const Jetd sigma = Jetd::variable(s, cs.order());
    const VectorJetd Is = cs - sigma * Ts;
    const Matrix id = Is.derivatives(3);
    r.null_tangent_defect = std::max(r.null_tangent_defect, std::abs(metric.squared(id.col(0))));
    const double third = metric.squared(id.col(2));
    r.third_defect = std::max(r.third_defect, std::abs(third - s * s * eta2) / (s * s * eta2));

    // Cartan frame of the involute.
    const CartanFrame f = cartan_frame_at(I, t, local);
    const double k3 = f.k(3);
    r.arc.push_back(s);
    r.k3.push_back(k3);
    r.k3_relative_error = std::max(r.k3_relative_error, std::abs(k3 * s - 1.0));
    const Vector T = d.col(0);
    const int here = f.w(4).dot(T) >= 0 ? 1 : -1;
    if (sign != 0 && here != sign) sign_flipped = true;
    sign = here;
    r.w4_defect = std::max(r.w4_defect, (f.w(4) - here * T).norm());
    const Vector e = f.point + f.w(4) / k3;
    r.evolute_defect = std::max(r.evolute_defect, (e - c->point(t)).norm());

    Matrix stacked(6, 10);
    stacked << f.L1, f.L2, f.w(3), f.N2, f.N1, d.middleCols(1, 5);
    r.span_rank = std::max(r.span_rank, numerical_rank(stacked, 1e-7));
  }
  r.w4_sign = sign_flipped ? 0 : sign;
  r.verdict = r.w4_sign != 0 && r.k3_relative_error <= tol && r.w4_defect <= tol && r.evolute_defect <= tol &&
              r.null_tangent_defect <= tol && r.third_defect <= tol && r.span_rank == 5;
  return r;
}

}  // namespace nullframe
