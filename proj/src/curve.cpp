#include <nullframe/curve.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace nullframe {

namespace {

std::string join(const std::vector<int>& values) {
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < values.size(); ++i) out << (i ? "," : "") << values[i];
  out << '}';
  return out.str();
}

std::string number(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

bool Interval::contains(double t) const {
  const double slack = 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
  return t >= lo - slack && t <= hi + slack;
}

Curve::Curve(std::vector<Expr> components, std::string parameter, Interval domain)
    : components_(std::move(components)), parameter_(std::move(parameter)), domain_(domain) {
  if (components_.empty()) throw InputError("curve needs at least one component");
  if (!(domain_.lo < domain_.hi)) {
    throw InputError("curve domain must satisfy a < b, got [" + number(domain_.lo) + ", " +
                     number(domain_.hi) + "]");
  }
  for (const Expr& e : components_) {
    if (e.empty()) throw InputError("curve component is empty");
  }
}

Curve Curve::from_strings(const std::vector<std::string>& components, const std::string& parameter,
                          Interval domain) {
  std::vector<Expr> parsed;
  parsed.reserve(components.size());
  for (std::size_t i = 0; i < components.size(); ++i) {
    try {
      parsed.push_back(parse(components[i], parameter));
    } catch (const SyntaxError& e) {
      throw SyntaxError("component " + std::to_string(i) + ": " + e.what(), e.column());
    }
  }
  return Curve(std::move(parsed), parameter, domain);
}

VectorJetd Curve::jet(double t, int order) const {
  VectorJetd j(dimension(), order);
  for (int i = 0; i < dimension(); ++i) {
    try {
      j.coefficients().row(i) = components_[i].jet<double>(t, order).coefficients().transpose();
    } catch (const EvaluationError& e) {
      throw EvaluationError("component " + std::to_string(i) + " at " + parameter_ + "=" +
                            number(t) + ": " + e.what());
    }
  }
  return j;
}

void SampledCurve::validate() const {
  if (static_cast<Eigen::Index>(grid.size()) != points.cols()) {
    throw InputError("sampled curve: grid and point counts differ");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw InputError("sampled curve: grid is not strictly increasing");
  }
  for (const Matrix& d : derivatives) {
    if (d.rows() != points.rows() || d.cols() != points.cols()) {
      throw InputError("sampled curve: derivative stack shape differs from points");
    }
  }
}

Matrix derivatives(const JetCurve& curve, double t, int m, int budget) {
  if (m < 0 || m > budget) {
    throw InputError("requested " + std::to_string(m) + " derivatives, jet budget is " +
                     std::to_string(budget));
  }
  if (!curve.domain().contains(t)) {
    throw InputError("parameter " + number(t) + " outside the curve domain");
  }
  return curve.jet(t, m).derivatives(m);
}

SampledCurve sample(const JetCurve& curve, std::span<const double> grid, int derivative_order) {
  SampledCurve out;
  out.grid.assign(grid.begin(), grid.end());
  const int n = curve.dimension();
  out.points.resize(n, static_cast<Eigen::Index>(grid.size()));
  out.derivatives.assign(derivative_order, Matrix(n, static_cast<Eigen::Index>(grid.size())));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const VectorJetd j = curve.jet(grid[i], derivative_order);
    out.points.col(i) = j.value();
    for (int k = 1; k <= derivative_order; ++k) out.derivatives[k - 1].col(i) = j.derivative(k);
  }
  out.validate();
  return out;
}

std::vector<double> uniform_grid(Interval domain, int count) {
  if (count < 2) throw InputError("grid needs at least two points");
  std::vector<double> g(count);
  const double h = domain.length() / (count - 1);
  for (int i = 0; i < count; ++i) g[i] = domain.lo + i * h;
  g.back() = domain.hi;
  return g;
}

std::vector<double> chebyshev_grid(Interval domain, int count) {
  if (count < 1) throw InputError("grid needs at least one point");
  std::vector<double> g(count);
  const double mid = 0.5 * (domain.lo + domain.hi);
  const double half = 0.5 * domain.length();
  for (int j = 0; j < count; ++j) {
    g[j] = mid + half * std::cos((2.0 * j + 1.0) * std::numbers::pi / (2.0 * count));
  }
  std::sort(g.begin(), g.end());
  return g;
}

Classification classify(const JetCurve& curve, std::span<const double> grid, double tol) {
  if (grid.empty()) throw InputError("classification grid is empty");
  const PseudoMetric metric(curve.dimension());
  const int n = metric.dimension();
  Classification result;
  result.grid.assign(grid.begin(), grid.end());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    SequenceReport report;
    try {
      report = sequence_report(metric, derivatives(curve, grid[i], n, std::max(n, kDefaultJetBudget)), tol);
    } catch (const ClassificationError& e) {
      throw ClassificationError("at t=" + number(grid[i]) + ": " + e.what());
    }
    if (i == 0) {
      result.report = report;
      continue;
    }
    if (report.nullity != result.report.nullity || report.index != result.report.index) {
      throw ClassificationError("sequences are not constant along the curve: t=" + number(grid[0]) +
                                " gives nullity " + join(result.report.nullity) + " index " +
                                join(result.report.index) + ", t=" + number(grid[i]) +
                                " gives nullity " + join(report.nullity) + " index " +
                                join(report.index));
    }
  }
  result.in_family = result.report.nullity == family_nullity(n);
  return result;
}

ReparametrizedJet reparametrize(const VectorJetd& curve, const Jetd& speed) {
  if (!(speed[0] > 0.0)) throw HypothesisError("reparametrization speed must be positive");
  const Jetd advance = speed.integrated(0.0);  // u - u0 as a series in t - t0
  const Jetd inverse = revert(advance);
  ReparametrizedJet r;
  r.curve = compose(curve, inverse);
  r.parameter = inverse;
  r.speed = speed[0];
  return r;
}

ReparametrizedJet pseudo_arc_jet(const PseudoMetric& metric, const VectorJetd& curve) {
  if (curve.order() < 4) throw InputError("pseudo-arc reparametrization needs a jet of order >= 4");
  const VectorJetd third = curve.differentiated(3);
  const Jetd q = inner(metric, third, third);
  if (!(q[0] > 0.0)) {
    throw HypothesisError("<alpha''', alpha'''> = " + number(q[0]) +
                          " is not positive; no pseudo-arc parameter");
  }
  return reparametrize(curve, pow(q, 1.0 / 6.0));
}

ReparametrizedJet arc_length_jet(const PseudoMetric& metric, const VectorJetd& curve) {
  if (curve.order() < 1) throw InputError("arc length reparametrization needs a jet of order >= 1");
  const VectorJetd first = curve.differentiated();
  const Jetd q = inner(metric, first, first);
  if (!(q[0] > 0.0)) {
    throw HypothesisError("<c', c'> = " + number(q[0]) + " is not positive; curve is not spacelike");
  }
  return reparametrize(curve, sqrt(q));
}

double pseudo_arc_speed(const PseudoMetric& metric, const JetCurve& curve, double t) {
  const Vector third = curve.jet(t, 3).derivative(3);
  const double q = metric.squared(third);
  if (!(q > 0.0)) {
    throw HypothesisError("not pseudo-arc parametrizable: <alpha''', alpha'''> = " + number(q) +
                          " at t=" + number(t));
  }
  return std::pow(q, 1.0 / 6.0);
}

// ---------------------------------------------------------------------------
// Quintic Hermite spline

QuinticSpline::QuinticSpline(const SampledCurve& samples) : grid_(samples.grid) {
  samples.validate();
  if (samples.derivative_order() < 2) {
    throw InputError("quintic spline needs first and second derivative stacks");
  }
  if (grid_.size() < 2) throw InputError("quintic spline needs at least two samples");
  const Matrix& d1 = samples.derivatives[0];
  const Matrix& d2 = samples.derivatives[1];
  coefficients_.reserve(grid_.size() - 1);
  for (std::size_t i = 0; i + 1 < grid_.size(); ++i) {
    const double h = grid_[i + 1] - grid_[i];
    Matrix a(samples.dimension(), 6);
    a.col(0) = samples.points.col(i);
    a.col(1) = h * d1.col(i);
    a.col(2) = 0.5 * h * h * d2.col(i);
    const Vector A = samples.points.col(i + 1) - a.col(0) - a.col(1) - a.col(2);
    const Vector B = h * d1.col(i + 1) - a.col(1) - 2.0 * a.col(2);
    const Vector C = h * h * d2.col(i + 1) - 2.0 * a.col(2);
    a.col(3) = 10.0 * A - 4.0 * B + 0.5 * C;
    a.col(4) = -15.0 * A + 7.0 * B - C;
    a.col(5) = 6.0 * A - 3.0 * B + 0.5 * C;
    coefficients_.push_back(std::move(a));
  }
}

Matrix QuinticSpline::evaluate(double t, int m) const {
  if (m < 0 || m > 5) throw InputError("quintic spline derivatives are available up to order 5");
  auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
  std::size_t i = it == grid_.begin() ? 0 : static_cast<std::size_t>(it - grid_.begin()) - 1;
  i = std::min(i, coefficients_.size() - 1);
  const double h = grid_[i + 1] - grid_[i];
  const double x = (t - grid_[i]) / h;
  const Matrix& a = coefficients_[i];
  Matrix out = Matrix::Zero(a.rows(), m + 1);
  for (int j = 0; j <= m; ++j) {
    for (int k = j; k <= 5; ++k) {
      double falling = 1.0;
      for (int r = 0; r < j; ++r) falling *= (k - r);
      out.col(j) += falling * std::pow(x, k - j) * a.col(k);
    }
    out.col(j) /= std::pow(h, j);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pseudo-arc map

PseudoArcMap::PseudoArcMap(JetCurvePtr curve, int panels, double origin)
    : curve_(std::move(curve)), metric_(curve_->dimension()) {
  if (panels < 1) throw InputError("pseudo-arc table needs at least one panel");
  const Interval d = curve_->domain();
  if (!d.contains(origin)) throw InputError("pseudo-arc origin outside the curve domain");
  table_.parameter = uniform_grid(d, panels + 1);
  table_.arc.assign(panels + 1, 0.0);
  for (int j = 0; j < panels; ++j) {
    table_.arc[j + 1] = table_.arc[j] + simpson(table_.parameter[j], table_.parameter[j + 1]);
  }
  const double shift = arc_at(origin);
  for (double& a : table_.arc) a -= shift;
}

double PseudoArcMap::integrand(double t) const { return pseudo_arc_speed(metric_, *curve_, t); }

double PseudoArcMap::simpson(double a, double b) const {
  if (a == b) return 0.0;
  return (b - a) / 6.0 * (integrand(a) + 4.0 * integrand(0.5 * (a + b)) + integrand(b));
}

double PseudoArcMap::arc_at(double t) const {
  const auto& p = table_.parameter;
  auto it = std::upper_bound(p.begin(), p.end(), t);
  std::size_t j = it == p.begin() ? 0 : static_cast<std::size_t>(it - p.begin()) - 1;
  j = std::min(j, p.size() - 2);
  return table_.arc[j] + simpson(p[j], t);
}

double PseudoArcMap::parameter_at(double arc) const {
  const auto& a = table_.arc;
  const auto& p = table_.parameter;
  auto it = std::upper_bound(a.begin(), a.end(), arc);
  std::size_t j = it == a.begin() ? 0 : static_cast<std::size_t>(it - a.begin()) - 1;
  j = std::min(j, a.size() - 2);
  double lo = p[j], hi = p[j + 1];
  const double span = a[j + 1] - a[j];
  double t = lo + (hi - lo) * std::clamp((arc - a[j]) / span, 0.0, 1.0);
  for (int iter = 0; iter < 60; ++iter) {
    const double residual = a[j] + simpson(p[j], t) - arc;
    if (residual > 0) hi = std::min(hi, t);
    else lo = std::max(lo, t);
    double next = t - residual / integrand(t);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - t) <= 1e-15 * std::max(1.0, std::abs(t))) return next;
    t = next;
  }
  return t;
}

PseudoArcCurve::PseudoArcCurve(JetCurvePtr curve, int panels)
    : PseudoArcCurve(curve, panels, curve->domain().lo) {}

PseudoArcCurve::PseudoArcCurve(JetCurvePtr curve, int panels, double origin)
    : map_(std::move(curve), panels, origin), metric_(map_.curve().dimension()) {}

VectorJetd PseudoArcCurve::jet(double arc, int order) const {
  const double t = map_.parameter_at(arc);
  const VectorJetd base = map_.curve().jet(t, std::max(order + 2, 4));
  return pseudo_arc_jet(metric_, base).curve.truncated(order);
}

PseudoArcResampling pseudo_arc_reparam(JetCurvePtr curve, int density, int derivative_order) {
  if (density < 2) throw InputError("pseudo-arc resampling density must be at least 2");
  if (derivative_order < 0) throw InputError("derivative order must be nonnegative");
  const PseudoMetric metric(curve->dimension());
  const PseudoArcMap map(curve, density, curve->domain().lo);

  PseudoArcResampling out;
  out.table = map.table();
  const std::vector<double> arcs = uniform_grid(map.arc_domain(), density + 1);
  out.curve.grid = arcs;
  out.curve.points.resize(metric.dimension(), density + 1);
  out.curve.derivatives.assign(derivative_order, Matrix(metric.dimension(), density + 1));
  for (int m = 0; m <= density; ++m) {
    const double t = map.parameter_at(arcs[m]);
    const ReparametrizedJet rj = pseudo_arc_jet(metric, curve->jet(t, std::max(derivative_order + 2, 4)));
    out.curve.points.col(m) = rj.curve.value();
    for (int k = 1; k <= derivative_order; ++k) out.curve.derivatives[k - 1].col(m) = rj.curve.derivative(k);
  }
  out.curve.validate();

  if (derivative_order >= 2) {
    const QuinticSpline spline(out.curve);
    for (int m = 0; m < density; ++m) {
      const double mid = 0.5 * (arcs[m] + arcs[m + 1]);
      const Vector exact = curve->point(map.parameter_at(mid));
      out.interpolation_error =
          std::max(out.interpolation_error, (spline.evaluate(mid).col(0) - exact).norm());
    }
  }
  return out;
}

}  // namespace nullframe
