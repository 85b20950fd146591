#include <nullframe/synthesis.hpp>

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace nullframe {

namespace {

std::string format(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Number of terms used to move a state from a stored step to a nearby parameter.
constexpr int kShiftTerms = 24;

Matrix evaluate_series(const std::vector<Matrix>& series, double h) {
  Matrix r = series.back();
  for (auto it = series.rbegin() + 1; it != series.rend(); ++it) r = r * h + *it;
  return r;
}

}  // namespace

CurvatureProfile CurvatureProfile::from_strings(int dimension, const std::vector<std::string>& curvatures,
                                                const std::string& parameter) {
  CurvatureProfile p;
  p.dimension = dimension;
  p.parameter = parameter;
  for (const std::string& text : curvatures) p.curvatures.push_back(parse(text, parameter));
  p.validate();
  return p;
}

void CurvatureProfile::validate() const {
  if (dimension < 5) throw InputError("curvature profiles need dimension >= 5");
  if (static_cast<int>(curvatures.size()) != dimension - 3) {
    throw InputError("dimension " + std::to_string(dimension) + " needs " + std::to_string(dimension - 3) +
                     " curvatures, got " + std::to_string(curvatures.size()));
  }
}

Vector CurvatureProfile::at(double s) const {
  Vector k(static_cast<Eigen::Index>(curvatures.size()));
  for (std::size_t i = 0; i < curvatures.size(); ++i) k(i) = curvatures[i].evaluate<double>(s);
  return k;
}

std::vector<Jetd> CurvatureProfile::jets(double s, int order) const {
  std::vector<Jetd> r;
  r.reserve(curvatures.size());
  for (const Expr& e : curvatures) r.push_back(e.jet<double>(s, order));
  return r;
}

Matrix standard_initial_frame(int n) {
  if (n < 5) throw InputError("frames need dimension >= 5");
  Matrix s = Matrix::Zero(n, n + 1);
  s(0, 1) = 1.0;  // L1 = e1 + e3
  s(2, 1) = 1.0;
  s(1, 2) = 1.0;  // L2 = e2 + e4
  s(3, 2) = 1.0;
  s(4, 3) = 1.0;  // W3 = e5
  s(1, 4) = 0.5;  // N2 = (e2 - e4)/2
  s(3, 4) = -0.5;
  s(0, 5) = -0.5;  // N1 = (-e1 + e3)/2
  s(2, 5) = 0.5;
  for (int i = 4; i <= n - 2; ++i) s(i + 1, i + 2) = 1.0;  // W_i = e_(i+2)
  return s;
}

Matrix frame_gram_reference(int n) {
  // Order L1, L2, W3, N2, N1, W4, ...
  Matrix g = Matrix::Zero(n, n);
  g(0, 4) = g(4, 0) = 1.0;
  g(1, 3) = g(3, 1) = -1.0;
  g(2, 2) = 1.0;
  for (int j = 5; j < n; ++j) g(j, j) = 1.0;
  return g;
}

double frame_defect(const PseudoMetric& metric, const Matrix& state) {
  const int n = metric.dimension();
  const Matrix frame = state.rightCols(n);
  return (metric.gram(frame) - frame_gram_reference(n)).cwiseAbs().maxCoeff();
}

Matrix metric_isometry(const PseudoMetric& metric, const Matrix& skew) {
  const int n = metric.dimension();
  if (skew.rows() != n || skew.cols() != n) throw InputError("skew matrix has the wrong shape");
  if ((skew + skew.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, skew.cwiseAbs().maxCoeff())) {
    throw InputError("matrix is not antisymmetric");
  }
  const Matrix a = metric.signature().asDiagonal() * skew;
  const Matrix id = Matrix::Identity(n, n);
  return (id - a).partialPivLu().solve(id + a);
}

std::vector<Matrix> frame_state_series(const CurvatureProfile& profile, double s, const Matrix& state, int order) {
  const int n = profile.dimension;
  const std::vector<Jetd> k = profile.jets(s, order);
  const Matrix constant = frenet_generator(n, Vector::Zero(n - 3));
  std::vector<Matrix> m;
  m.reserve(order + 1);
  for (int j = 0; j <= order; ++j) {
    Vector kj(n - 3);
    for (int i = 0; i < n - 3; ++i) kj(i) = k[i][j];
    m.push_back(j == 0 ? frenet_generator(n, kj) : Matrix(frenet_generator(n, kj) - constant));
  }
  // (k+1) S_(k+1) = sum_j S_(k-j) M_j
  std::vector<Matrix> series{state};
  for (int q = 0; q < order; ++q) {
    Matrix next = Matrix::Zero(state.rows(), state.cols());
    for (int j = 0; j <= q; ++j) next += series[q - j] * m[j];
    series.push_back(next / static_cast<double>(q + 1));
  }
  return series;
}

Matrix SynthesizedCurve::state_at(double s) const {
  if (!domain_.contains(s)) throw InputError("parameter " + format(s) + " outside the synthesis interval");
  const double position = std::clamp((s - grid_.front()) / step_, 0.0, static_cast<double>(grid_.size() - 1));
  const std::size_t i = static_cast<std::size_t>(std::lround(position));
  const double h = s - grid_[i];
  if (h == 0.0) return states_[i];
  return evaluate_series(frame_state_series(profile_, grid_[i], states_[i], kShiftTerms), h);
}

VectorJetd SynthesizedCurve::jet(double s, int order) const {
  const std::vector<Matrix> series = frame_state_series(profile_, s, state_at(s), order);
  VectorJetd r(dimension(), order);
  for (int k = 0; k <= order; ++k) r.coefficients().col(k) = series[k].col(0);
  return r;
}

SynthesizedCurve SynthesizedCurve::from_states(CurvatureProfile profile, std::vector<double> grid,
                                               std::vector<Matrix> states) {
  profile.validate();
  const int n = profile.dimension;
  if (grid.size() < 2 || grid.size() != states.size()) {
    throw InputError("stored synthesis needs at least two samples with one state each");
  }
  const double h = (grid.back() - grid.front()) / static_cast<double>(grid.size() - 1);
  if (!(h > 0)) throw InputError("stored synthesis grid must be increasing");
  const PseudoMetric metric(n);
  SynthesizedCurve curve;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (std::abs(grid[i] - (grid.front() + static_cast<double>(i) * h)) > 1e-9 * std::max(1.0, std::abs(h))) {
      throw InputError("stored synthesis grid must be uniform");
    }
    if (states[i].rows() != n || states[i].cols() != n + 1) {
      throw InputError("stored state " + std::to_string(i) + " must be " + std::to_string(n) + " x " +
                       std::to_string(n + 1));
    }
    curve.max_defect_ = std::max(curve.max_defect_, frame_defect(metric, states[i]));
  }
  curve.profile_ = std::move(profile);
  curve.domain_ = {grid.front(), grid.back()};
  curve.step_ = h;
  curve.grid_ = std::move(grid);
  curve.states_ = std::move(states);
  return curve;
}

SynthesizedCurve synthesize(const CurvatureProfile& profile, Interval interval, const SynthesisOptions& options) {
  profile.validate();
  const int n = profile.dimension;
  if (!(options.step > 0)) throw InputError("synthesis step must be positive");
  if (!(interval.hi > interval.lo)) throw InputError("synthesis interval must have lo < hi");
  const PseudoMetric metric(n);

  Matrix state = options.initial_state ? *options.initial_state : standard_initial_frame(n);
  if (state.rows() != n || state.cols() != n + 1) {
    throw InputError("initial state must be " + std::to_string(n) + " x " + std::to_string(n + 1));
  }
  const double initial_defect = frame_defect(metric, state);
  if (initial_defect > 1e-9) {
    throw InputError("initial frame violates the frame relations (defect " + format(initial_defect) + ")");
  }

  const long steps = std::max(1L, static_cast<long>(std::ceil(interval.length() / options.step - 1e-9)));
  const double h = interval.length() / static_cast<double>(steps);

  SynthesizedCurve curve;
  curve.profile_ = profile;
  curve.domain_ = interval;
  curve.step_ = h;
  curve.grid_.reserve(steps + 1);
  curve.states_.reserve(steps + 1);
  curve.grid_.push_back(interval.lo);
  curve.states_.push_back(state);
  curve.max_defect_ = initial_defect;

  auto rhs = [&](double s, const Matrix& y) { return Matrix(y * frenet_generator(n, profile.at(s))); };
  for (long i = 0; i < steps; ++i) {
    const double s = interval.lo + static_cast<double>(i) * h;
    const Matrix k1 = rhs(s, state);
    const Matrix k2 = rhs(s + 0.5 * h, state + 0.5 * h * k1);
    const Matrix k3 = rhs(s + 0.5 * h, state + 0.5 * h * k2);
    const Matrix k4 = rhs(s + h, state + h * k3);
    state += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double defect = frame_defect(metric, state);
    curve.max_defect_ = std::max(curve.max_defect_, defect);
    if (!(defect <= options.defect_limit)) {
      throw NumericalError("frame Gram defect " + format(defect) + " at s = " + format(s + h) +
                           " exceeds " + format(options.defect_limit) + "; try halving the step (" +
                           format(h / 2) + ")");
    }
    curve.grid_.push_back(i + 1 == steps ? interval.hi : s + h);
    curve.states_.push_back(state);
  }
  return curve;
}

}  // namespace nullframe
