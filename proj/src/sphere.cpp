#include <nullframe/sphere.hpp>

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

constexpr double kVanishing = 1e-12;

}  // namespace

std::vector<Jetd> sphere_coefficient_jets(const std::vector<Jetd>& k, int n) {
  if (n < 6) throw HypothesisError("pseudo-sphere coefficients need dimension >= 6");
  if (static_cast<int>(k.size()) != n - 3) throw InputError("need k1 ... k(n-3)");
  auto curvature = [&](int i) -> const Jetd& { return k[i - 1]; };
  auto divide = [&](const Jetd& num, int i) {
    if (std::abs(curvature(i)[0]) < kVanishing) {
      throw NumericalError("sphere recursion is singular at i = " + std::to_string(i) + ": k" +
                           std::to_string(i) + " vanishes");
    }
    return num / curvature(i);
  };
  std::vector<Jetd> a;  // a[j - 1] is a_j
  a.push_back(Jetd(curvature(3).order(), 0.0));
  a.push_back(divide(Jetd::constant(1.0, curvature(3).order()), 3));
  for (int i = 4; i <= n - 3; ++i) {
    a.push_back(divide(a[i - 3].differentiated() + a[i - 4] * curvature(i - 1), i));
  }
  return a;
}

Vector sphere_coefficients(const CurvatureProfile& profile, double s) {
  profile.validate();
  const int n = profile.dimension;
  const std::vector<Jetd> a = sphere_coefficient_jets(profile.jets(s, n), n);
  Vector r(static_cast<Eigen::Index>(a.size()));
  for (std::size_t j = 0; j < a.size(); ++j) r(j) = a[j][0];
  return r;
}

SphereReport pseudo_spherical_test(const JetCurve& curve, std::span<const double> grid, double tol,
                                   const FrameOptions& options) {
  const int n = curve.dimension();
  if (n < 6) throw HypothesisError("the pseudo-sphere test needs dimension >= 6, got " + std::to_string(n));
  if (grid.empty()) throw InputError("pseudo-sphere test needs a nonempty grid");
  const PseudoMetric metric(n);

  SphereReport r;
  r.tolerance = tol;
  r.grid.assign(grid.begin(), grid.end());
  r.last_coefficient_nonzero = true;
  for (double s : grid) {
    const FrameJet f = cartan_frame_jet(curve, s, options);
    if (std::abs(f.curvature(n - 3)[0]) < kVanishing) {
      throw HypothesisError("k" + std::to_string(n - 3) + " vanishes at s = " + format(s));
    }
    const std::vector<Jetd> a = sphere_coefficient_jets(f.k, n);
    Vector values(static_cast<Eigen::Index>(a.size()));
    Vector centre = f.alpha.value();
    double radius2 = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
      values(j) = a[j][0];
      if (j >= 1) {
        radius2 += values(j) * values(j);
        centre += values(j) * f.w(static_cast<int>(j) + 3).value();
      }
    }
    if (std::abs(values(values.size() - 1)) <= tol) r.last_coefficient_nonzero = false;
    r.a.push_back(values);
    r.radius_squared.push_back(radius2);
    r.centre.push_back(centre);
  }

  const auto [lo, hi] = std::minmax_element(r.radius_squared.begin(), r.radius_squared.end());
  r.radius_spread = *hi - *lo;
  r.mean_radius_squared = 0.0;
  r.mean_centre = Vector::Zero(n);
  for (std::size_t i = 0; i < r.centre.size(); ++i) {
    r.mean_radius_squared += r.radius_squared[i];
    r.mean_centre += r.centre[i];
  }
  r.mean_radius_squared /= static_cast<double>(r.centre.size());
  r.mean_centre /= static_cast<double>(r.centre.size());
  for (const Vector& c : r.centre) r.centre_spread = std::max(r.centre_spread, (c - r.mean_centre).norm());
  for (double s : grid) {
    const Vector d = curve.point(s) - r.mean_centre;
    r.sphere_residual = std::max(r.sphere_residual, std::abs(metric.squared(d) - r.mean_radius_squared) /
                                                        std::max(r.mean_radius_squared, kVanishing));
  }
  const double scale = std::max(1.0, r.mean_centre.norm());
  r.is_spherical = r.radius_spread <= tol * std::max(1.0, r.mean_radius_squared) && r.centre_spread <= tol * scale;
  return r;
}

}  // namespace nullframe
