#pragma once

// Pseudo-spherical Cartan curves in R^n_2 (n >= 6).
//
// With curvatures k1 ... k(n-3) and k(n-3) != 0 define
//
//   a1 = 0,  a2 = 1/k3,  a(i-1) = (a(i-2)' + a(i-3) k(i-1)) / ki,   4 <= i <= n-3,
//
// (i = 4 gives a3 = -k3'/(k3^2 k4)). A curve lies on the pseudo-sphere
// <x - xi0, x - xi0> = r^2 iff r^2 = a2^2 + ... + a(n-4)^2 is constant, and then
// the centre is xi0 = alpha + a2 W4 + a3 W5 + ... + a(n-4) W(n-2).

#include <nullframe/synthesis.hpp>

#include <span>
#include <vector>

namespace nullframe {

/// Series of a1 ... a(n-4) from curvature series k1 ... k(n-3). Each recursion
/// step costs one order. NumericalError naming i when some ki vanishes.
std::vector<Jetd> sphere_coefficient_jets(const std::vector<Jetd>& curvatures, int dimension);

/// a1 ... a(n-4) at s for a prescribed profile.
Vector sphere_coefficients(const CurvatureProfile& profile, double s);

struct SphereReport {
  std::vector<double> grid;
  std::vector<Vector> a;           // a1 ... a(n-4) per sample
  std::vector<double> radius_squared;
  std::vector<Vector> centre;      // xi0 estimate per sample
  Vector mean_centre;
  double mean_radius_squared = 0.0;
  double radius_spread = 0.0;      // max - min of radius_squared
  double centre_spread = 0.0;      // max Euclidean distance of a centre estimate from the mean
  double sphere_residual = 0.0;    // max |<alpha - xi0, alpha - xi0> - r^2| / r^2
  bool is_spherical = false;
  /// a(n-4) != 0 on the whole grid; needed for the converse direction.
  bool last_coefficient_nonzero = false;
  double tolerance = 0.0;
};

/// HypothesisError when n < 6 or k(n-3) vanishes on the grid.
SphereReport pseudo_spherical_test(const JetCurve& curve, std::span<const double> grid, double tol = 1e-5,
                                   const FrameOptions& options = {});

}  // namespace nullframe
