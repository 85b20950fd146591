#pragma once

// Curves with prescribed Cartan curvatures, obtained by integrating the frame
// equations state' = state * M(k) with classical fourth-order Runge-Kutta.
//
// The state carries alpha together with every frame vector, so the frame Gram
// defect after each step measures the integration error directly. Between
// steps the curve is expanded from the nearest stored state by the Taylor
// recurrence of the same linear system, which yields exact jets of any order.

#include <nullframe/frame.hpp>

#include <optional>
#include <string>
#include <vector>

namespace nullframe {

/// Curvature functions k1 ... k(n-3) in the pseudo-arc parameter.
struct CurvatureProfile {
  int dimension = 5;
  std::string parameter = "s";
  std::vector<Expr> curvatures;

  static CurvatureProfile from_strings(int dimension, const std::vector<std::string>& curvatures,
                                       const std::string& parameter = "s");

  /// InputError unless there are exactly n-3 curvatures and n >= 5.
  void validate() const;
  Vector at(double s) const;
  /// Series of every curvature about s.
  std::vector<Jetd> jets(double s, int order) const;
};

/// Columns alpha, L1, L2, W3, N2, N1, W4, ..., W(n-2) at alpha = 0:
/// L1 = e1+e3, N1 = (-e1+e3)/2, L2 = e2+e4, N2 = (e2-e4)/2, W3 = e5, W4 = e6, ...
Matrix standard_initial_frame(int dimension);

/// Gram matrix every frame (columns in state order, without alpha) must have.
Matrix frame_gram_reference(int dimension);

/// Max-abs deviation of the frame Gram matrix of `state` from the reference.
double frame_defect(const PseudoMetric& metric, const Matrix& state);

/// Cayley transform (I - A)^{-1} (I + A) of A = g * skew: an orientation-preserving
/// isometry of the index-2 metric. `skew` must be antisymmetric.
Matrix metric_isometry(const PseudoMetric& metric, const Matrix& skew);

struct SynthesisOptions {
  double step = 1e-3;
  /// Full initial state (n x (n+1)); the standard frame at the origin when empty.
  std::optional<Matrix> initial_state;
  /// Maximum tolerated frame Gram defect.
  double defect_limit = 1e-4;
};

/// Taylor coefficients S_0 ... S_K of the frame-equation solution through `state` at s.
std::vector<Matrix> frame_state_series(const CurvatureProfile& profile, double s, const Matrix& state,
                                       int order);

class SynthesizedCurve final : public JetCurve {
 public:
  int dimension() const override { return profile_.dimension; }
  Interval domain() const override { return domain_; }
  VectorJetd jet(double s, int order) const override;

  /// Rebuild from stored states on a uniform grid (e.g. a saved synthesis).
  static SynthesizedCurve from_states(CurvatureProfile profile, std::vector<double> grid,
                                      std::vector<Matrix> states);

  const CurvatureProfile& profile() const { return profile_; }
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<Matrix>& states() const { return states_; }
  double step() const { return step_; }
  /// Largest frame Gram defect seen after any step.
  double max_defect() const { return max_defect_; }
  /// Frame state at any parameter, expanded from the nearest stored step.
  Matrix state_at(double s) const;

 private:
  friend SynthesizedCurve synthesize(const CurvatureProfile&, Interval, const SynthesisOptions&);
  SynthesizedCurve() = default;

  CurvatureProfile profile_;
  Interval domain_;
  double step_ = 0;
  std::vector<double> grid_;
  std::vector<Matrix> states_;
  double max_defect_ = 0;
};

/// RK4 integration over `interval` starting at interval.lo with a uniform step no
/// larger than options.step. NumericalError when the defect exceeds the limit.
SynthesizedCurve synthesize(const CurvatureProfile& profile, Interval interval, const SynthesisOptions& options = {});

}  // namespace nullframe
