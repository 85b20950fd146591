#pragma once

// Evolutes and involutes for Cartan curves in R^6_2.
//
// The evolute of a pseudo-arc parametrized Cartan curve is the curve of
// osculating-sphere centres E = alpha + (1/k3) W4; it is spacelike with
// E' = (1/k3)' W4 wherever (1/k3)' != 0. Conversely, the involute of a
// spacelike curve c with unit tangent T and arc length s is I = c - s T; when c
// satisfies the hypotheses of the converse construction, I is a Cartan curve
// with k3 = 1/s whose evolute is c again.

#include <nullframe/frame.hpp>

#include <span>
#include <vector>

namespace nullframe {

/// E = alpha + W4 / k3 as a jet curve over alpha's pseudo-arc parameter.
class EvoluteCurve final : public JetCurve {
 public:
  explicit EvoluteCurve(JetCurvePtr alpha);

  int dimension() const override { return alpha_->dimension(); }
  Interval domain() const override { return alpha_->domain(); }
  VectorJetd jet(double s, int order) const override;

 private:
  JetCurvePtr alpha_;
};

struct EvoluteReport {
  SampledCurve curve;                  // E with its first two derivatives
  std::vector<double> speed_squared;   // <E', E'>
  std::vector<double> expected;        // ((1/k3)')^2
  std::vector<double> k3;
  double max_deviation = 0.0;          // max |<E',E'> - ((1/k3)')^2|
  double radius_defect = 0.0;          // max |<E - alpha, E - alpha> - 1/k3^2|
  bool spacelike = false;
};

/// HypothesisError naming the grid point where k3 = 0 or (1/k3)' = 0.
EvoluteReport evolute(JetCurvePtr alpha, std::span<const double> grid, double tol = 1e-10);

/// Arc length of a spacelike sampled curve from grid node t0 by cubic Hermite
/// quadrature of |c'| (needs first and second derivative samples).
std::vector<double> arc_length_table(const SampledCurve& c, double t0);

/// I = c - (s(t) + arc_offset) T with s measured from grid node t0.
SampledCurve involute(const SampledCurve& c, double t0, double arc_offset = 0.0);

/// The involute as a jet curve; arc length by composite Gauss-Legendre quadrature.
class InvoluteCurve final : public JetCurve {
 public:
  InvoluteCurve(JetCurvePtr c, double t0, double arc_offset = 0.0);

  int dimension() const override { return c_->dimension(); }
  Interval domain() const override { return c_->domain(); }
  VectorJetd jet(double t, int order) const override;

  /// s(t) = arc_offset + integral_t0^t |c'|.
  double arc_length(double t) const;

 private:
  JetCurvePtr c_;
  PseudoMetric metric_;
  double t0_;
  double offset_;
};

struct InvoluteFrameReport {
  std::vector<double> grid;
  std::vector<double> arc;            // s at each sample
  std::vector<double> k3;             // of the involute
  double k3_relative_error = 0.0;     // max |k3 s - 1|
  int w4_sign = 0;                    // +1 if W4 = T, -1 if W4 = -T
  double w4_defect = 0.0;             // max |W4 - sign T|
  double evolute_defect = 0.0;        // max |E_I - c|
  double null_tangent_defect = 0.0;   // max |<I', I'>| in arc length
  double third_defect = 0.0;          // max relative |<I''',I'''> - s^2 eta^2|
  double tangent_null_defect = 0.0;   // max |<T', T'>|
  double min_eta_squared = 0.0;       // min <T''', T'''>
  int span_rank = 0;                  // rank of span{L1,...,N1} + span{T',...,T^(5)}
  bool verdict = false;
  double tolerance = 0.0;
};

/// Frames I = c - s T as a Cartan curve at every grid value (s > 0 required)
/// and compares against the converse construction. HypothesisError, naming
/// the failing condition, when c'' is not null, <c'''',c''''> = 0,
/// {c'',...,c^(6)} is dependent, or <T''',T'''> < 0.
InvoluteFrameReport involute_frame_check(JetCurvePtr c, double t0, double arc_offset, std::span<const double> grid,
                                         double tol = 1e-4);

}  // namespace nullframe
