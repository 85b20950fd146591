#pragma once

// Bertrand pairs of null Cartan curves in R^5_2.
//
// A Cartan curve alpha in R^5_2 has a Bertrand mate exactly when k1 = k2 = 0.
// The mate is alpha_bar = alpha + mu W3 with pseudo-arc correspondence
// sbar = s, and its frame satisfies
//
//   Lbar1 = L1 + mu N2,   Lbar2 = L2 + mu N1,   Wbar3 = W3.

#include <nullframe/frame.hpp>

#include <span>
#include <vector>

namespace nullframe {

inline constexpr double kDefaultBertrandTolerance = 1e-9;

struct BertrandCheck {
  bool is_bertrand = false;
  double max_k1 = 0.0;
  double max_k2 = 0.0;
  double tolerance = 0.0;
  std::vector<double> grid;
};

/// True iff max |k1| and max |k2| over the grid are both at most tol.
BertrandCheck bertrand_check(const JetCurve& curve, std::span<const double> grid,
                             double tol = kDefaultBertrandTolerance, const FrameOptions& options = {});

/// alpha + mu alpha''' as a jet curve over the same pseudo-arc parameter.
class BertrandMateCurve final : public JetCurve {
 public:
  BertrandMateCurve(JetCurvePtr base, double mu);

  int dimension() const override { return base_->dimension(); }
  Interval domain() const override { return base_->domain(); }
  VectorJetd jet(double s, int order) const override;

  double mu() const { return mu_; }

 private:
  JetCurvePtr base_;
  double mu_;
};

struct PairReport {
  /// sbar = s + correspondence_offset.
  double correspondence_offset = 0.0;
  /// max |dsbar/ds - 1| from framing the mate in its own pseudo-arc parameter.
  double speed_deviation = 0.0;
  /// max over samples of the Euclidean sine between W3 and Wbar3.
  double alignment_defect = 0.0;
  double W3_defect = 0.0;  // max |Wbar3 - W3|
  double L1_defect = 0.0;  // max |Lbar1 - (L1 + mu N2)|
  double L2_defect = 0.0;  // max |Lbar2 - (L2 + mu N1)|
  bool verdict = false;
  double tolerance = 0.0;
};

struct BertrandMate {
  SampledCurve mate;
  std::vector<CartanFrame> frames;       // frames of alpha
  std::vector<CartanFrame> mate_frames;  // frames of the mate
  BertrandCheck check;
  PairReport report;
};

/// Construct and certify the mate on the grid. HypothesisError when the curve
/// is not Bertrand (reporting max |k1|, |k2|); InputError for mu = 0.
BertrandMate bertrand_mate(JetCurvePtr curve, double mu, std::span<const double> grid,
                           double tol = kDefaultBertrandTolerance, double pair_tol = 1e-7);

/// Euclidean sine of the angle between two nonzero vectors.
double linear_dependence_defect(const Vector& a, const Vector& b);

/// For any family curve: max over the grid of the defect between W3 and the
/// direction of d^3/ds^3 (alpha + mu W3). Zero exactly for Bertrand curves.
double forced_mate_alignment_defect(JetCurvePtr curve, double mu, std::span<const double> grid);

}  // namespace nullframe
