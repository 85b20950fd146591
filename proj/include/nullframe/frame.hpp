#pragma once

// Cartan frames of null curves in R^n_2 with nullity sequence {0,1,2,2,1,0,...,0}.
//
// With pseudo-arc parameter s the frame satisfies
//
//   alpha' = L1,  L1' = L2,  L2' = W3,  W3' = -k1 L2 + N2,
//   N2' = k2 L1 + N1 - k1 W3,  N1' = k2 L2 + k3 W4,
//   W4' = -k3 L1 + k4 W5,  Wi' = -k(i-1) W(i-1) + ki W(i+1),  W(n-2)' = -k(n-3) W(n-3),
//
// with <L1,N1> = 1, <L2,N2> = -1 and W3..W(n-2) orthonormal and orthogonal to
// the null vectors. The frame is read off the Taylor jet of alpha:
//
//   k1 = <W3',W3'>/2,              N2 = W3' + k1 L2
//   k2 = (<N2',N2'> - k1^2)/2,     N1 = N2' - k2 L1 + k1 W3
//   k3 = |N1' - k2 L2|,            W4 = (N1' - k2 L2)/k3
//   ki = |Wi' + k(i-1) W(i-1)|,    W(i+1) = (Wi' + k(i-1) W(i-1))/ki   (W3 replaced by L1 for i = 4)
//
// All frame vectors are carried as jets, so their derivatives are exact.
// Curvatures k3 ... k(n-3) come out positive, which makes (L1,L2,W3,N2,N1,W4,...)
// carry the orientation of (alpha', ..., alpha^(n)).

#include <nullframe/curve.hpp>

#include <span>
#include <string>
#include <vector>

namespace nullframe {

struct CartanFrame {
  double parameter = 0.0;
  Vector point;
  Vector L1, L2, N1, N2;
  Matrix W;              // columns W3 ... W(n-2)
  Vector curvatures;     // k1 ... k(n-3)
  double closure_residual = 0.0;
  double speed = 1.0;    // d sbar / dt at this point; 1 for pseudo-arc input

  int dimension() const { return static_cast<int>(L1.size()); }
  Vector w(int i) const { return W.col(i - 3); }
  double k(int i) const { return curvatures(i - 1); }

  /// Columns L1, L2, W3, N2, N1, W4, ..., W(n-2).
  Matrix ordered() const;
  /// Columns alpha, L1, L2, W3, N2, N1, W4, ..., W(n-2): the state of the frame equations.
  Matrix state() const;
};

/// Frame vectors and curvatures as series in the pseudo-arc increment.
struct FrameJet {
  double parameter = 0.0;
  double speed = 1.0;
  VectorJetd alpha, L1, L2, W3, N2, N1;
  std::vector<VectorJetd> W;  // W3 ... W(n-2)
  std::vector<Jetd> k;        // k1 ... k(n-3)
  double closure_residual = 0.0;

  int dimension() const { return alpha.dimension(); }
  const VectorJetd& w(int i) const { return W[i - 3]; }
  const Jetd& curvature(int i) const { return k[i - 1]; }
  CartanFrame value() const;
};

struct FrameOptions {
  /// Re-expand the curve locally in its pseudo-arc parameter before framing.
  /// When false the input must already satisfy <alpha''', alpha'''> = 1.
  bool reparametrize = false;
  bool check_family = true;
  double family_tol = kDefaultRankTolerance;
  double pseudo_arc_tol = 1e-6;
  /// Jet orders kept beyond what the frame needs (curvature derivatives use them).
  int extra_order = 2;
};

/// A normalizer k_i vanished. Carries the frame up to the failing index.
class FrameDegeneracyError : public NumericalError {
 public:
  FrameDegeneracyError(const std::string& message, int index, CartanFrame partial)
      : NumericalError(message), index_(index), partial_(std::move(partial)) {}

  int index() const noexcept { return index_; }
  const CartanFrame& partial() const noexcept { return partial_; }

 private:
  int index_;
  CartanFrame partial_;
};

/// Order of the position jet `frame_from_jet` needs for dimension n.
int frame_jet_order(int dimension, const FrameOptions& options = {});

/// Frame of a position jet that is already expanded in the pseudo-arc parameter.
FrameJet frame_from_jet(const PseudoMetric& metric, const VectorJetd& alpha, const FrameOptions& options = {});

FrameJet cartan_frame_jet(const JetCurve& curve, double t, const FrameOptions& options = {});
CartanFrame cartan_frame_at(const JetCurve& curve, double t, const FrameOptions& options = {});

/// Coefficient matrix M(k) with state' = state * M for the state columns
/// (alpha, L1, L2, W3, N2, N1, W4, ..., W(n-2)).
Matrix frenet_generator(int dimension, const Vector& curvatures);

/// Human-readable left sides, one per state column.
std::vector<std::string> frenet_equation_names(int dimension);

struct FrenetResidualReport {
  std::vector<std::string> equations;
  std::vector<double> max_residual;  // per equation, over the grid
  double overall = 0.0;
  std::vector<double> grid;
};

/// Residuals of the frame equations with left sides differentiated numerically
/// by five-point stencils over a uniform grid (at least 7 points).
FrenetResidualReport frenet_residuals(const JetCurve& curve, std::span<const double> grid,
                                      const FrameOptions& options = {});

}  // namespace nullframe
