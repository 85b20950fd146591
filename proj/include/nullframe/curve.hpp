#pragma once

// Curves in R^n_2 and their derivative systems.
//
// Everything downstream works from JetCurve: a curve that can hand out the
// truncated Taylor expansion of its position at any parameter value. Symbolic
// curves, synthesized solutions of the frame equations, and the constructions
// built from them (mates, evolutes, involutes, reparametrizations) all
// implement it.

#include <nullframe/expr.hpp>
#include <nullframe/metric.hpp>
#include <nullframe/vector_jet.hpp>

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace nullframe {

using VectorJetd = VectorJet<double>;
using Jetd = Jet<double>;

inline constexpr int kDefaultJetBudget = 8;
inline constexpr int kDefaultClassificationPoints = 17;

struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  double length() const { return hi - lo; }
  /// Closed-interval membership with a relative slack of 1e-12.
  bool contains(double t) const;
};

class JetCurve {
 public:
  virtual ~JetCurve() = default;

  virtual int dimension() const = 0;
  virtual Interval domain() const = 0;

  /// Taylor coefficients of the position about t; column k is alpha^(k)(t)/k!.
  virtual VectorJetd jet(double t, int order) const = 0;

  Vector point(double t) const { return jet(t, 0).value(); }
};

using JetCurvePtr = std::shared_ptr<const JetCurve>;

/// n component expressions over one parameter on a closed interval.
class Curve final : public JetCurve {
 public:
  Curve(std::vector<Expr> components, std::string parameter, Interval domain);

  /// Parse each component with `parameter` as its symbol.
  static Curve from_strings(const std::vector<std::string>& components, const std::string& parameter,
                            Interval domain);

  int dimension() const override { return static_cast<int>(components_.size()); }
  Interval domain() const override { return domain_; }
  VectorJetd jet(double t, int order) const override;

  const std::vector<Expr>& components() const { return components_; }
  const std::string& parameter() const { return parameter_; }

 private:
  std::vector<Expr> components_;
  std::string parameter_;
  Interval domain_;
};

/// A curve known at grid values, with optional derivative stacks.
struct SampledCurve {
  std::vector<double> grid;
  Matrix points;                    // n x N, one column per grid value
  std::vector<Matrix> derivatives;  // derivatives[k-1] holds the k-th derivative, n x N

  int dimension() const { return static_cast<int>(points.rows()); }
  std::size_t size() const { return grid.size(); }
  int derivative_order() const { return static_cast<int>(derivatives.size()); }

  /// Throws InputError unless the grid is strictly increasing and shapes agree.
  void validate() const;
};

/// Columns alpha'(t) ... alpha^(m)(t).
Matrix derivatives(const JetCurve& curve, double t, int m, int budget = kDefaultJetBudget);

/// Sample position and the first `derivative_order` derivatives on a grid.
SampledCurve sample(const JetCurve& curve, std::span<const double> grid, int derivative_order = 0);

std::vector<double> uniform_grid(Interval domain, int count);
/// Chebyshev-Gauss points mapped into the open interval, ascending.
std::vector<double> chebyshev_grid(Interval domain, int count = kDefaultClassificationPoints);

struct Classification {
  SequenceReport report;
  bool in_family = false;  // nullity sequence is {0,1,2,2,1,0,...,0}
  std::vector<double> grid;
};

/// Sequence report at every grid value; the sequences must agree along the grid.
Classification classify(const JetCurve& curve, std::span<const double> grid,
                        double tol = kDefaultRankTolerance);

/// A jet re-expanded in a new parameter u about the same point.
struct ReparametrizedJet {
  VectorJetd curve;  // position as a series in u - u0
  Jetd parameter;    // t - t0 as a series in u - u0
  double speed = 1;  // du/dt at the base point
};

/// New parameter u with du/dt = speed(t); `speed` is a series in t - t0 with positive value.
ReparametrizedJet reparametrize(const VectorJetd& curve, const Jetd& speed);

/// Pseudo-arc parameter: du/dt = <alpha''', alpha'''>^(1/6). Loses two orders.
ReparametrizedJet pseudo_arc_jet(const PseudoMetric& metric, const VectorJetd& curve);

/// Arc length of a spacelike curve: du/dt = <c', c'>^(1/2). Keeps the order.
ReparametrizedJet arc_length_jet(const PseudoMetric& metric, const VectorJetd& curve);

/// <alpha''', alpha'''>^(1/6) at t; HypothesisError when the self-product is not positive.
double pseudo_arc_speed(const PseudoMetric& metric, const JetCurve& curve, double t);

/// Piecewise quintic Hermite interpolant through positions, first and second
/// derivatives. C^2 across nodes; reproduces quintic polynomials exactly.
class QuinticSpline {
 public:
  explicit QuinticSpline(const SampledCurve& samples);

  Interval domain() const { return {grid_.front(), grid_.back()}; }
  /// Columns 0..m hold the value and derivatives up to m (m <= 5).
  Matrix evaluate(double t, int m = 0) const;

 private:
  std::vector<double> grid_;
  std::vector<Matrix> coefficients_;  // per interval: n x 6 in the local unit coordinate
};

/// Monotone table t_j -> sbar(t_j) built by composite Simpson quadrature.
struct PseudoArcTable {
  std::vector<double> parameter;
  std::vector<double> arc;
};

/// Global pseudo-arc map of a curve: sbar(t) = int_origin^t <alpha''', alpha'''>^(1/6).
class PseudoArcMap {
 public:
  PseudoArcMap(JetCurvePtr curve, int panels, double origin);

  const PseudoArcTable& table() const { return table_; }
  Interval arc_domain() const { return {table_.arc.front(), table_.arc.back()}; }

  double arc_at(double t) const;
  double parameter_at(double arc) const;
  const JetCurve& curve() const { return *curve_; }

 private:
  double simpson(double a, double b) const;
  double integrand(double t) const;

  JetCurvePtr curve_;
  PseudoMetric metric_;
  PseudoArcTable table_;
};

/// The curve re-expressed in its pseudo-arc parameter.
class PseudoArcCurve final : public JetCurve {
 public:
  PseudoArcCurve(JetCurvePtr curve, int panels = 512);
  PseudoArcCurve(JetCurvePtr curve, int panels, double origin);

  int dimension() const override { return map_.curve().dimension(); }
  Interval domain() const override { return map_.arc_domain(); }
  VectorJetd jet(double arc, int order) const override;

  const PseudoArcMap& map() const { return map_; }

 private:
  PseudoArcMap map_;
  PseudoMetric metric_;
};

struct PseudoArcResampling {
  SampledCurve curve;            // samples at uniform pseudo-arc values, derivatives in sbar
  PseudoArcTable table;          // sbar(t) on the quadrature nodes
  double interpolation_error = 0;  // max spline deviation at interval midpoints
};

/// Resample at `density`+1 uniformly spaced pseudo-arc values (origin: domain start).
PseudoArcResampling pseudo_arc_reparam(JetCurvePtr curve, int density, int derivative_order = 3);

}  // namespace nullframe
