#include <nullframe/bertrand.hpp>

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

void require_r25(const JetCurve& curve) {
  if (curve.dimension() != 5) {
    throw HypothesisError("Bertrand pairs are defined in R^5_2; curve has dimension " +
                          std::to_string(curve.dimension()));
  }
}

}  // namespace

BertrandCheck bertrand_check(const JetCurve& curve, std::span<const double> grid, double tol,
                             const FrameOptions& options) {
  require_r25(curve);
  if (grid.empty()) throw InputError("Bertrand check needs a nonempty grid");
  BertrandCheck r;
  r.tolerance = tol;
  r.grid.assign(grid.begin(), grid.end());
  for (double s : grid) {
    const CartanFrame f = cartan_frame_at(curve, s, options);
    r.max_k1 = std::max(r.max_k1, std::abs(f.k(1)));
    r.max_k2 = std::max(r.max_k2, std::abs(f.k(2)));
  }
  r.is_bertrand = r.max_k1 <= tol && r.max_k2 <= tol;
  return r;
}

BertrandMateCurve::BertrandMateCurve(JetCurvePtr base, double mu) : base_(std::move(base)), mu_(mu) {
  if (!base_) throw InputError("Bertrand mate needs a base curve");
  require_r25(*base_);
  if (mu == 0.0 || !std::isfinite(mu)) throw InputError("mu must be a nonzero finite number");
}

VectorJetd BertrandMateCurve::jet(double s, int order) const {
  const VectorJetd alpha = base_->jet(s, order + 3);
  return alpha.truncated(order) + mu_ * alpha.differentiated(3);
}

double linear_dependence_defect(const Vector& a, const Vector& b) {
  const double na = a.norm(), nb = b.norm();
  if (!(na > 0) || !(nb > 0)) throw NumericalError("alignment of a zero vector is undefined");
  // |b - (b.u)u| / |b| with u = a/|a|; avoids the cancellation in sqrt(1 - cos^2).
  const Vector u = a / na;
  return std::min(1.0, (b - b.dot(u) * u).norm() / nb);
}

BertrandMate bertrand_mate(JetCurvePtr curve, double mu, std::span<const double> grid, double tol,
                           double pair_tol) {
  if (!curve) throw InputError("Bertrand mate needs a curve");
  auto mate_curve = std::make_shared<BertrandMateCurve>(curve, mu);
  BertrandMate r;
  r.check = bertrand_check(*curve, grid, tol);
  if (!r.check.is_bertrand) {
    throw HypothesisError("not a Bertrand curve: max |k1| = " + format(r.check.max_k1) +
                          ", max |k2| = " + format(r.check.max_k2) + " (tolerance " + format(tol) + ")");
  }

  r.mate = sample(*mate_curve, grid, 3);
  r.report.tolerance = pair_tol;
  FrameOptions local;
  local.reparametrize = true;
  for (double s : grid) {
    const CartanFrame f = cartan_frame_at(*curve, s);
    const CartanFrame g = cartan_frame_at(*mate_curve, s, local);
    PairReport& p = r.report;
    p.speed_deviation = std::max(p.speed_deviation, std::abs(g.speed - 1.0));
    p.alignment_defect = std::max(p.alignment_defect, linear_dependence_defect(f.w(3), g.w(3)));
    p.W3_defect = std::max(p.W3_defect, (g.w(3) - f.w(3)).norm());
    p.L1_defect = std::max(p.L1_defect, (g.L1 - (f.L1 + mu * f.N2)).norm());
    p.L2_defect = std::max(p.L2_defect, (g.L2 - (f.L2 + mu * f.N1)).norm());
    r.frames.push_back(f);
    r.mate_frames.push_back(g);
  }
  const PairReport& p = r.report;
  r.report.verdict = p.alignment_defect <= pair_tol && p.W3_defect <= pair_tol && p.speed_deviation <= pair_tol;
  return r;
}

double forced_mate_alignment_defect(JetCurvePtr curve, double mu, std::span<const double> grid) {
  if (!curve) throw InputError("forced alignment needs a curve");
  const BertrandMateCurve mate(curve, mu);
  double worst = 0.0;
  for (double s : grid) {
    const CartanFrame f = cartan_frame_at(*curve, s);
    const Vector third = mate.jet(s, 3).derivative(3);
    worst = std::max(worst, linear_dependence_defect(f.w(3), third));
  }
  return worst;
}

}  // namespace nullframe
