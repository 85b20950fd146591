// Acceptance run: one line per criterion, "[PASS]" or "[FAIL]", with the
// measured quantities as evidence. Exit status is nonzero if any criterion fails.

#include "support.hpp"

#include <nullframe/frame.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>

namespace nf = nullframe;
using nf::Matrix;
using nf::PseudoMetric;
using nf::Vector;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream evidence;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      evidence << "FAILED " << what << "; ";
    }
  }
  template <class T>
  Outcome& note(const std::string& key, const T& value) {
    evidence << key << "=" << value << "; ";
    return *this;
  }
};

double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

nf::SynthesisOptions with_state(const Matrix& state) {
  nf::SynthesisOptions o;
  o.initial_state = state;
  return o;
}

void golden_frame(Outcome& o) {
  const auto g = nf::testing::golden_curve();
  double frame_error = 0, k_max = 0;
  for (double s : {0.0, 0.3, 1.0}) {
    const nf::CartanFrame f = nf::cartan_frame_at(*g, s);
    const auto expect = nf::testing::golden_frame(s);
    frame_error = std::max({frame_error, max_abs(f.L1 - expect.L1), max_abs(f.L2 - expect.L2),
                            max_abs(f.w(3) - expect.W3), max_abs(f.N2 - expect.N2), max_abs(f.N1 - expect.N1)});
    k_max = std::max({k_max, std::abs(f.k(1)), std::abs(f.k(2))});
  }
  o.note("max frame error", frame_error).note("max |k1|,|k2|", k_max);
  o.require(frame_error <= 1e-9, "frame error <= 1e-9");
  o.require(k_max <= 1e-9, "|k1|, |k2| <= 1e-9");
}

void golden_mate(Outcome& o) {
  const auto grid = nf::uniform_grid({-1, 2}, 31);
  const nf::BertrandMate m = nf::bertrand_mate(nf::testing::golden_curve(), 1.0, grid);
  double error = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    error = std::max(error, max_abs(m.mate.points.col(i) - nf::testing::golden_mate(grid[i], 1.0)));
  }
  o.note("max mate error", error).note("correspondence offset", m.report.correspondence_offset);
  o.require(error <= 1e-9, "mate error <= 1e-9");
  o.require(std::abs(m.report.correspondence_offset) <= 1e-12, "sbar = s");
}

void bertrand_theorem(Outcome& o) {
  const auto grid = nf::uniform_grid({0.05, 0.95}, 10);
  std::mt19937_64 rng(2024);
  double w3 = 0;
  for (int trial = 0; trial < 5; ++trial) {
    const auto c = nf::testing::synthesized(5, {"0", "0"}, {0, 1},
                                            with_state(nf::testing::random_initial_state(5, rng)));
    o.require(nf::bertrand_check(*c, grid).is_bertrand, "k1 = k2 = 0 curve passes the check");
    for (double mu : {-0.5, 1.0, 2.0}) {
      const nf::BertrandMate m = nf::bertrand_mate(c, mu, grid);
      w3 = std::max(w3, m.report.W3_defect);
    }
  }
  o.note("max W3 defect", w3);
  o.require(w3 <= 1e-7, "Wbar3 = W3 to 1e-7");

  double weakest = INFINITY;
  for (const auto& k : std::vector<std::vector<std::string>>{{"0.1", "0"}, {"0", "0.1"}, {"0.3", "0.2*s"}, {"-0.1*(1 + s)", "0"}}) {
    const auto c = nf::testing::synthesized(5, k, {0, 1});
    bool refused = false;
    try {
      nf::bertrand_mate(c, 1.0, grid);
    } catch (const nf::HypothesisError&) {
      refused = true;
    }
    o.require(refused, "curve with k1 = " + k[0] + ", k2 = " + k[1] + " refused");
    weakest = std::min(weakest, nf::forced_mate_alignment_defect(c, 1.0, grid));
  }
  o.note("min forced alignment defect", weakest);
  o.require(weakest > 1e-3, "forced alignment defect > 1e-3");
}

void pseudo_sphere(Outcome& o) {
  const auto grid = nf::uniform_grid({0, 1}, 21);
  const auto sphere = nf::testing::synthesized(6, {"0.2", "-0.1", "0.5"}, {0, 1});
  const auto r = nf::pseudo_spherical_test(*sphere, grid);
  const PseudoMetric g(6);
  double relative = 0;
  for (double s : grid) {
    const Vector d = sphere->point(s) - r.mean_centre;
    relative = std::max(relative, std::abs(g.squared(d) - 4.0) / 4.0);
  }
  o.note("is_spherical", r.is_spherical).note("centre spread", r.centre_spread).note("r^2 relative error", relative);
  o.require(r.is_spherical, "k3 = 1/2 is spherical");
  o.require(r.centre_spread <= 1e-5, "centre spread <= 1e-5");
  o.require(relative <= 1e-5, "<alpha - xi0, alpha - xi0> = 4 to 1e-5 relative");

  const auto varying = nf::pseudo_spherical_test(*nf::testing::synthesized(6, {"0.2", "-0.1", "1 + s"}, {0, 1}), grid);
  o.note("k3 = 1 + t spherical", varying.is_spherical);
  o.require(!varying.is_spherical, "k3 = 1 + t is not spherical");

  // Step i = 5 in R^8_2: a4 = (a3' + a2 k4)/k5 with a2 = 1/k3 and a3 = a2'/k4,
  // evaluated here by direct jet arithmetic on the curvature expressions.
  const auto p = nf::CurvatureProfile::from_strings(8, {"0.1", "s", "1 + s/2 + 0.1*sin(s)", "2 - 0.3*s^2", "1.5 + 0.2*exp(s)"});
  double step_error = 0, closed_error = 0;
  for (double s : {0.0, 0.35, 0.8, 1.2}) {
    const auto k = p.jets(s, 2);
    const nf::Jetd a2 = 1.0 / k[2];
    const nf::Jetd a3 = a2.differentiated() / k[3].truncated(1);
    const double a4 = (a3.derivative(1) + a2.value() * k[3].value()) / k[4].value();
    const double computed = nf::sphere_coefficients(p, s)(3);
    step_error = std::max(step_error, std::abs(computed - a4));
    // The same step from hand-differentiated curvatures.
    const double k3 = 1 + s / 2 + 0.1 * std::sin(s), dk3 = 0.5 + 0.1 * std::cos(s), ddk3 = -0.1 * std::sin(s);
    const double k4 = 2 - 0.3 * s * s, dk4 = -0.6 * s, k5 = 1.5 + 0.2 * std::exp(s);
    const double da2 = -dk3 / (k3 * k3), dda2 = -ddk3 / (k3 * k3) + 2 * dk3 * dk3 / (k3 * k3 * k3);
    const double da3 = (dda2 * k4 - da2 * dk4) / (k4 * k4);
    closed_error = std::max(closed_error, std::abs(computed - (da3 + k4 / k3) / k5));
  }
  o.note("n=8 step i=5 jet error", step_error).note("closed-form error", closed_error);
  o.require(step_error <= 1e-8, "i = 5 recursion matches the jet oracle to 1e-8");
  o.require(closed_error <= 1e-8, "i = 5 recursion matches the closed form to 1e-8");
}

void evolute_round_trip(Outcome& o) {
  const auto alpha = nf::testing::synthesized(6, {"0.2", "-0.1", "1/(1 + s)"}, {0, 1});
  const auto grid = nf::uniform_grid({0, 1}, 41);
  const auto e = nf::evolute(alpha, grid);
  // rho = 1 + t is increasing; the matched arc length at t0 = 0 is rho(0) = 1.
  const auto back = nf::involute(e.curve, 0.0, 1.0);
  double distance = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    distance = std::max(distance, (back.points.col(i) - alpha->point(grid[i])).norm());
  }
  o.note("spacelike", e.spacelike).note("max |<E',E'> - ((1/k3)')^2|", e.max_deviation).note("sup distance", distance);
  o.require(e.spacelike, "E is spacelike");
  o.require(e.max_deviation <= 1e-5, "speed identity to 1e-5");
  o.require(distance <= 1e-5, "involute of E returns alpha to 1e-5");
}

void involute_to_evolute(Outcome& o) {
  const auto alpha = nf::testing::synthesized(6, {"0.2", "-0.1", "1/(1 + s)"}, {-0.6, 1.1});
  const auto c = std::make_shared<const nf::EvoluteCurve>(alpha);
  const auto r = nf::involute_frame_check(c, 0.0, 1.0, nf::uniform_grid({-0.5, 1.0}, 31));
  o.note("s range", std::to_string(r.arc.front()) + ".." + std::to_string(r.arc.back()))
      .note("max |k3 s - 1|", r.k3_relative_error)
      .note("max |E_I - c|", r.evolute_defect);
  o.require(std::abs(r.arc.front() - 0.5) < 1e-9 && std::abs(r.arc.back() - 2.0) < 1e-9, "s spans [0.5, 2]");
  o.require(r.k3_relative_error <= 1e-4, "k3 = 1/s to 1e-4 relative");
  o.require(r.evolute_defect <= 1e-4, "E_I = c to 1e-4");
}

void frenet_residual_suite(Outcome& o) {
  const auto golden = nf::frenet_residuals(*nf::testing::golden_curve(), nf::uniform_grid({0.1, 1.1}, 61));
  o.note("golden residual", golden.overall);
  o.require(golden.overall <= 1e-6, "golden residual <= 1e-6");
  double fixtures = 0;
  for (const auto& [n, k] : std::vector<std::pair<int, std::vector<std::string>>>{
           {6, {"0.2", "-0.1", "1 + s"}},
           {7, {"0.3*cos(s)", "0.1 + 0.2*s", "1.5", "0.8 + 0.3*s^2"}},
           {8, {"-0.2*s", "0.15", "2 - s", "1 + 0.5*sin(s)", "0.7"}}}) {
    const auto c = nf::testing::synthesized(n, k, {0, 1});
    fixtures = std::max(fixtures, nf::frenet_residuals(*c, nf::uniform_grid({0.05, 0.95}, 61)).overall);
  }
  o.note("max fixture residual", fixtures);
  o.require(fixtures <= 1e-5, "fixture residuals <= 1e-5");

  const auto profile = nf::CurvatureProfile::from_strings(6, {"0.2", "-0.1", "1 + s"});
  nf::SynthesisOptions coarse, fine;
  coarse.step = 0.05;
  fine.step = 0.025;
  const double ratio = nf::synthesize(profile, {0, 1}, coarse).max_defect() /
                       nf::synthesize(profile, {0, 1}, fine).max_defect();
  o.note("defect ratio on halving", ratio);
  o.require(ratio >= 8.0, "halving the step reduces the defect at least 8x");
}

void classification_suite(Outcome& o) {
  const auto c = nf::classify(*nf::testing::golden_curve(), nf::chebyshev_grid({0, 1.5}));
  std::ostringstream seq;
  for (int r : c.report.nullity) seq << r;
  o.note("golden nullity", seq.str()).note("degree", c.report.degeneration_degree);
  o.require(c.report.nullity == std::vector<int>({0, 1, 2, 2, 1, 0}), "nullity {0,1,2,2,1,0}");
  o.require(c.report.degeneration_degree == 2, "degeneration degree 2");

  std::mt19937_64 rng(77);
  std::normal_distribution<double> normal;
  int violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 5 + trial % 4;
    Matrix basis(n, n);
    if (trial % 2 == 0) {
      for (Eigen::Index i = 0; i < basis.size(); ++i) basis.data()[i] = normal(rng);
    } else {
      // Frame under a random isometry, mixed upper-triangularly: degenerate flag.
      Matrix mix = Matrix::Zero(n, n);
      for (int i = 0; i < n; ++i) {
        mix(i, i) = (rng() % 2 ? 1 : -1) * (0.5 + std::abs(normal(rng)));
        for (int j = i + 1; j < n; ++j) mix(i, j) = normal(rng);
      }
      basis = nf::testing::random_initial_state(n, rng).rightCols(n) * mix;
    }
    const auto r = nf::sequence_report(PseudoMetric(n), basis);
    for (int i = 1; i <= n; ++i) {
      const int dr = r.nullity[i] - r.nullity[i - 1], dq = r.index[i] - r.index[i - 1];
      if (std::abs(dr) > 1 || dq < 0 || dq > 1) ++violations;
    }
  }
  o.note("random bases", 100).note("step violations", violations);
  o.require(violations == 0, "|dr| <= 1 and 0 <= dq <= 1 on every basis");
}

void jet_engine(Outcome& o) {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> base(-1.0, 1.0);
  double worst = 0;
  int checked = 0;
  while (checked < 20) {
    const nf::Expr e = nf::parse(nf::testing::random_expression(rng, 3));
    if (e.to_string().find('s') == std::string::npos) continue;
    const double t = base(rng);
    const nf::Jetd j = e.jet(t, 6);
    for (int k = 0; k <= 6; ++k) {
      const double fd = nf::testing::fd_derivative(e, t, k);
      // Vanishing derivatives are compared absolutely.
      worst = std::max(worst, std::abs(j.derivative(k) - fd) / std::max(std::abs(fd), 1e-9));
    }
    ++checked;
  }
  o.note("random expressions", checked).note("max relative error", worst);
  o.require(worst <= 1e-6, "orders 0..6 within 1e-6 relative");

  std::uniform_int_distribution<int> coef(-9, 9);
  double poly = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const int degree = 1 + trial % 7;
    std::vector<double> c(degree + 1);
    std::string text;
    for (int i = 0; i <= degree; ++i) {
      c[i] = coef(rng);
      text += (i ? " + " : "") + std::to_string(static_cast<int>(c[i])) + "*s^" + std::to_string(i);
    }
    const double b = 0.25 * (trial % 9) - 1.0;
    const nf::Jetd j = nf::parse(text).jet(b, degree + 2);
    for (int k = 0; k <= degree + 2; ++k) {
      double expect = 0;
      for (int i = k; i <= degree; ++i) {
        double binom = 1;
        for (int m = 0; m < k; ++m) binom = binom * (i - m) / (m + 1);
        expect += c[i] * binom * std::pow(b, i - k);
      }
      poly = std::max(poly, std::abs(j[k] - expect) / std::max(1.0, std::abs(expect)));
    }
  }
  o.note("polynomial error", poly);
  o.require(poly <= 1e-12, "polynomial jets exact to 1e-12");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"golden frame reproduction", golden_frame},
      {"Bertrand mate reproduction", golden_mate},
      {"Bertrand theorem, both directions", bertrand_theorem},
      {"pseudo-sphere theorem", pseudo_sphere},
      {"evolute/involute round trip", evolute_round_trip},
      {"involute-to-evolute", involute_to_evolute},
      {"Frenet residual suite", frenet_residual_suite},
      {"classification suite", classification_suite},
      {"jet engine", jet_engine},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.evidence << "exception: " << e.what() << "; ";
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.note("time s", seconds);
    if (seconds >= 10) o.require(false, "runtime under 10 s");
    if (!o.pass) ++failures;
    std::printf("[%s] %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.evidence.str().c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
