#include <nullframe/bertrand.hpp>
#include <nullframe/cli.hpp>
#include <nullframe/evolute.hpp>
#include <nullframe/sphere.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>

namespace nullframe::cli {

namespace {

struct Options {
  std::string input;
  std::optional<int> grid;
  std::optional<double> tol;
  double mu = 1.0;
  std::optional<double> t0;
  std::optional<double> offset;
  double step = 1e-3;
  std::string format = "json";
  std::optional<std::string> output;
};

struct Report {
  Json summary;
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;
  Json details;  // JSON-only payload
};

struct LoadedCurve {
  JetCurvePtr curve;
  std::string kind;  // "expression" or "synthesized"
  std::optional<int> grid;
  std::shared_ptr<const SynthesizedCurve> synthesized;
};

Json vec(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

void append(std::vector<Json>& row, const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) row.emplace_back(v(i));
}

std::vector<std::string> names(const std::string& prefix, int count, int first = 1) {
  std::vector<std::string> r;
  for (int i = 0; i < count; ++i) r.push_back(prefix + std::to_string(first + i));
  return r;
}

void extend(std::vector<std::string>& a, const std::vector<std::string>& b) { a.insert(a.end(), b.begin(), b.end()); }

LoadedCurve load_curve(const Json& j) {
  LoadedCurve r;
  if (is_stored_synthesis(j)) {
    auto s = std::make_shared<const SynthesizedCurve>(synthesis_from_json(j));
    r.curve = s;
    r.synthesized = s;
    r.kind = "synthesized";
  } else {
    CurveFile f = curve_from_json(j);
    r.curve = std::make_shared<const Curve>(std::move(f.curve));
    r.grid = f.grid;
    r.kind = "expression";
  }
  return r;
}

int grid_count(const Options& o, const LoadedCurve& c, int fallback) {
  const int n = o.grid.value_or(c.grid.value_or(fallback));
  if (n < 2) throw InputError("--grid must be at least 2");
  return n;
}

bool is_pseudo_arc(const JetCurve& c, std::span<const double> grid) {
  const PseudoMetric metric(c.dimension());
  for (double t : grid) {
    const VectorJetd j = c.jet(t, 3);
    if (std::abs(metric.squared(j.derivative(3)) - 1.0) > 1e-6) return false;
  }
  return true;
}

/// The curve in its pseudo-arc parameter; a global reparametrization when needed.
JetCurvePtr pseudo_arc(const JetCurvePtr& c, Json& summary) {
  const Interval d = c->domain();
  const std::vector<double> probe = uniform_grid(d, 5);
  if (is_pseudo_arc(*c, probe)) {
    summary["reparametrized"] = false;
    return c;
  }
  auto p = std::make_shared<const PseudoArcCurve>(c, 512);
  summary["reparametrized"] = true;
  summary["pseudo_arc_domain"] = {p->domain().lo, p->domain().hi};
  return p;
}

Report cmd_classify(const Options& o, const LoadedCurve& c) {
  const double tol = o.tol.value_or(kDefaultRankTolerance);
  const std::vector<double> grid = chebyshev_grid(c.curve->domain(), grid_count(o, c, kDefaultClassificationPoints));
  const Classification k = classify(*c.curve, grid, tol);
  Report r;
  r.summary["nullity_sequence"] = k.report.nullity;
  r.summary["index_sequence"] = k.report.index;
  r.summary["degeneration_degree"] = k.report.degeneration_degree;
  r.summary["in_family"] = k.in_family;
  r.summary["grid_points"] = grid.size();
  r.summary["tolerance"] = tol;
  r.columns = {"t", "orientation"};
  const int n = c.curve->dimension();
  for (double t : grid) r.rows.push_back({t, orientation_sign(derivatives(*c.curve, t, n, n + 1))});
  return r;
}

Report cmd_frame(const Options& o, const LoadedCurve& c) {
  const int n = c.curve->dimension();
  const PseudoMetric metric(n);
  const Interval d = c.curve->domain();
  const std::vector<double> grid = uniform_grid(d, grid_count(o, c, 11));
  FrameOptions opts;
  if (o.tol) opts.family_tol = *o.tol;
  opts.reparametrize = !is_pseudo_arc(*c.curve, grid);

  Report r;
  r.summary["input_kind"] = c.kind;
  r.summary["reparametrized"] = opts.reparametrize;
  r.summary["samples"] = grid.size();
  r.columns = {"t", "speed"};
  extend(r.columns, names("k", n - 3));
  extend(r.columns, names("x", n));
  for (const char* v : {"L1_", "L2_", "N1_", "N2_"}) extend(r.columns, names(v, n));
  for (int i = 3; i <= n - 2; ++i) extend(r.columns, names("W" + std::to_string(i) + "_", n));

  const Matrix reference = frame_gram_reference(n);
  double gram_defect = 0.0, closure = 0.0, prescribed = 0.0;
  for (double t : grid) {
    const CartanFrame f = cartan_frame_at(*c.curve, t, opts);
    std::vector<Json> row{t, f.speed};
    append(row, f.curvatures);
    append(row, f.point);
    append(row, f.L1);
    append(row, f.L2);
    append(row, f.N1);
    append(row, f.N2);
    for (int i = 3; i <= n - 2; ++i) append(row, f.w(i));
    r.rows.push_back(std::move(row));
    gram_defect = std::max(gram_defect, (metric.gram(f.ordered()) - reference).cwiseAbs().maxCoeff());
    closure = std::max(closure, f.closure_residual);
    if (c.synthesized) {
      prescribed = std::max(prescribed, (f.curvatures - c.synthesized->profile().at(t)).cwiseAbs().maxCoeff());
    }
  }
  r.summary["frame_gram_defect"] = gram_defect;
  r.summary["closure_residual"] = closure;
  if (c.synthesized) r.summary["prescribed_curvature_error"] = prescribed;

  const std::vector<double> residual_grid = uniform_grid(d, std::max<int>(201, static_cast<int>(grid.size())));
  const FrenetResidualReport res = frenet_residuals(*c.curve, residual_grid, opts);
  Json eq = Json::object();
  for (std::size_t i = 0; i < res.equations.size(); ++i) eq[res.equations[i]] = res.max_residual[i];
  r.summary["frenet_residual"] = res.overall;
  r.summary["frenet_residual_grid"] = residual_grid.size();
  r.details["frenet_residuals"] = eq;
  return r;
}

Report cmd_bertrand(const Options& o, const LoadedCurve& c) {
  if (c.curve->dimension() != 5) {
    throw HypothesisError("Bertrand pairs are defined in R^5_2; curve has dimension " +
                          std::to_string(c.curve->dimension()));
  }
  if (o.mu == 0.0 || !std::isfinite(o.mu)) throw InputError("--mu must be a nonzero finite number");
  const double tol = o.tol.value_or(kDefaultBertrandTolerance);
  Report r;
  const JetCurvePtr alpha = pseudo_arc(c.curve, r.summary);
  const std::vector<double> grid = uniform_grid(alpha->domain(), grid_count(o, c, 11));
  const BertrandCheck check = bertrand_check(*alpha, grid, tol);
  r.summary["mu"] = o.mu;
  r.summary["tolerance"] = tol;
  r.summary["max_abs_k1"] = check.max_k1;
  r.summary["max_abs_k2"] = check.max_k2;
  r.summary["verdict"] = check.is_bertrand;
  if (!check.is_bertrand) {
    r.summary["forced_alignment_defect"] = forced_mate_alignment_defect(alpha, o.mu, grid);
    r.columns = {"s", "k1", "k2"};
    for (double s : grid) {
      const CartanFrame f = cartan_frame_at(*alpha, s);
      r.rows.push_back({s, f.k(1), f.k(2)});
    }
    return r;
  }
  const BertrandMate m = bertrand_mate(alpha, o.mu, grid, tol);
  r.summary["correspondence"] = "sbar = s + " + format_number(m.report.correspondence_offset);
  r.summary["pair_verdict"] = m.report.verdict;
  r.summary["alignment_defect"] = m.report.alignment_defect;
  r.summary["W3_defect"] = m.report.W3_defect;
  r.summary["L1_defect"] = m.report.L1_defect;
  r.summary["L2_defect"] = m.report.L2_defect;
  r.summary["speed_deviation"] = m.report.speed_deviation;
  r.columns = {"s", "sbar"};
  extend(r.columns, names("mate_x", 5));
  extend(r.columns, names("Wbar3_", 5));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::vector<Json> row{grid[i], grid[i] + m.report.correspondence_offset};
    append(row, m.mate.points.col(i));
    append(row, m.mate_frames[i].w(3));
    r.rows.push_back(std::move(row));
  }
  return r;
}

Report cmd_sphere(const Options& o, const LoadedCurve& c) {
  const int n = c.curve->dimension();
  if (n < 6) throw HypothesisError("the pseudo-sphere test needs dimension >= 6, got " + std::to_string(n));
  const double tol = o.tol.value_or(1e-5);
  Report r;
  const JetCurvePtr alpha = pseudo_arc(c.curve, r.summary);
  const std::vector<double> grid = uniform_grid(alpha->domain(), grid_count(o, c, 11));
  const SphereReport s = pseudo_spherical_test(*alpha, grid, tol);
  r.summary["tolerance"] = tol;
  r.summary["is_spherical"] = s.is_spherical;
  r.summary["last_coefficient_nonzero"] = s.last_coefficient_nonzero;
  r.summary["radius_squared"] = s.mean_radius_squared;
  r.summary["radius"] = std::sqrt(s.mean_radius_squared);
  r.summary["radius_spread"] = s.radius_spread;
  r.summary["centre_spread"] = s.centre_spread;
  r.summary["sphere_residual"] = s.sphere_residual;
  r.summary["centre"] = vec(s.mean_centre);
  r.columns = {"s"};
  extend(r.columns, names("a", n - 4));
  r.columns.push_back("radius_squared");
  extend(r.columns, names("centre_", n));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::vector<Json> row{grid[i]};
    append(row, s.a[i]);
    row.emplace_back(s.radius_squared[i]);
    append(row, s.centre[i]);
    r.rows.push_back(std::move(row));
  }
  return r;
}

std::vector<double> grid_with_node(Interval d, int count, std::optional<double> node) {
  std::vector<double> g = uniform_grid(d, count);
  if (!node) return g;
  if (!d.contains(*node)) throw InputError("--t0 lies outside the curve domain");
  const double slack = 1e-12 * std::max(1.0, std::abs(*node));
  if (std::none_of(g.begin(), g.end(), [&](double t) { return std::abs(t - *node) <= slack; })) {
    g.push_back(*node);
    std::sort(g.begin(), g.end());
  }
  return g;
}

Report cmd_evolute(const Options& o, const LoadedCurve& c) {
  if (c.curve->dimension() != 6) {
    throw HypothesisError("the evolute is defined in R^6_2; curve has dimension " + std::to_string(c.curve->dimension()));
  }
  Report r;
  const JetCurvePtr alpha = pseudo_arc(c.curve, r.summary);
  const Interval d = alpha->domain();
  const int count = grid_count(o, c, 21);
  const std::vector<double> grid = grid_with_node(d, count, o.t0);
  const EvoluteReport e = evolute(alpha, grid);
  r.summary["spacelike"] = e.spacelike;
  r.summary["speed_deviation"] = e.max_deviation;
  r.summary["radius_defect"] = e.radius_defect;

  // Round trip: the involute of E from t0 with the matched arc offset is alpha.
  const double t0 = o.t0.value_or(grid[grid.size() / 2]);
  const FrameJet f0 = cartan_frame_jet(*alpha, t0);
  const Jetd rho = 1.0 / f0.curvature(3);
  const double offset = rho[0] * (rho.derivative(1) > 0 ? 1.0 : -1.0);
  const SampledCurve back = involute(e.curve, t0, offset);
  double distance = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    distance = std::max(distance, (back.points.col(i) - alpha->point(grid[i])).norm());
  }
  r.summary["t0"] = t0;
  r.summary["arc_offset"] = offset;
  r.summary["round_trip_distance"] = distance;

  r.columns = {"s"};
  extend(r.columns, names("E_", 6));
  r.columns.insert(r.columns.end(), {"E_speed_squared", "expected", "k3"});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::vector<Json> row{grid[i]};
    append(row, e.curve.points.col(i));
    row.insert(row.end(), {e.speed_squared[i], e.expected[i], e.k3[i]});
    r.rows.push_back(std::move(row));
  }
  return r;
}

Report cmd_involute(const Options& o, const LoadedCurve& c) {
  const int n = c.curve->dimension();
  const Interval d = c.curve->domain();
  const double t0 = o.t0.value_or(d.lo);
  const double offset = o.offset.value_or(0.0);
  const std::vector<double> grid = grid_with_node(d, grid_count(o, c, 21), t0);
  const SampledCurve samples = sample(*c.curve, grid, 2);
  const SampledCurve inv = involute(samples, t0, offset);
  const std::vector<double> arc = arc_length_table(samples, t0);

  Report r;
  r.summary["t0"] = t0;
  r.summary["arc_offset"] = offset;
  Json check = Json::object();
  if (n == 6) {
    std::vector<double> positive;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (arc[i] + offset > 0) positive.push_back(grid[i]);
    }
    try {
      const InvoluteFrameReport f = involute_frame_check(c.curve, t0, offset, positive, o.tol.value_or(1e-4));
      check["performed"] = true;
      check["verdict"] = f.verdict;
      check["k3_relative_error"] = f.k3_relative_error;
      check["w4_sign"] = f.w4_sign;
      check["w4_defect"] = f.w4_defect;
      check["evolute_defect"] = f.evolute_defect;
      check["null_tangent_defect"] = f.null_tangent_defect;
      check["third_derivative_defect"] = f.third_defect;
      check["min_eta_squared"] = f.min_eta_squared;
      check["span_rank"] = f.span_rank;
      check["samples"] = positive.size();
    } catch (const Error& e) {
      check["performed"] = false;
      check["category"] = to_string(e.category());
      check["reason"] = e.what();
    }
  } else {
    check["performed"] = false;
    check["reason"] = "the converse construction is defined in R^6_2";
  }
  r.summary["frame_check"] = check;
  r.columns = {"t", "arc_length"};
  extend(r.columns, names("I_", n));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::vector<Json> row{grid[i], arc[i] + offset};
    append(row, inv.points.col(i));
    r.rows.push_back(std::move(row));
  }
  return r;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cartan frames, curvatures and constructions for null curves in R^n_2"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub, bool grid, bool tol) {
    sub->add_option("input", o.input, "input JSON file")->required();
    if (grid) sub->add_option("--grid", o.grid, "number of samples (default depends on the command)");
    if (tol) sub->add_option("--tol", o.tol, "tolerance (default depends on the command)");
    sub->add_option("--format", o.format, "report format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    sub->add_option("--output", o.output, "write the report here instead of standard output");
  };
  auto classify_cmd = app.add_subcommand("classify", "nullity and index sequences (default 17 Chebyshev points, tol 1e-9)");
  add_common(classify_cmd, true, true);
  auto frame_cmd = app.add_subcommand("frame", "Cartan frame samples and Frenet residuals (default 11 samples)");
  add_common(frame_cmd, true, true);
  auto bertrand_cmd = app.add_subcommand("bertrand", "Bertrand check and mate in R^5_2 (default 11 samples, tol 1e-9)");
  add_common(bertrand_cmd, true, true);
  bertrand_cmd->add_option("--mu", o.mu, "mate offset along W3")->capture_default_str();
  auto sphere_cmd = app.add_subcommand("sphere", "pseudo-sphere test (default 11 samples, tol 1e-5)");
  add_common(sphere_cmd, true, true);
  auto evolute_cmd = app.add_subcommand("evolute", "evolute in R^6_2 and involute round trip (default 21 samples)");
  add_common(evolute_cmd, true, false);
  evolute_cmd->add_option("--t0", o.t0, "round-trip base point (default: middle sample)");
  auto involute_cmd = app.add_subcommand("involute", "involute of a spacelike curve (default 21 samples, tol 1e-4)");
  add_common(involute_cmd, true, true);
  involute_cmd->add_option("--t0", o.t0, "base point of the arc length (default: domain start)");
  involute_cmd->add_option("--offset", o.offset, "arc length assigned to t0 (default 0)");
  auto synth_cmd = app.add_subcommand("synthesize", "integrate the frame equations for a curvature profile");
  add_common(synth_cmd, false, false);
  synth_cmd->add_option("--step", o.step, "RK4 step")->capture_default_str();

  auto fail = [&](ErrorCategory category, const std::string& message) {
    Json e;
    e["error"] = to_string(category);
    e["message"] = message;
    err << dump_json(e, -1);
    return exit_code(category);
  };

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    return fail(ErrorCategory::input, e.what());
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    const std::string bytes = read_file(o.input);
    const Json input = parse_json(bytes);

    Json head;
    head["command"] = name;
    std::string echo;
    for (std::size_t i = 1; i < args.size(); ++i) echo += (i > 1 ? " " : "") + args[i];
    head["arguments"] = echo;
    head["input_digest"] = "sha256:" + sha256_hex(bytes);

    Report r;
    Json synthesized;
    if (name == "synthesize") {
      const ProfileFile p = profile_from_json(input);
      SynthesisOptions so;
      so.step = o.step;
      so.initial_state = p.initial_state;
      const SynthesizedCurve curve = synthesize(p.profile, p.interval, so);
      synthesized = synthesis_to_json(p, curve);
      r.summary["step"] = curve.step();
      r.summary["max_defect"] = curve.max_defect();
      r.summary["samples"] = curve.grid().size();
      const int n = p.profile.dimension;
      r.columns = {"s"};
      extend(r.columns, names("x", n));
      extend(r.columns, names("k", n - 3));
      for (std::size_t i = 0; i < curve.grid().size(); ++i) {
        std::vector<Json> row{curve.grid()[i]};
        append(row, curve.states()[i].col(0));
        append(row, p.profile.at(curve.grid()[i]));
        r.rows.push_back(std::move(row));
      }
    } else {
      const LoadedCurve c = load_curve(input);
      if (name == "classify") r = cmd_classify(o, c);
      else if (name == "frame") r = cmd_frame(o, c);
      else if (name == "bertrand") r = cmd_bertrand(o, c);
      else if (name == "sphere") r = cmd_sphere(o, c);
      else if (name == "evolute") r = cmd_evolute(o, c);
      else r = cmd_involute(o, c);
    }

    Json summary = head;
    for (auto it = r.summary.begin(); it != r.summary.end(); ++it) summary[it.key()] = it.value();
    std::string content;
    if (o.format == "csv") {
      content = render_csv(summary, r.columns, r.rows);
    } else {
      Json doc = summary;
      for (auto it = r.details.begin(); it != r.details.end(); ++it) doc[it.key()] = it.value();
      if (name == "synthesize") {
        for (auto it = synthesized.begin(); it != synthesized.end(); ++it) doc[it.key()] = it.value();
      } else {
        Json rows = Json::array();
        for (const auto& row : r.rows) rows.push_back(Json(row));
        doc["columns"] = r.columns;
        doc["rows"] = rows;
      }
      content = dump_json(doc);
    }
    if (o.output) write_atomically(*o.output, content);
    else out << content;
    return kOk;
  } catch (const Error& e) {
    return fail(e.category(), e.what());
  } catch (const std::exception& e) {
    return fail(ErrorCategory::numerical, e.what());
  }
}

}  // namespace nullframe::cli
