#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>

#include "cli/report.hpp"
#include "curvcheck/analysis.hpp"
#include "curvcheck/catalog.hpp"
#include "curvcheck/cli.hpp"

namespace curvcheck::cli {

namespace {

// ---------------------------------------------------------------------------
// Shared options and metric resolution

struct Common {
  std::string metric = "theorem2";
  std::string out;
  bool json = false;
  std::uint64_t seed = kDefaultSeed;
  Tolerance tol;
  double zero_tol = 1e-8;
  // Catalog arguments.
  double mass = 1.0;
  std::string f = "1+sin(t)", c = "(1+sin(t))^(-4)", q = "0", H0 = "0", H1 = "0";
  std::string u = "1", v = "r", a = "1", b = "1";
};

void add_common(CLI::App* cmd, Common& o) {
  cmd->add_option("--metric", o.metric,
                  "theorem1 | theorem2 | minkowski | schwarzschild | ansatz | <file>");
  cmd->add_option("--out", o.out, "Output path");
  cmd->add_flag("--json", o.json, "Print the report as JSON");
  cmd->add_option("--seed", o.seed, "Seed for randomized samples")->capture_default_str();
  cmd->add_option("--atol", o.tol.atol, "Absolute tolerance")->capture_default_str();
  cmd->add_option("--rtol", o.tol.rtol, "Relative tolerance")->capture_default_str();
  cmd->add_option("--zero-tol", o.zero_tol, "Ricci tolerance per unit of 1+sqrt|K|")
      ->capture_default_str();
  cmd->add_option("--M", o.mass, "Schwarzschild mass")->capture_default_str();
  cmd->add_option("--f", o.f, "theorem1: f(t)")->capture_default_str();
  cmd->add_option("--c", o.c, "theorem1: c(t)")->capture_default_str();
  cmd->add_option("--q", o.q, "theorem1/ansatz: q(t)")->capture_default_str();
  cmd->add_option("--H0", o.H0, "theorem1: H0(t)")->capture_default_str();
  cmd->add_option("--H1", o.H1, "theorem1: H1(t)")->capture_default_str();
  cmd->add_option("--u", o.u, "ansatz: u(t,r)")->capture_default_str();
  cmd->add_option("--v", o.v, "ansatz: v(t,r)")->capture_default_str();
  cmd->add_option("--a", o.a, "ansatz: a(t,r)")->capture_default_str();
  cmd->add_option("--b", o.b, "ansatz: b(t)")->capture_default_str();
}

enum class Known { none, theorem2, vacuum };

struct Resolved {
  MetricSpec spec;
  Known known;
};

Resolved resolve(const std::string& name, const Common& o) {
  if (name == "theorem2") return {build_theorem2(), Known::theorem2};
  if (name == "theorem1")
    return {build_theorem1({parse(o.f), parse(o.c), parse(o.q), parse(o.H0), parse(o.H1)}),
            Known::vacuum};
  if (name == "minkowski") return {minkowski(), Known::vacuum};
  if (name == "schwarzschild") return {schwarzschild(o.mass), Known::vacuum};
  if (name == "ansatz")
    return {build_ansatz({parse(o.u), parse(o.v), parse(o.a), parse(o.b), parse(o.q)}),
            Known::none};
  if (std::filesystem::exists(name)) return {load_metric_file(name), Known::none};
  throw UsageError("unknown metric '" + name + "' (not a catalog name or readable file)");
}

std::string point_text(const Point& p) {
  return "(" + format_double(p[0]) + ", " + format_double(p[1]) + ", " + format_double(p[2]) +
         ", " + format_double(p[3]) + ")";
}

Json point_json(const Point& p) { return Json::array({p[0], p[1], p[2], p[3]}); }

Json minors_json(const SignatureReport& s) {
  Json j = Json::array();
  for (double m : s.minors) j.push_back(number(m));
  return j;
}

RunReport make_report(const std::string& command, const MetricSpec& spec, const Common& o,
                      Convention conv) {
  RunReport rep(command);
  rep.set_metric(spec);
  rep.set_convention(conv);
  rep.set_tolerance(o.tol);
  rep.set_seed(o.seed);
  return rep;
}

// Prints the report and, for commands whose --out is not a data file, writes
// the JSON form there too.
int finish(RunReport& rep, const Common& o, std::ostream& out, bool out_is_report = true) {
  const Json j = rep.to_json();
  if (o.json)
    out << j.dump(2) << "\n";
  else
    rep.write_text(out);
  if (out_is_report && !o.out.empty()) {
    std::ofstream file(o.out);
    if (!file) throw UsageError("cannot write '" + o.out + "'");
    file << j.dump(2) << "\n";
  }
  return rep.passed() ? kPass : kVerificationFailed;
}

std::string ricci_name(int mu, int nu) { return "R" + std::to_string(mu) + std::to_string(nu); }

std::string riemann_name(const std::array<int, 4>& i) {
  return "R" + std::to_string(i[0]) + std::to_string(i[1]) + std::to_string(i[2]) +
         std::to_string(i[3]);
}

// ---------------------------------------------------------------------------
// verify

struct VerifyOptions {
  std::string t = "-1.2:4.4:40";
  std::string r = "0.05:20:40log";
  double theta = 1.0;
  double phi = 0.0;
  double guard = 0.05;
  int bianchi = 5;
};

int cmd_verify(const Common& o, const VerifyOptions& v, std::ostream& out) {
  const Resolved m = resolve(o.metric, o);
  const Convention conv = calibrate_convention();
  RunReport rep = make_report("verify", m.spec, o, conv);
  const DerivedMetric d(m.spec);

  const std::vector<double> ts = parse_axis(v.t).values();
  const std::vector<double> rs = parse_axis(v.r).values();
  double worst_ricci = 0, worst_sym = 0, worst_ricci_sym = 0, worst_inverse = 0;
  Point worst_ricci_at = Point::Zero();
  int evaluated = 0, skipped = 0, failed = 0, timelike = 0;
  std::string first_failure;
  Json extremes = Json::array();

  for (std::size_t i = 0; i < ts.size(); ++i)
    for (std::size_t j = 0; j < rs.size(); ++j) {
      const Point p(ts[i], rs[j], v.theta, v.phi);
      if (!m.spec.is_regular(p) || m.spec.guard_distance(p, false) < v.guard) {
        ++skipped;
        continue;
      }
      ++evaluated;
      try {
        const CurvatureBundle<double> b = curvature<double>(d, p, conv);
        const double zr = zero_scaled_ricci_norm(b);
        if (!(zr <= worst_ricci) && std::isfinite(zr)) {
          worst_ricci = zr;
          worst_ricci_at = p;
        }
        if (!std::isfinite(zr)) throw std::runtime_error("non-finite curvature");
        const RiemannSymmetryResiduals s = symmetry_residuals(b.riemann_low);
        worst_sym = std::max(worst_sym, s.scale > 0 ? s.worst() / s.scale : s.worst());
        const double ricci_scale = std::max(b.ricci.cwiseAbs().maxCoeff(),
                                            1.0 + std::sqrt(std::abs(b.kretschmann)));
        worst_ricci_sym = std::max(
            worst_ricci_sym, (b.ricci - b.ricci.transpose()).cwiseAbs().maxCoeff() / ricci_scale);
        const Matrix4<double> mag = b.g.cwiseAbs() * b.g_inv.cwiseAbs();
        const Matrix4<double> err = (b.g * b.g_inv - Matrix4<double>::Identity()).cwiseAbs();
        worst_inverse = std::max(worst_inverse, (err.array() / mag.array().max(1e-300)).maxCoeff());
        const SignatureReport sig = signature_at(m.spec, p);
        if (sig.classification == SignatureClass::time_coordinate_ok) ++timelike;
        const bool corner = (i == 0 || i + 1 == ts.size()) && (j == 0 || j + 1 == rs.size());
        if (corner)
          extremes.push_back({{"point", point_json(p)},
                              {"det", number(b.det)},
                              {"minors", minors_json(sig)},
                              {"signature", name_of(sig.classification)}});
      } catch (const std::exception& e) {
        if (failed++ == 0) first_failure = point_text(p) + ": " + e.what();
      }
    }

  rep.add_check({"ricci_zero_scaled", worst_ricci <= o.zero_tol, worst_ricci, o.zero_tol,
                 "max |R_mn|/(1+sqrt|K|), worst at " + point_text(worst_ricci_at)});
  rep.add_check({"riemann_symmetries", worst_sym <= 1e-9, worst_sym, 1e-9, "relative to max|R_abcd|"});
  rep.add_check({"ricci_symmetry", worst_ricci_sym <= 1e-12, worst_ricci_sym, 1e-12, ""});
  rep.add_check({"inverse_identity", worst_inverse <= 1e-12, worst_inverse, 1e-12,
                 "|g g^-1 - I| per unit of |g||g^-1|"});
  rep.add_check({"evaluation", failed == 0, static_cast<double>(failed), 0.0, first_failure});

  if (v.bianchi > 0 && evaluated > 0) {
    const DerivedMetric d3(m.spec, 3);
    Rng rng(o.seed);
    double worst = 0;
    int drawn = 0;
    const Axis ta = parse_axis(v.t);
    const Axis ra = parse_axis(v.r);
    for (int attempt = 0; drawn < v.bianchi && attempt < 1000 * v.bianchi; ++attempt) {
      SamplingWindow w{std::min(ta.lower, ta.upper), std::max(ta.lower, ta.upper), v.guard,
                       std::min(ra.lower, ra.upper), std::max(ra.lower, ra.upper), v.theta,
                       v.theta};
      if (!(w.r_lower > 0)) w.r_lower = std::min(1e-3, w.r_upper);
      Point p = sample_regular_point(rng, w);
      p[2] = v.theta;
      p[3] = v.phi;
      if (!m.spec.is_regular(p) || m.spec.guard_distance(p, false) < v.guard) continue;
      worst = std::max(worst, contracted_bianchi(d3, p).relative());
      ++drawn;
    }
    rep.add_check({"contracted_bianchi", worst <= 1e-6, worst, 1e-6,
                   std::to_string(drawn) + " random points"});
  }

  rep.data()["points_evaluated"] = evaluated;
  rep.data()["points_skipped"] = skipped;
  rep.data()["time_coordinate_ok"] = timelike;
  rep.data()["grid_extremes"] = std::move(extremes);
  return finish(rep, o, out);
}

// ---------------------------------------------------------------------------
// curvature

int cmd_curvature(const Common& o, const std::string& at, std::ostream& out) {
  const Resolved m = resolve(o.metric, o);
  const Convention conv = calibrate_convention();
  RunReport rep = make_report("curvature", m.spec, o, conv);
  const Point p = parse_point(at, m.spec.coordinates());
  if (!m.spec.is_regular(p)) throw std::domain_error("point " + point_text(p) + " is not regular");
  const DerivedMetric d(m.spec);
  const CurvatureBundle<double> b = curvature<double>(d, p, conv);
  const double zero = o.zero_tol * (1.0 + std::sqrt(std::abs(b.kretschmann)));
  const double t = p[0];
  const double r = p[1];

  rep.set_columns({"quantity", "engine", "closed_form", "status"});
  Json rows = Json::array();
  auto row = [&](const std::string& name, double engine, std::optional<double> closed,
                 std::optional<bool> pass) {
    rep.add_row({name, format_double(engine), closed ? format_double(*closed) : "-",
                 pass ? (*pass ? "pass" : "FAIL") : "-"});
    rows.push_back({{"quantity", name},
                    {"engine", number(engine)},
                    {"closed_form", closed ? number(*closed) : Json(nullptr)},
                    {"status", pass ? (*pass ? "pass" : "fail") : "info"}});
    if (pass) rep.add_check({name, *pass, engine, closed, ""});
  };

  if (m.known == Known::theorem2) {
    for (const auto& c : closed_form::riemann_components()) {
      const double e = component(b.riemann_low, c.index[0], c.index[1], c.index[2], c.index[3]);
      const double x = c.value(t, r);
      row(riemann_name(c.index), e, x, o.tol.close(e, x));
    }
  } else {
    for (const auto& idx : canonical_components()) {
      const double e = b.riemann_low(idx[0], idx[1], idx[2], idx[3]);
      row(riemann_name(idx), e, std::nullopt, std::nullopt);
    }
  }
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = mu; nu < 4; ++nu) {
      const double e = b.ricci(mu, nu);
      if (m.known != Known::none)
        row(ricci_name(mu, nu), e, 0.0, std::abs(e) <= zero);
      else
        row(ricci_name(mu, nu), e, std::nullopt, std::nullopt);
    }
  row("scalar", b.scalar, std::nullopt, std::nullopt);

  std::optional<double> k_closed;
  if (m.known == Known::theorem2) k_closed = closed_form::kretschmann(t, r);
  if (o.metric == "schwarzschild") k_closed = 48.0 * o.mass * o.mass / std::pow(r, 6);
  if (o.metric == "minkowski") k_closed = 0.0;
  row("K", b.kretschmann, k_closed,
      k_closed ? std::optional<bool>(o.tol.close(b.kretschmann, *k_closed)) : std::nullopt);
  if (m.known == Known::theorem2) {
    const double x = closed_form::det(t, r);
    row("det", b.det, x, o.tol.close(b.det, x));
  } else {
    row("det", b.det, std::nullopt, std::nullopt);
  }
  rep.data()["point"] = point_json(p);
  rep.data()["rows"] = std::move(rows);
  return finish(rep, o, out);
}

// ---------------------------------------------------------------------------
// nullcurves

struct NullOptions {
  std::string t0 = "0.5";
  std::string r0 = "1";
  std::string branch = "both";
  double r_end = 50.0;
  double step = 0.01;
  double theta = 1.0;
  double phi = 0.0;
  double residual_tol = 1e-6;
};

void write_data(const Common& o, const std::string& csv, std::ostream& out, std::ostream& err,
                RunReport& rep, int& code) {
  if (o.out.empty()) {
    out << csv;
    code = finish(rep, o, err, false);
  } else {
    std::ofstream file(o.out);
    if (!file) throw UsageError("cannot write '" + o.out + "'");
    file << csv;
    code = finish(rep, o, out, false);
  }
}

int cmd_nullcurves(const Common& o, const NullOptions& n, std::ostream& out, std::ostream& err) {
  const Resolved m = resolve(o.metric, o);
  const Convention conv = calibrate_convention();
  RunReport rep = make_report("nullcurves", m.spec, o, conv);
  std::vector<Branch> branches;
  if (n.branch == "plus" || n.branch == "both") branches.push_back(Branch::plus);
  if (n.branch == "minus" || n.branch == "both") branches.push_back(Branch::minus);
  if (branches.empty()) throw UsageError("--branch must be plus, minus or both");

  std::string csv = "curve_id,branch,r,t,residual\n";
  Json curves = Json::array();
  double worst = 0;
  int id = 0;
  for (double t0 : parse_list(n.t0))
    for (double r0 : parse_list(n.r0))
      for (Branch br : branches) {
        const NullCurve c =
            integrate_null_curve(m.spec, Point(t0, r0, n.theta, n.phi), br, n.r_end, n.step);
        for (const NullSample& s : c.samples) {
          csv += std::to_string(id) + "," + std::string(name_of(br)) + "," + format_double(s.r) +
                 "," + format_double(s.t) + "," + format_double(s.residual) + "\n";
          worst = std::max(worst, s.residual);
        }
        curves.push_back({{"curve_id", id},
                          {"branch", name_of(br)},
                          {"start", {t0, r0}},
                          {"end", {c.samples.back().t, c.samples.back().r}},
                          {"samples", c.samples.size()},
                          {"termination", name_of(c.termination)},
                          {"reason", c.reason}});
        ++id;
      }
  rep.add_check({"null_residual", worst <= n.residual_tol, worst, n.residual_tol, ""});
  rep.data()["curves"] = std::move(curves);
  int code = kPass;
  write_data(o, csv, out, err, rep, code);
  return code;
}

// ---------------------------------------------------------------------------
// scan

struct ScanOptions {
  std::string t = "0:0:1";
  std::string r = "1e-4:1e-1:13log";
  double theta = 1.0;
  double phi = 0.0;
  std::optional<double> expect_slope;
  double slope_tol = 1e-3;
};

int cmd_scan(const Common& o, const ScanOptions& s, std::ostream& out, std::ostream& err) {
  const Resolved m = resolve(o.metric, o);
  const Convention conv = calibrate_convention();
  RunReport rep = make_report("scan", m.spec, o, conv);
  const DerivedMetric d(m.spec);
  const ScanResult res = scan_singularity(d, {parse_axis(s.t), parse_axis(s.r), s.theta, s.phi});

  std::string csv = "t,r,kretschmann,det,max_component\n";
  for (const ScanRow& row : res.rows)
    csv += format_double(row.point[0]) + "," + format_double(row.point[1]) + "," +
           format_double(row.kretschmann) + "," + format_double(row.det) + "," +
           format_double(row.max_metric_component) + "\n";

  Json fits = Json::array();
  for (const PowerFit& f : res.fits)
    fits.push_back({{"t", f.t}, {"slope", f.slope}, {"intercept", f.intercept}, {"points", f.points}});
  Json loci = Json::array();
  for (const Locus& l : res.loci)
    loci.push_back({{"kind", name_of(l.kind)},
                    {"axis", l.axis},
                    {"fixed", l.fixed},
                    {"approach", l.approach},
                    {"kretschmann", number(l.kretschmann)},
                    {"max_component", number(l.max_metric_component)}});
  if (s.expect_slope) {
    for (const PowerFit& f : res.fits)
      rep.add_check({"slope_t=" + format_double(f.t), std::abs(f.slope - *s.expect_slope) <= s.slope_tol,
                     f.slope, *s.expect_slope, "tolerance " + format_double(s.slope_tol)});
    if (res.fits.empty()) rep.add_check({"slope", false, NAN, *s.expect_slope, "no fit"});
  }
  int failed = 0;
  for (const ScanRow& row : res.rows) failed += row.error.empty() ? 0 : 1;
  rep.data()["rows"] = res.rows.size();
  rep.data()["failed_points"] = failed;
  rep.data()["fits"] = std::move(fits);
  rep.data()["loci"] = std::move(loci);
  int code = kPass;
  write_data(o, csv, out, err, rep, code);
  return code;
}

// ---------------------------------------------------------------------------
// slice

int cmd_slice(const Common& o, double t0, const std::string& rs, double theta, std::ostream& out) {
  const Resolved m = resolve(o.metric, o);
  const Convention conv = calibrate_convention();
  RunReport rep = make_report("slice", m.spec, o, conv);
  const SliceMetric s = slice_metric(m.spec, t0);
  rep.data()["t0"] = t0;
  rep.data()["g_rr"] = to_string(s.g[0][0]);
  rep.data()["g_rtheta"] = to_string(s.g[0][1]);
  rep.data()["g_thetatheta"] = to_string(s.g[1][1]);

  rep.set_columns({"r", "coefficient", "engine", "printed", "status"});
  Json rows = Json::array();
  for (double r : parse_list(rs)) {
    Bindings at = m.spec.parameters();
    at[s.coordinates[0]] = r;
    at[s.coordinates[1]] = theta;
    const double e[2] = {s.coefficient(0, 0, at), s.coefficient(1, 1, at)};
    std::optional<std::array<double, 2>> printed;
    if (m.known == Known::theorem2) printed = closed_form::slice(t0, r);
    for (int k = 0; k < 2; ++k) {
      const std::string name = k == 0 ? "dr^2" : "dtheta^2";
      std::optional<bool> pass;
      if (printed) pass = o.tol.close(e[k], (*printed)[k]);
      rep.add_row({format_double(r), name, format_double(e[k]),
                   printed ? format_double((*printed)[k]) : "-",
                   pass ? (*pass ? "pass" : "FAIL") : "-"});
      rows.push_back({{"r", r},
                      {"coefficient", name},
                      {"engine", number(e[k])},
                      {"printed", printed ? number((*printed)[k]) : Json(nullptr)}});
      if (pass)
        rep.add_check({name + " r=" + format_double(r), *pass, e[k], (*printed)[k],
                       *pass ? "" : "ratio " + format_double(e[k] / (*printed)[k])});
    }
  }
  rep.data()["rows"] = std::move(rows);
  return finish(rep, o, out);
}

// ---------------------------------------------------------------------------
// killing

// Splits on commas outside parentheses.
std::vector<std::string> split_top_level(const std::string& text) {
  std::vector<std::string> parts(1);
  int depth = 0;
  for (char ch : text) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == ',' && depth == 0)
      parts.emplace_back();
    else
      parts.back() += ch;
  }
  return parts;
}

int cmd_killing(const Common& o, const std::string& xi_text, const std::string& at, double tol,
                std::ostream& out) {
  const Resolved m = resolve(o.metric, o);
  const Convention conv = calibrate_convention();
  RunReport rep = make_report("killing", m.spec, o, conv);
  const auto parts = split_top_level(xi_text);
  if (parts.size() != 4) throw UsageError("--xi needs four comma-separated components");
  std::array<Expr, 4> xi;
  for (int i = 0; i < 4; ++i) xi[i] = parse(parts[i]);
  const Point p = parse_point(at, m.spec.coordinates());
  const DerivedMetric d(m.spec);
  const KillingResidual k = killing_residual(d, xi, p);

  Json matrix = Json::array();
  for (int mu = 0; mu < 4; ++mu) {
    Json rowj = Json::array();
    for (int nu = 0; nu < 4; ++nu) rowj.push_back(number(k.residual(mu, nu)));
    matrix.push_back(std::move(rowj));
  }
  rep.data()["point"] = point_json(p);
  rep.data()["xi"] = {to_string(xi[0]), to_string(xi[1]), to_string(xi[2]), to_string(xi[3])};
  rep.data()["residual"] = std::move(matrix);
  rep.data()["scale"] = k.scale;
  rep.set_columns({"K_mn", "value"});
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = mu; nu < 4; ++nu)
      rep.add_row({"K" + std::to_string(mu) + std::to_string(nu), format_double(k.residual(mu, nu))});
  rep.add_check({"killing_residual", k.max_abs() <= tol * std::max(k.scale, 1.0), k.max_abs(),
                 tol * std::max(k.scale, 1.0), "scale " + format_double(k.scale)});
  return finish(rep, o, out);
}

// ---------------------------------------------------------------------------
// catalog

int cmd_catalog(const Common& o, const std::string& name, const std::string& emit,
                std::ostream& out) {
  const Resolved m = resolve(name, o);
  const std::string text = format_metric_file(m.spec);
  if (emit.empty()) {
    out << text;
  } else {
    std::ofstream file(emit);
    if (!file) throw UsageError("cannot write '" + emit + "'");
    file << text;
    out << "wrote " << emit << " [" << hex(metric_hash(m.spec)) << "]\n";
  }
  return kPass;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"curvcheck: curvature verification for metrics given in closed form"};
  app.require_subcommand(1);

  Common common;
  VerifyOptions vo;
  CLI::App* verify = app.add_subcommand("verify", "Ricci-flatness and tensor identities on a grid");
  add_common(verify, common);
  verify->add_option("--t", vo.t, "t axis lo:hi:n[log]")->capture_default_str();
  verify->add_option("--r", vo.r, "r axis lo:hi:n[log]")->capture_default_str();
  verify->add_option("--theta", vo.theta)->capture_default_str();
  verify->add_option("--phi", vo.phi)->capture_default_str();
  verify->add_option("--guard", vo.guard, "Skip points this close to an excluded locus")
      ->capture_default_str();
  verify->add_option("--bianchi", vo.bianchi, "Random points for the contracted Bianchi check")
      ->capture_default_str();

  std::string at = "t=0,r=1";
  CLI::App* curv = app.add_subcommand("curvature", "Curvature components at one point");
  add_common(curv, common);
  curv->add_option("--at", at, "Point, e.g. t=0,r=1")->capture_default_str();

  NullOptions no;
  CLI::App* nulls = app.add_subcommand("nullcurves", "Radial null curves as CSV");
  add_common(nulls, common);
  nulls->add_option("--t0", no.t0, "Comma-separated start times")->capture_default_str();
  nulls->add_option("--r0", no.r0, "Comma-separated start radii")->capture_default_str();
  nulls->add_option("--branch", no.branch, "plus | minus | both")->capture_default_str();
  nulls->add_option("--r-end", no.r_end)->capture_default_str();
  nulls->add_option("--step", no.step)->capture_default_str();
  nulls->add_option("--theta", no.theta)->capture_default_str();
  nulls->add_option("--residual-tol", no.residual_tol)->capture_default_str();

  ScanOptions so;
  CLI::App* scan = app.add_subcommand("scan", "Kretschmann, det and metric size on a grid");
  add_common(scan, common);
  scan->add_option("--t", so.t, "t axis lo:hi:n[log]")->capture_default_str();
  scan->add_option("--r", so.r, "r axis lo:hi:n[log]")->capture_default_str();
  scan->add_option("--theta", so.theta)->capture_default_str();
  scan->add_option("--expect-slope", so.expect_slope, "Check the log K / log r slope");
  scan->add_option("--slope-tol", so.slope_tol)->capture_default_str();

  double t0 = 0.0;
  std::string slice_r = "4";
  double slice_theta = 1.0;
  CLI::App* slice = app.add_subcommand("slice", "Induced (r, theta) metric at fixed t");
  add_common(slice, common);
  slice->add_option("--t0", t0)->capture_default_str();
  slice->add_option("--r", slice_r, "Comma-separated radii")->capture_default_str();
  slice->add_option("--theta", slice_theta)->capture_default_str();

  std::string xi = "1,0,0,0";
  double killing_tol = 1e-9;
  CLI::App* killing = app.add_subcommand("killing", "Killing-equation residual of a vector field");
  add_common(killing, common);
  killing->add_option("--xi", xi, "Four contravariant components")->capture_default_str();
  killing->add_option("--at", at, "Point, e.g. t=1,r=2")->capture_default_str();
  killing->add_option("--tol", killing_tol)->capture_default_str();

  std::string cat_name = "theorem2";
  std::string emit;
  CLI::App* catalog = app.add_subcommand("catalog", "Emit a catalog metric as a metric file");
  add_common(catalog, common);
  catalog->add_option("--name", cat_name, "Catalog name")->capture_default_str();
  catalog->add_option("--emit", emit, "Write the metric file here");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kUsageError;
  }

  try {
    if (*verify) return cmd_verify(common, vo, out);
    if (*curv) return cmd_curvature(common, at, out);
    if (*nulls) return cmd_nullcurves(common, no, out, err);
    if (*scan) return cmd_scan(common, so, out, err);
    if (*slice) return cmd_slice(common, t0, slice_r, slice_theta, out);
    if (*killing) return cmd_killing(common, xi, at, killing_tol, out);
    if (*catalog) return cmd_catalog(common, cat_name, emit, out);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kUsageError;
  } catch (const MetricFileError& e) {
    err << "metric file: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "numeric error: " << e.what() << "\n";
    return kNumericError;
  }
  return kUsageError;
}

}  // namespace curvcheck::cli
