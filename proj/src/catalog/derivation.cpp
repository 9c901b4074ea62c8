#include <cmath>
#include <map>

#include "curvcheck/catalog.hpp"

namespace curvcheck {

using namespace symbolic;

std::string_view name_of(Stage stage) {
  switch (stage) {
    case Stage::raw: return "raw";
    case Stage::linear_v: return "linear_v";
    case Stage::power_a: return "power_a";
    case Stage::normalized_b: return "normalized_b";
  }
  return "?";
}

namespace {

const Expr r = sym("r");

using Formulas = std::map<std::pair<int, int>, Expr>;

Expr d_r(const Expr& e) { return diff(e, "r"); }
Expr d_t(const Expr& e) { return diff(e, "t"); }

// f recovered from a = f r^{-1/4}.
Expr f_of(const AnsatzFunctions& fns) { return fns.a * pow(r, 0.25); }
// c recovered from v = c r.
Expr c_of(const AnsatzFunctions& fns) { return fns.v / r; }

void require_zero(const Expr& residual, const Expr& magnitude, const Point& p, Stage stage,
                  const char* what) {
  for (double scale : {0.7, 1.0, 1.3}) {
    Bindings b{{"t", p[0]}, {"r", p[1] * scale}, {"theta", p[2]}, {"phi", p[3]}};
    const double res = evaluate(residual, b);
    const double mag = evaluate(magnitude, b);
    if (std::abs(res) > 1e-9 * (1.0 + std::abs(mag)))
      throw StagePreconditionError("stage " + std::string(name_of(stage)) + " requires " + what +
                                   "; residual " + std::to_string(res) + " at r=" +
                                   std::to_string(p[1] * scale));
  }
}

void check_preconditions(const AnsatzFunctions& fns, Stage stage, const Point& p) {
  if (stage >= Stage::linear_v)
    require_zero(fns.v - r * d_r(fns.v), fns.v, p, stage, "v = c(t) r");
  if (stage >= Stage::power_a)
    require_zero(r * d_r(fns.a) + 0.25 * fns.a, fns.a, p, stage, "a = f(t) r^(-1/4)");
  if (stage >= Stage::normalized_b) {
    const Expr f4 = pow(f_of(fns), 4);
    require_zero(fns.b * f4 - 1.0, fns.b * f4, p, stage, "b = 1/f^4");
  }
}

Formulas printed_formulas(const AnsatzFunctions& fns, Stage stage) {
  const Expr& u = fns.u;
  const Expr& v = fns.v;
  const Expr& a = fns.a;
  const Expr& b = fns.b;
  Formulas out;
  for (auto mn : {std::pair{0, 2}, {1, 2}, {1, 3}, {2, 3}, {3, 3}}) out[mn] = 0.0;
  out[{0, 3}] = -(d_r(d_r(v)) / (2.0 * pow(a, 2) * pow(b, 2)));
  if (stage >= Stage::linear_v) {
    const Expr ar = d_r(a);
    const Expr arr = d_r(ar);
    out[{1, 1}] = -((pow(a, 2) + 2.0 * r * a * ar - 2.0 * pow(r, 2) * a * arr +
                     2.0 * pow(r, 2) * pow(ar, 2)) /
                    (2.0 * pow(r, 2) * pow(a, 2)));
    out[{2, 2}] = (a * ar + r * a * arr - r * pow(ar, 2)) / (r * pow(a, 2) * pow(b, 2));
  }
  if (stage >= Stage::power_a) {
    const Expr f = f_of(fns);
    out[{0, 1}] = -((4.0 * b * d_t(f) + f * d_t(b)) / (r * f * b));
  }
  if (stage >= Stage::normalized_b) {
    const Expr f = f_of(fns);
    const Expr c = c_of(fns);
    const Expr ft = d_t(f);
    const Expr ur = d_r(u);
    const Expr f8c = pow(f, 8) * c;
    const Expr A = pow(r, 1.5) * f8c * pow(u, 2) - 2.0 * pow(r, 2.5) * f8c * u * ur +
                   2.0 * pow(r, 3.5) * f8c * pow(ur, 2) + 2.0 * pow(r, 3.5) * f8c * u * d_r(ur) +
                   4.0 * pow(r, 3) * f * d_t(ft) * c - 4.0 * pow(r, 3) * f * ft * d_t(c) -
                   24.0 * pow(r, 3) * pow(ft, 2) * c;
    out[{0, 0}] = -(A / (2.0 * pow(r, 3) * c * pow(f, 2)));
  }
  return out;
}

}  // namespace

DerivationReport derivation_residuals(const AnsatzFunctions& fns, Stage stage, const Point& p,
                                      Convention convention) {
  check_preconditions(fns, stage, p);
  const MetricSpec spec = build_ansatz(fns);
  const DerivedMetric d(spec);
  const CurvatureBundle<double> bundle = curvature<double>(d, p, convention);
  const Bindings at = spec.bindings_at(p);

  DerivationReport report{stage, p, convention.printed_ricci_sign,
                          1.0 + std::sqrt(std::abs(bundle.kretschmann)), {}};
  const Formulas formulas = printed_formulas(fns, stage);
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = mu; nu < 4; ++nu) {
      DerivationRow row{mu, nu, bundle.ricci(mu, nu), std::nullopt};
      if (auto it = formulas.find({mu, nu}); it != formulas.end())
        row.paper = evaluate(it->second, at);
      report.rows.push_back(row);
    }
  return report;
}

Convention calibrate_convention() {
  Convention conv;
  const double t0 = 0.3;
  const double r0 = 1.7;
  const Point p(t0, r0, 1.0, 0.0);

  const DerivedMetric periodic(build_theorem2());
  const double engine = riemann(periodic, p, conv)(2, 1, 2, 1);
  const double printed = closed_form::riemann_components()[0].value(t0, r0);
  if (engine * printed < 0) conv.riemann_sign = -1;

  const Expr t = sym("t");
  const AnsatzFunctions raw{1.0 + pow(t, 2), pow(r, 2) * t, 1.0 + r, 2.0, t};
  const DerivationReport rep = derivation_residuals(raw, Stage::raw, p, conv);
  for (const DerivationRow& row : rep.rows)
    if (row.mu == 0 && row.nu == 3 && row.engine * *row.paper < 0) conv.printed_ricci_sign = -1;
  return conv;
}

}  // namespace curvcheck
