#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "curvcheck/catalog.hpp"

namespace curvcheck {

using namespace symbolic;

namespace {

const Expr t = sym("t");
const Expr r = sym("r");

void require_no_r(const Expr& e, const char* what) {
  if (depends_on(e, "r"))
    throw std::invalid_argument(std::string(what) + " must not depend on r: " + to_string(e));
}

RegularDomain positive_r(std::vector<Expr> guards) {
  RegularDomain dom;
  dom.intervals[1].lower = 0.0;
  dom.guards = std::move(guards);
  return dom;
}

void require_nonvanishing(const Expr& e, const char* what, const TimeWindow& w) {
  const int n = std::max(w.samples, 2);
  std::vector<double> ts(n), mags(n);
  double first_sign = 0.0;
  auto at = [&](double tv) {
    try {
      return evaluate(e, Bindings{{"t", tv}});
    } catch (const EvalError& err) {
      throw std::invalid_argument(std::string(what) + " is undefined at t=" + std::to_string(tv) +
                                  ": " + err.what());
    }
  };
  for (int i = 0; i < n; ++i) {
    ts[i] = w.lower + (w.upper - w.lower) * i / (n - 1);
    const double value = at(ts[i]);
    mags[i] = std::abs(value);
    if (mags[i] < 1e-12)
      throw std::invalid_argument(std::string(what) + " vanishes at t=" + std::to_string(ts[i]));
    const double s = value > 0 ? 1.0 : -1.0;
    if (first_sign == 0.0)
      first_sign = s;
    else if (s != first_sign)
      throw std::invalid_argument(std::string(what) + " changes sign on [" +
                                  std::to_string(w.lower) + ", " + std::to_string(w.upper) + "]");
  }
  // Zeros that touch without a sign change: refine every local minimum of |e|.
  const double scale = *std::max_element(mags.begin(), mags.end());
  for (int i = 1; i + 1 < n; ++i) {
    if (!(mags[i] <= mags[i - 1] && mags[i] <= mags[i + 1])) continue;
    double lo = ts[i - 1], hi = ts[i + 1];
    for (int k = 0; k < 100 && hi - lo > 1e-15 * (1 + std::abs(lo)); ++k) {
      const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
      if (std::abs(at(m1)) < std::abs(at(m2)))
        hi = m2;
      else
        lo = m1;
    }
    const double tmin = 0.5 * (lo + hi);
    if (std::abs(at(tmin)) <= 1e-10 * scale)
      throw std::invalid_argument(std::string(what) + " vanishes near t=" + std::to_string(tmin));
  }
}

}  // namespace

MetricSpec build_ansatz(const AnsatzFunctions& fns, std::string name) {
  require_no_r(fns.b, "b");
  require_no_r(fns.q, "q");
  const Expr a2 = pow(fns.a, 2);
  std::array<Expr, 10> g{pow(fns.u, 2), fns.q, 0.0, fns.v, -(a2 * pow(fns.b, 2)), 0.0, 0.0, -a2,
                         0.0, 0.0};
  return MetricSpec(std::move(name), default_coordinates(), std::move(g), {},
                    positive_r({fns.a, fns.b, fns.v}));
}

Expr H_of(const SolutionParams& p) {
  const Expr& f = p.f;
  const Expr& c = p.c;
  const Expr ft = diff(f, "t");
  const Expr ftt = diff(ft, "t");
  const Expr ct = diff(c, "t");
  return (24.0 * c * pow(ft, 2) + 4.0 * ct * f * ft - 4.0 * c * f * ftt) / (pow(f, 8) * c);
}

MetricSpec build_theorem1(const SolutionParams& p, TimeWindow window, std::string name) {
  require_no_r(p.f, "f");
  require_no_r(p.c, "c");
  require_no_r(p.q, "q");
  require_no_r(p.H0, "H0");
  require_no_r(p.H1, "H1");
  require_nonvanishing(p.f, "f", window);
  require_nonvanishing(p.c, "c", window);

  const Expr sqrt_r = sqrt(r);
  const Expr g00 = 4.0 * H_of(p) * pow(r, 1.5) + p.H0 * r * ln(r) + p.H1 * r;
  std::array<Expr, 10> g{g00,
                         p.q,
                         0.0,
                         p.c * r,
                         -(1.0 / (pow(p.f, 6) * sqrt_r)),
                         0.0,
                         0.0,
                         -(pow(p.f, 2) / sqrt_r),
                         0.0,
                         0.0};
  return MetricSpec(std::move(name), default_coordinates(), std::move(g), {},
                    positive_r({p.f, p.c}));
}

SolutionParams theorem2_params() {
  const Expr f = 1.0 + sin(t);
  return {f, pow(f, -4), 0.0, 0.0, 0.0};
}

MetricSpec build_theorem2() {
  std::array<Expr, 10> g{parse("16*r^(3/2)*(1+sin(t)+cos(t)^2)/(1+sin(t))^8"),
                         0.0,
                         0.0,
                         parse("r/(1+sin(t))^4"),
                         parse("-1/(sqrt(r)*(1+sin(t))^6)"),
                         0.0,
                         0.0,
                         parse("-(1+sin(t))^2/sqrt(r)"),
                         0.0,
                         0.0};
  return MetricSpec("theorem2", default_coordinates(), std::move(g), {},
                    positive_r({parse("1+sin(t)")}));
}

AnsatzFunctions theorem2_ansatz() {
  const Expr s = 1.0 + sin(t);
  const Expr u = 4.0 * pow(r, 0.75) * sqrt(1.0 + sin(t) + pow(cos(t), 2)) / pow(s, 4);
  return {u, r / pow(s, 4), s * pow(r, -0.25), pow(s, -4), 0.0};
}

MetricSpec minkowski() {
  return MetricSpec("minkowski", default_coordinates(),
                    {1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, -1.0, 0.0, -1.0});
}

MetricSpec schwarzschild(double mass) {
  if (!(mass > 0.0) || !std::isfinite(mass))
    throw std::invalid_argument("schwarzschild mass must be positive, got " +
                                std::to_string(mass));
  const Expr m = sym("M");
  const Expr lapse = 1.0 - 2.0 * m / r;
  const Expr theta = sym("theta");
  std::array<Expr, 10> g{lapse,           0.0, 0.0, 0.0, -(1.0 / lapse), 0.0, 0.0,
                         -pow(r, 2), 0.0, -(pow(r, 2) * pow(sin(theta), 2))};
  RegularDomain dom;
  dom.intervals[1].lower = 2.0 * mass;
  dom.intervals[2] = {0.0, std::numbers::pi};
  return MetricSpec("schwarzschild", default_coordinates(), std::move(g), {{"M", mass}},
                    std::move(dom));
}

namespace closed_form {

namespace {
double S(double t) { return 1.0 + std::sin(t); }
double P(double t) { return 1.0 + std::sin(t) + std::cos(t) * std::cos(t); }
}  // namespace

double eta00(double t, double r) { return 16.0 * std::pow(r, 1.5) * P(t) / std::pow(S(t), 8); }

double det(double t, double r) { return -r / std::pow(S(t), 12); }

const std::array<PrintedComponent, 8>& riemann_components() {
  static const std::array<PrintedComponent, 8> kComponents{{
      {{2, 1, 2, 1}, [](double t, double r) { return S(t) * S(t) / (4.0 * std::pow(r, 2.5)); }},
      {{0, 1, 0, 1},
       [](double t, double r) {
         return (2.0 * S(t) * std::sin(t) - 2.0 * std::cos(t) * std::cos(t)) /
                (std::sqrt(r) * std::pow(S(t), 8));
       }},
      {{0, 2, 2, 1},
       [](double t, double r) { return 3.0 * S(t) * std::cos(t) / (2.0 * std::pow(r, 1.5)); }},
      {{0, 3, 0, 1},
       [](double t, double) { return 3.0 * std::cos(t) / (2.0 * std::pow(S(t), 5)); }},
      {{0, 3, 0, 3}, [](double t, double r) { return -std::sqrt(r) / (4.0 * S(t) * S(t)); }},
      {{0, 2, 3, 2}, [](double t, double r) { return std::pow(S(t), 4) / (8.0 * r); }},
      {{0, 2, 0, 2},
       [](double t, double r) {
         return (2.0 * S(t) * std::sin(t) + 10.0 * std::cos(t) * std::cos(t)) / std::sqrt(r);
       }},
      {{0, 1, 3, 1}, [](double t, double r) { return 1.0 / (8.0 * r * std::pow(S(t), 4)); }},
  }};
  return kComponents;
}

double kretschmann(double t, double r) { return 3.0 * std::pow(S(t), 12) / (4.0 * r * r * r); }

double null_slope(double t, double r) {
  return std::sqrt(S(t)) / (4.0 * r * std::sqrt(2.0 - std::sin(t)));
}

std::array<double, 2> slice(double t, double r) {
  const double pre = -1.0 / (std::sqrt(r) * S(t) * S(t));
  return {pre, pre * std::pow(S(t), 8)};
}

std::array<double, 4> minors(double t, double r) {
  return {eta00(t, r), -16.0 * r * P(t) / std::pow(S(t), 14),
          16.0 * std::sqrt(r) * P(t) / std::pow(S(t), 12), det(t, r)};
}

}  // namespace closed_form

}  // namespace curvcheck
