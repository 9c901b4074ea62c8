#include <cmath>
#include <numbers>

#include "curvcheck/catalog.hpp"

namespace curvcheck {

using namespace symbolic;

namespace {

const Expr t = sym("t");
const Expr r = sym("r");

// 53 random mantissa bits; unlike std::uniform_real_distribution this is
// identical across standard libraries.
double uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Rounded to 6 significant digits so emitted expressions stay readable and
// round-trip exactly through text.
double tidy(double x) {
  if (x == 0.0) return 0.0;
  const double mag = std::pow(10.0, 5 - static_cast<int>(std::floor(std::log10(std::abs(x)))));
  return std::round(x * mag) / mag;
}

}  // namespace

Expr random_trig_polynomial(Rng& rng, double center, double amplitude, int degree) {
  std::vector<double> coeffs(2 * degree);
  double l1 = 0.0;
  for (double& c : coeffs) {
    c = uniform(rng, -1.0, 1.0);
    l1 += std::abs(c);
  }
  // Rounding can push the L1 norm slightly past the target; shrink a hair.
  const double norm = l1 > 0 ? 0.999 * amplitude / l1 : 0.0;
  Expr sum = tidy(center);
  for (int k = 1; k <= degree; ++k) {
    const Expr kt = static_cast<double>(k) * t;
    sum = sum + tidy(coeffs[2 * (k - 1)] * norm) * cos(kt) +
          tidy(coeffs[2 * (k - 1) + 1] * norm) * sin(kt);
  }
  return sum;
}

SolutionParams random_solution_params(Rng& rng) {
  SolutionParams p;
  p.f = random_trig_polynomial(rng, 2.0, 0.5);
  const double c_sign = uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0;
  p.c = random_trig_polynomial(rng, c_sign, 0.7);
  p.q = random_trig_polynomial(rng, uniform(rng, -1.0, 1.0), 1.0);
  p.H0 = random_trig_polynomial(rng, uniform(rng, -1.0, 1.0), 1.0);
  p.H1 = random_trig_polynomial(rng, uniform(rng, -1.0, 1.0), 1.0);
  return p;
}

SolutionParams with_zero_q(SolutionParams params) {
  params.q = 0.0;
  return params;
}

AnsatzFunctions random_ansatz(Rng& rng) {
  AnsatzFunctions fns;
  const Expr u0 = random_trig_polynomial(rng, 1.5, 0.5);
  const double u1 = tidy(uniform(rng, 0.05, 0.5));
  fns.u = u0 + u1 * r;
  const Expr v1 = random_trig_polynomial(rng, 1.0, 0.5);
  const double v2 = tidy(uniform(rng, 0.05, 0.3));
  fns.v = v1 * r + v2 * pow(r, 2) * random_trig_polynomial(rng, 1.0, 0.5);
  const Expr a0 = random_trig_polynomial(rng, 1.5, 0.5);
  fns.a = a0 * (1.0 + tidy(uniform(rng, 0.1, 0.5)) * r);
  fns.b = random_trig_polynomial(rng, 2.0, 1.0);
  fns.q = random_trig_polynomial(rng, 0.0, 1.0);
  return fns;
}

double distance_to_degeneracy(double t) {
  constexpr double kPeriod = 2.0 * std::numbers::pi;
  const double phase = std::remainder(t + std::numbers::pi / 2.0, kPeriod);
  return std::abs(phase);
}

Point sample_regular_point(Rng& rng, const SamplingWindow& w) {
  double tv = uniform(rng, w.t_lower, w.t_upper);
  for (int attempt = 0; distance_to_degeneracy(tv) < w.guard; ++attempt) {
    if (attempt == 10000) throw std::domain_error("sampling window lies inside the guard band");
    tv = uniform(rng, w.t_lower, w.t_upper);
  }
  const double rv = std::exp(uniform(rng, std::log(w.r_lower), std::log(w.r_upper)));
  const double theta = uniform(rng, w.theta_lower, w.theta_upper);
  const double phi = uniform(rng, -1.0, 1.0);
  return Point(tv, rv, theta, phi);
}

}  // namespace curvcheck
