#include <cmath>
#include <optional>

#include "curvcheck/analysis.hpp"

namespace curvcheck {

std::string_view name_of(Branch b) { return b == Branch::plus ? "plus" : "minus"; }

std::string_view name_of(Termination t) {
  switch (t) {
    case Termination::reached_end: return "reached_end";
    case Termination::near_degeneracy: return "near_degeneracy";
    case Termination::left_domain: return "left_domain";
    case Termination::step_underflow: return "step_underflow";
  }
  return "?";
}

namespace {

NullSlopes slopes_from(double g00, double g01, double g11) {
  if (!std::isfinite(g00) || !std::isfinite(g01) || !std::isfinite(g11))
    throw NullSlopeError(NullSlopeError::Kind::undefined_metric, "metric entries are not finite");
  if (g00 == 0.0)
    throw NullSlopeError(NullSlopeError::Kind::degenerate_quadratic, "g00 vanishes");
  const double disc = g01 * g01 - g00 * g11;
  if (disc < 0.0)
    throw NullSlopeError(NullSlopeError::Kind::complex_roots,
                         "no real null directions (discriminant " + std::to_string(disc) + ")");
  const double root = std::sqrt(disc);
  return {(-g01 + root) / g00, (-g01 - root) / g00};
}

// A guard that changes sign between two points vanishes somewhere on the
// segment even if neither end is near it.
bool crosses_guard(const MetricSpec& spec, const Point& a, const Point& b) {
  const Bindings at_a = spec.bindings_at(a);
  const Bindings at_b = spec.bindings_at(b);
  for (const Expr& guard : spec.domain().guards) {
    try {
      if (std::signbit(evaluate(guard, at_a)) != std::signbit(evaluate(guard, at_b))) return true;
    } catch (const EvalError&) {
      return true;
    }
  }
  return false;
}

std::string describe(const Point& p) {
  return "(t=" + std::to_string(p[0]) + ", r=" + std::to_string(p[1]) + ")";
}

// g00, g01, g11 compiled once per curve.
class SlopeField {
 public:
  explicit SlopeField(const MetricSpec& spec)
      : program_(std::array<Expr, 3>{spec(0, 0), spec(0, 1), spec(1, 1)},
                 {spec.coordinates().begin(), spec.coordinates().end()}, spec.parameters()) {}

  double operator()(Branch b, double t, double r, double theta, double phi) const {
    const std::array<double, 4> in{t, r, theta, phi};
    std::array<double, 3> g{};
    try {
      program_.evaluate<double>(in, g);
    } catch (const EvalError& e) {
      throw NullSlopeError(NullSlopeError::Kind::undefined_metric, e.what());
    }
    return slopes_from(g[0], g[1], g[2])[b];
  }

 private:
  Program program_;
};

}  // namespace

NullSlopes null_slopes(const MetricSpec& spec, const Point& p) {
  Matrix4<double> g;
  try {
    g = spec.values(p);
  } catch (const EvalError& e) {
    throw NullSlopeError(NullSlopeError::Kind::undefined_metric,
                         "metric undefined at " + describe(p) + ": " + e.what());
  }
  return slopes_from(g(0, 0), g(0, 1), g(1, 1));
}

double null_residual(const MetricSpec& spec, const Point& p, double s) {
  const Matrix4<double> g = spec.values(p);
  const double terms[3] = {g(0, 0) * s * s, 2.0 * g(0, 1) * s, g(1, 1)};
  const double mag = std::abs(terms[0]) + std::abs(terms[1]) + std::abs(terms[2]);
  const double sum = terms[0] + terms[1] + terms[2];
  return mag > 0.0 ? std::abs(sum) / mag : std::abs(sum);
}

NullCurve integrate_null_curve(const MetricSpec& spec, const Point& start, Branch branch,
                               double r_end, double step, NullCurveOptions opt) {
  if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
  if (!(r_end > 0.0)) throw std::invalid_argument("r_end must be positive");
  if (!spec.is_regular(start) || spec.guard_distance(start, false) < opt.guard_band)
    throw std::domain_error("start " + describe(start) + " is outside the regular domain");

  const SlopeField field(spec);
  const double theta = start[2];
  const double phi = start[3];
  auto slope = [&](double t, double r) { return field(branch, t, r, theta, phi); };
  auto sample = [&](double t, double r) {
    const Point p(t, r, theta, phi);
    return NullSample{r, t, null_residual(spec, p, null_slopes(spec, p)[branch])};
  };

  NullCurve curve{branch, {}, step, Termination::reached_end, ""};
  double t = start[0];
  double r = start[1];
  curve.samples.push_back(sample(t, r));

  const double dir = r_end >= r ? 1.0 : -1.0;
  const double target = dir > 0 ? r_end : std::max(r_end, opt.r_min);
  const bool clipped = dir < 0 && r_end < opt.r_min;

  while (dir * (target - r) > 0.0) {
    double h = std::min(step, std::abs(target - r));
    std::optional<Termination> failure;
    std::string why;
    bool accepted = false;
    for (int halvings = 0; halvings <= opt.max_halvings; ++halvings, h *= 0.5) {
      try {
        const double hs = dir * h;
        const double k1 = slope(t, r);
        const double k2 = slope(t + 0.5 * hs * k1, r + 0.5 * hs);
        const double k3 = slope(t + 0.5 * hs * k2, r + 0.5 * hs);
        const double k4 = slope(t + hs * k3, r + hs);
        const double t_next = t + hs * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
        const double r_next = std::abs(target - (r + hs)) < 1e-14 * target ? target : r + hs;
        const Point next(t_next, r_next, theta, phi);
        if (!spec.is_regular(next) || spec.guard_distance(next, false) < opt.guard_band ||
            crosses_guard(spec, Point(t, r, theta, phi), next)) {
          failure = Termination::near_degeneracy;
          why = "guard band reached near " + describe(next);
          continue;
        }
        t = t_next;
        r = r_next;
        accepted = true;
        break;
      } catch (const NullSlopeError& e) {
        failure = Termination::near_degeneracy;
        why = e.what();
      }
    }
    if (!accepted) {
      curve.termination = failure.value_or(Termination::step_underflow);
      curve.reason = why;
      return curve;
    }
    curve.samples.push_back(sample(t, r));
    // Creeping along a boundary in vanishing steps.
    if (failure && h < 1e-6 * step) {
      curve.termination = *failure;
      curve.reason = why;
      return curve;
    }
  }
  if (clipped) {
    curve.termination = Termination::left_domain;
    curve.reason = "r reached the lower cutoff " + std::to_string(opt.r_min);
  }
  return curve;
}

}  // namespace curvcheck
