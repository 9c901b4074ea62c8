#include <cmath>

#include "curvcheck/analysis.hpp"

namespace curvcheck {

KillingResidual killing_residual(const DerivedMetric& d, const std::array<Expr, 4>& xi,
                                 const Point& p) {
  const MetricSpec& spec = d.spec();
  const MetricJet<double> jet = d.jet(p, 2);
  if (std::abs(det4(jet.g)) < 1e-300)
    throw DegenerateMetricError("metric '" + spec.name() + "' is degenerate at the point");

  const Bindings at = spec.bindings_at(p);
  Vector4<double> x;
  Matrix4<double> dx;  // dx(m, l) = d_m xi^l
  for (int l = 0; l < 4; ++l) {
    x[l] = evaluate(xi[l], at);
    for (int m = 0; m < 4; ++m) dx(m, l) = evaluate(diff(xi[l], spec.coordinates()[m]), at);
  }

  KillingResidual out{Matrix4<double>::Zero(), 0.0};
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) {
      double sum = 0.0;
      double mag = 0.0;
      for (int l = 0; l < 4; ++l) {
        const double terms[3] = {x[l] * jet.d1[l](m, n), jet.g(l, n) * dx(m, l),
                                 jet.g(m, l) * dx(n, l)};
        for (double term : terms) {
          sum += term;
          mag += std::abs(term);
        }
      }
      out.residual(m, n) = sum;
      out.scale = std::max(out.scale, mag);
    }
  return out;
}

}  // namespace curvcheck
