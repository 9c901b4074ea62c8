#include <cmath>

#include "curvcheck/analysis.hpp"

namespace curvcheck {

double SliceMetric::coefficient(int i, int j, const Bindings& at) const {
  return evaluate(g[i][j], at);
}

SliceMetric slice_metric(const MetricSpec& spec, double t0) {
  const auto& coords = spec.coordinates();
  const auto& dom = spec.domain();
  if (!dom.intervals[0].contains(t0))
    throw std::domain_error(coords[0] + "=" + std::to_string(t0) + " is outside the domain");

  // Guards that depend on time alone decide whether the whole slice is excluded.
  Bindings at = spec.parameters();
  at[coords[0]] = t0;
  for (const Expr& guard : dom.guards) {
    bool time_only = true;
    for (int i = 1; i < 4; ++i) time_only = time_only && !depends_on(guard, coords[i]);
    if (!time_only) continue;
    double value = 0.0;
    try {
      value = evaluate(guard, at);
    } catch (const EvalError&) {
    }
    if (value == 0.0)
      throw std::domain_error("slice " + coords[0] + "=" + std::to_string(t0) +
                              " lies on the excluded locus " + to_string(guard) + " = 0");
  }

  SliceMetric s{t0, {}, {coords[1], coords[2]}};
  const Expr time_value(t0);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      s.g[i][j] = simplify(substitute(spec(i + 1, j + 1), coords[0], time_value));
  return s;
}

}  // namespace curvcheck
