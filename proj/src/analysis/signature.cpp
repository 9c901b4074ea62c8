#include <cmath>

#include "curvcheck/analysis.hpp"

namespace curvcheck {

std::string_view name_of(SignatureClass c) {
  switch (c) {
    case SignatureClass::time_coordinate_ok: return "time_coordinate_ok";
    case SignatureClass::degenerate: return "degenerate";
    case SignatureClass::other: return "other";
  }
  return "?";
}

SignatureReport signature_at(const MetricSpec& spec, const Point& p) {
  SignatureReport rep{p, {}, SignatureClass::degenerate};
  rep.minors.fill(std::numeric_limits<double>::quiet_NaN());
  Matrix4<double> g;
  try {
    g = spec.values(p);
  } catch (const EvalError&) {
    return rep;
  }
  rep.minors[0] = g(0, 0);
  rep.minors[1] = g.topLeftCorner<2, 2>().determinant();
  rep.minors[2] = g.topLeftCorner<3, 3>().determinant();
  rep.minors[3] = det4(g);

  constexpr double kExpected[4] = {1, -1, 1, -1};
  bool matches = true;
  for (int k = 0; k < 4; ++k) {
    const double m = rep.minors[k];
    if (!std::isfinite(m) || std::abs(m) < 1e-300) return rep;
    matches = matches && m * kExpected[k] > 0;
  }
  rep.classification = matches ? SignatureClass::time_coordinate_ok : SignatureClass::other;
  return rep;
}

}  // namespace curvcheck
