#include <algorithm>

#include "curvcheck/tensor.hpp"

namespace curvcheck {

MetricSpec::MetricSpec(std::string name, Coordinates coords, std::array<Expr, 10> upper,
                       Bindings parameters, RegularDomain domain)
    : name_(std::move(name)),
      coords_(std::move(coords)),
      entries_(std::move(upper)),
      parameters_(std::move(parameters)),
      domain_(std::move(domain)) {
  for (std::size_t i = 0; i < coords_.size(); ++i)
    for (std::size_t j = i + 1; j < coords_.size(); ++j)
      if (coords_[i] == coords_[j])
        throw std::invalid_argument("duplicate coordinate name '" + coords_[i] + "'");
  for (const Expr& guard : domain_.guards) {
    std::array<Expr, 4> grad;
    for (int i = 0; i < 4; ++i) grad[i] = diff(guard, coords_[i]);
    guard_gradients_.push_back(std::move(grad));
  }
}

int MetricSpec::packed_index(int mu, int nu) {
  static constexpr int kIndex[4][4] = {{0, 1, 2, 3}, {1, 4, 5, 6}, {2, 5, 7, 8}, {3, 6, 8, 9}};
  return kIndex[mu][nu];
}

Bindings MetricSpec::bindings_at(const Point& p) const {
  Bindings b = parameters_;
  for (int i = 0; i < 4; ++i) b[coords_[i]] = p[i];
  return b;
}

Matrix4<double> MetricSpec::values(const Point& p) const {
  const Bindings b = bindings_at(p);
  Matrix4<double> m;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = mu; nu < 4; ++nu) m(mu, nu) = m(nu, mu) = evaluate((*this)(mu, nu), b);
  return m;
}

bool MetricSpec::is_regular(const Point& p) const {
  for (int i = 0; i < 4; ++i)
    if (!domain_.intervals[i].contains(p[i])) return false;
  const Bindings b = bindings_at(p);
  for (const Expr& guard : domain_.guards) {
    try {
      if (evaluate(guard, b) == 0.0) return false;
    } catch (const EvalError&) {
      return false;
    }
  }
  return true;
}

double MetricSpec::guard_distance(const Point& p, bool include_intervals) const {
  double dist = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4 && include_intervals; ++i) {
    const Interval& iv = domain_.intervals[i];
    dist = std::min(dist, p[i] - iv.lower);
    dist = std::min(dist, iv.upper - p[i]);
  }
  const Bindings b = bindings_at(p);
  for (std::size_t g = 0; g < domain_.guards.size(); ++g) {
    try {
      const double value = std::abs(evaluate(domain_.guards[g], b));
      double grad2 = 0.0;
      for (const Expr& partial : guard_gradients_[g]) {
        const double d = evaluate(partial, b);
        grad2 += d * d;
      }
      if (grad2 > 0.0)
        dist = std::min(dist, value / std::sqrt(grad2));
      else if (value == 0.0)
        dist = 0.0;
    } catch (const EvalError&) {
      dist = 0.0;
    }
  }
  return std::max(dist, 0.0);
}

}  // namespace curvcheck
