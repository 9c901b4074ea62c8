#include <algorithm>

#include "curvcheck/tensor.hpp"

namespace curvcheck {

namespace {

// Unordered index pairs k <= l and triples j <= k <= l, in lexicographic order.
int pair_index(int k, int l) {
  if (k > l) std::swap(k, l);
  static constexpr int kIndex[4][4] = {{0, 1, 2, 3}, {1, 4, 5, 6}, {2, 5, 7, 8}, {3, 6, 8, 9}};
  return kIndex[k][l];
}

int triple_index(int j, int k, int l) {
  std::array<int, 3> s{j, k, l};
  std::sort(s.begin(), s.end());
  int idx = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = a; b < 4; ++b)
      for (int c = b; c < 4; ++c) {
        if (a == s[0] && b == s[1] && c == s[2]) return idx;
        ++idx;
      }
  return -1;
}

std::vector<std::string> coordinate_inputs(const MetricSpec& spec) {
  return {spec.coordinates().begin(), spec.coordinates().end()};
}

template <typename Scalar>
Matrix4<Scalar> unpack(std::span<const Scalar> packed) {
  Matrix4<Scalar> m;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = mu; nu < 4; ++nu) m(mu, nu) = m(nu, mu) = packed[MetricSpec::packed_index(mu, nu)];
  return m;
}

}  // namespace

DerivedMetric::DerivedMetric(MetricSpec spec, int max_order)
    : spec_(std::move(spec)),
      max_order_(std::clamp(max_order, 2, 3)),
      low_order_({}, {}) {
  const auto& coords = spec_.coordinates();
  first_.reserve(40);
  for (int l = 0; l < 4; ++l)
    for (const Expr& entry : spec_.packed()) first_.push_back(diff(entry, coords[l]));

  second_.resize(100);
  for (int k = 0; k < 4; ++k)
    for (int l = k; l < 4; ++l)
      for (int p = 0; p < 10; ++p)
        second_[pair_index(k, l) * 10 + p] = diff(first_[l * 10 + p], coords[k]);

  std::vector<Expr> outputs(spec_.packed().begin(), spec_.packed().end());
  outputs.insert(outputs.end(), first_.begin(), first_.end());
  outputs.insert(outputs.end(), second_.begin(), second_.end());
  low_order_ = Program(outputs, coordinate_inputs(spec_), spec_.parameters());

  if (max_order_ >= 3) {
    third_.resize(200);
    for (int j = 0; j < 4; ++j)
      for (int k = j; k < 4; ++k)
        for (int l = k; l < 4; ++l)
          for (int p = 0; p < 10; ++p)
            third_[triple_index(j, k, l) * 10 + p] =
                diff(second_[pair_index(k, l) * 10 + p], coords[j]);
    third_order_.emplace(third_, coordinate_inputs(spec_), spec_.parameters());
  }
}

const Expr& DerivedMetric::first(int l, int mu, int nu) const {
  return first_[l * 10 + MetricSpec::packed_index(mu, nu)];
}

const Expr& DerivedMetric::second(int k, int l, int mu, int nu) const {
  return second_[pair_index(k, l) * 10 + MetricSpec::packed_index(mu, nu)];
}

const Expr& DerivedMetric::third(int j, int k, int l, int mu, int nu) const {
  if (max_order_ < 3) throw std::logic_error("third derivatives were not materialized");
  return third_[triple_index(j, k, l) * 10 + MetricSpec::packed_index(mu, nu)];
}

template <typename Scalar>
MetricJet<Scalar> DerivedMetric::jet(const Vector4<Scalar>& p, int order) const {
  if (order > max_order_)
    throw std::logic_error("jet order " + std::to_string(order) + " exceeds derived order " +
                           std::to_string(max_order_));
  const std::array<Scalar, 4> in{p[0], p[1], p[2], p[3]};
  const std::vector<Scalar> v = low_order_.evaluate<Scalar>(in);
  const std::span<const Scalar> all(v);

  MetricJet<Scalar> jet;
  jet.point = p;
  jet.order = order;
  jet.g = unpack<Scalar>(all.subspan(0, 10));
  for (int l = 0; l < 4; ++l) jet.d1[l] = unpack<Scalar>(all.subspan(10 + l * 10, 10));
  for (int k = 0; k < 4; ++k)
    for (int l = 0; l < 4; ++l)
      jet.d2[k][l] = unpack<Scalar>(all.subspan(50 + pair_index(k, l) * 10, 10));

  for (auto& a : jet.d3)
    for (auto& b : a)
      for (auto& c : b) c.setZero();
  if (order >= 3) {
    const std::vector<Scalar> t = third_order_->evaluate<Scalar>(in);
    const std::span<const Scalar> third(t);
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
          jet.d3[j][k][l] = unpack<Scalar>(third.subspan(triple_index(j, k, l) * 10, 10));
  }
  return jet;
}

template MetricJet<double> DerivedMetric::jet(const Vector4<double>&, int) const;
template MetricJet<long double> DerivedMetric::jet(const Vector4<long double>&, int) const;

DerivedMetric derive(MetricSpec spec, int max_order) {
  return DerivedMetric(std::move(spec), max_order);
}

}  // namespace curvcheck
