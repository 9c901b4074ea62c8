#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "curvcheck/expr.hpp"

namespace curvcheck {

template <typename Scalar>
using Matrix4 = Eigen::Matrix<Scalar, 4, 4>;
template <typename Scalar>
using Vector4 = Eigen::Matrix<Scalar, 4, 1>;

using Point = Vector4<double>;

/// Dense array over Rank indices, each running 0..3. Row-major.
template <typename Scalar, std::size_t Rank>
class IndexArray {
 public:
  static constexpr std::size_t kSize = std::size_t{1} << (2 * Rank);

  IndexArray() { data_.fill(Scalar(0)); }

  template <typename... I>
  Scalar& operator()(I... idx) {
    static_assert(sizeof...(I) == Rank);
    return data_[offset(idx...)];
  }
  template <typename... I>
  const Scalar& operator()(I... idx) const {
    static_assert(sizeof...(I) == Rank);
    return data_[offset(idx...)];
  }

  Scalar max_abs() const {
    Scalar m(0);
    for (const Scalar& v : data_) m = std::max(m, Scalar(std::abs(v)));
    return m;
  }

  const std::array<Scalar, kSize>& data() const { return data_; }
  std::array<Scalar, kSize>& data() { return data_; }

 private:
  template <typename... I>
  static std::size_t offset(I... idx) {
    std::size_t o = 0;
    ((o = o * 4 + static_cast<std::size_t>(idx)), ...);
    return o;
  }
  std::array<Scalar, kSize> data_;
};

/// Gamma(l, m, n) = Gamma^l_{mn}.
template <typename Scalar>
using Christoffel = IndexArray<Scalar, 3>;
/// R(a, b, c, d) = R_{abcd}, all indices lowered.
template <typename Scalar>
using Riemann = IndexArray<Scalar, 4>;

class DegenerateMetricError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Metric specification

struct Interval {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  bool contains(double x) const { return x > lower && x < upper; }
};

/// Open coordinate intervals plus guard expressions that must not vanish.
struct RegularDomain {
  std::array<Interval, 4> intervals{};
  std::vector<Expr> guards;
};

using Coordinates = std::array<std::string, 4>;

inline Coordinates default_coordinates() { return {"t", "r", "theta", "phi"}; }

class MetricSpec {
 public:
  /// upper holds g_{mu nu} for mu <= nu in row order:
  /// 00 01 02 03 11 12 13 22 23 33.
  MetricSpec(std::string name, Coordinates coords, std::array<Expr, 10> upper,
             Bindings parameters = {}, RegularDomain domain = {});

  static int packed_index(int mu, int nu);

  const Expr& operator()(int mu, int nu) const { return entries_[packed_index(mu, nu)]; }
  const std::array<Expr, 10>& packed() const { return entries_; }
  const std::string& name() const { return name_; }
  const Coordinates& coordinates() const { return coords_; }
  const Bindings& parameters() const { return parameters_; }
  const RegularDomain& domain() const { return domain_; }

  /// Interval membership and non-vanishing guards.
  bool is_regular(const Point& p) const;
  /// First-order estimate |guard| / |grad guard| of the coordinate distance to
  /// the nearest excluded locus, optionally including interval ends; +inf
  /// when there are none.
  double guard_distance(const Point& p, bool include_intervals = true) const;

  Matrix4<double> values(const Point& p) const;
  Bindings bindings_at(const Point& p) const;

 private:
  std::string name_;
  Coordinates coords_;
  std::array<Expr, 10> entries_;
  Bindings parameters_;
  RegularDomain domain_;
  std::vector<std::array<Expr, 4>> guard_gradients_;
};

// ---------------------------------------------------------------------------
// Derivatives

template <typename Scalar>
struct MetricJet {
  Vector4<Scalar> point;
  Matrix4<Scalar> g;
  /// d1[l] = d_l g
  std::array<Matrix4<Scalar>, 4> d1;
  /// d2[k][l] = d_k d_l g
  std::array<std::array<Matrix4<Scalar>, 4>, 4> d2;
  /// d3[j][k][l] = d_j d_k d_l g; zero unless the jet was built at order 3.
  std::array<std::array<std::array<Matrix4<Scalar>, 4>, 4>, 4> d3;
  int order = 2;
};

/// A metric with its symbolic partial derivatives materialized once.
class DerivedMetric {
 public:
  explicit DerivedMetric(MetricSpec spec, int max_order = 2);

  const MetricSpec& spec() const { return spec_; }
  int max_order() const { return max_order_; }

  /// d_l g_{mu nu}
  const Expr& first(int l, int mu, int nu) const;
  /// d_k d_l g_{mu nu}
  const Expr& second(int k, int l, int mu, int nu) const;
  /// d_j d_k d_l g_{mu nu}; requires max_order >= 3.
  const Expr& third(int j, int k, int l, int mu, int nu) const;

  template <typename Scalar>
  MetricJet<Scalar> jet(const Vector4<Scalar>& p, int order = 2) const;

 private:
  MetricSpec spec_;
  int max_order_;
  std::vector<Expr> first_;   // [l][packed]
  std::vector<Expr> second_;  // [pair(k,l)][packed]
  std::vector<Expr> third_;   // [triple(j,k,l)][packed]
  Program low_order_;
  std::optional<Program> third_order_;
};

DerivedMetric derive(MetricSpec spec, int max_order = 2);

// ---------------------------------------------------------------------------
// Pointwise curvature

/// Riemann sign convention. riemann_sign multiplies the standard
/// R^r_{smn} = d_m Gamma^r_{ns} - d_n Gamma^r_{ms} + Gamma Gamma - Gamma Gamma.
/// printed_ricci_sign relates engine Ricci (R^l_{m l n}) to the reference
/// formulas it is compared against; it never alters engine output.
struct Convention {
  int riemann_sign = 1;
  int printed_ricci_sign = 1;
};

template <typename Scalar>
struct CurvatureBundle {
  Vector4<Scalar> point;
  Matrix4<Scalar> g;
  Matrix4<Scalar> g_inv;
  Scalar det;
  Christoffel<Scalar> gamma;
  Riemann<Scalar> riemann_low;
  Matrix4<Scalar> ricci;
  Scalar scalar;
  Matrix4<Scalar> einstein;
  Scalar kretschmann;
  int riemann_sign;
};

template <typename Scalar>
Scalar det4(const Matrix4<Scalar>& m);

/// Adjugate over determinant. Throws DegenerateMetricError when |det| < 1e-300.
template <typename Scalar>
Matrix4<Scalar> invert4(const Matrix4<Scalar>& m);

template <typename Scalar>
Christoffel<Scalar> christoffel(const MetricJet<Scalar>& jet, const Matrix4<Scalar>& g_inv);

/// Lowered Riemann from a jet of order >= 2.
template <typename Scalar>
Riemann<Scalar> riemann(const MetricJet<Scalar>& jet, const Christoffel<Scalar>& gamma,
                        int riemann_sign = 1);

template <typename Scalar>
Scalar kretschmann(const Riemann<Scalar>& riemann_low, const Matrix4<Scalar>& g_inv);

template <typename Scalar>
CurvatureBundle<Scalar> curvature(const DerivedMetric& d, const Vector4<Scalar>& p,
                                  Convention convention = {});

// Convenience point-wise accessors over a DerivedMetric.
Christoffel<double> christoffel(const DerivedMetric& d, const Point& p);
Riemann<double> riemann(const DerivedMetric& d, const Point& p, Convention convention = {});
Matrix4<double> ricci(const DerivedMetric& d, const Point& p);
double scalar_curvature(const DerivedMetric& d, const Point& p);
Matrix4<double> einstein(const DerivedMetric& d, const Point& p);
double kretschmann(const DerivedMetric& d, const Point& p);
/// Determinant of the metric values; defined at degenerate points too.
double det_metric(const DerivedMetric& d, const Point& p);

/// Canonical representative of a Riemann component under the pair
/// antisymmetries and pair exchange: a<b, c<d, (a,b) <= (c,d) lexicographically.
/// sign is 0 when the component vanishes identically (a==b or c==d).
struct CanonicalComponent {
  std::array<int, 4> index;
  int sign;
};
CanonicalComponent canonicalize(int a, int b, int c, int d);
/// The 21 canonical index quadruples.
std::vector<std::array<int, 4>> canonical_components();

template <typename Scalar>
Scalar component(const Riemann<Scalar>& r, int a, int b, int c, int d) {
  const auto cc = canonicalize(a, b, c, d);
  if (cc.sign == 0) return Scalar(0);
  return Scalar(cc.sign) * r(cc.index[0], cc.index[1], cc.index[2], cc.index[3]);
}

struct RiemannSymmetryResiduals {
  double first_pair;    // R_abcd + R_bacd
  double second_pair;   // R_abcd + R_abdc
  double pair_exchange; // R_abcd - R_cdab
  double bianchi;       // R_abcd + R_acdb + R_adbc
  double scale;         // max |R_abcd|
  double worst() const {
    return std::max(std::max(first_pair, second_pair), std::max(pair_exchange, bianchi));
  }
};

template <typename Scalar>
RiemannSymmetryResiduals symmetry_residuals(const Riemann<Scalar>& r);

/// max |R_mn| / (1 + sqrt|K|): Ricci size against the local curvature scale.
template <typename Scalar>
Scalar zero_scaled_ricci_norm(const CurvatureBundle<Scalar>& b) {
  using std::abs;
  using std::sqrt;
  return b.ricci.cwiseAbs().maxCoeff() / (Scalar(1) + sqrt(abs(b.kretschmann)));
}

struct BianchiResidual {
  Vector4<double> divergence;  // nabla_m G^m_n
  double scale;                // size of the terms that cancel
  double relative() const { return divergence.cwiseAbs().maxCoeff() / scale; }
};

/// Contracted Bianchi identity from third metric derivatives. Needs a
/// DerivedMetric of order 3.
BianchiResidual contracted_bianchi(const DerivedMetric& d, const Point& p);

}  // namespace curvcheck
