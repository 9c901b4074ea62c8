#include <algorithm>
#include <sstream>

#include "curvcheck/tensor.hpp"

namespace curvcheck {

template <typename Scalar>
Scalar det4(const Matrix4<Scalar>& a) {
  const Scalar s0 = a(0, 0) * a(1, 1) - a(1, 0) * a(0, 1);
  const Scalar s1 = a(0, 0) * a(1, 2) - a(1, 0) * a(0, 2);
  const Scalar s2 = a(0, 0) * a(1, 3) - a(1, 0) * a(0, 3);
  const Scalar s3 = a(0, 1) * a(1, 2) - a(1, 1) * a(0, 2);
  const Scalar s4 = a(0, 1) * a(1, 3) - a(1, 1) * a(0, 3);
  const Scalar s5 = a(0, 2) * a(1, 3) - a(1, 2) * a(0, 3);
  const Scalar c5 = a(2, 2) * a(3, 3) - a(3, 2) * a(2, 3);
  const Scalar c4 = a(2, 1) * a(3, 3) - a(3, 1) * a(2, 3);
  const Scalar c3 = a(2, 1) * a(3, 2) - a(3, 1) * a(2, 2);
  const Scalar c2 = a(2, 0) * a(3, 3) - a(3, 0) * a(2, 3);
  const Scalar c1 = a(2, 0) * a(3, 2) - a(3, 0) * a(2, 2);
  const Scalar c0 = a(2, 0) * a(3, 1) - a(3, 0) * a(2, 1);
  return s0 * c5 - s1 * c4 + s2 * c3 + s3 * c2 - s4 * c1 + s5 * c0;
}

template <typename Scalar>
Matrix4<Scalar> invert4(const Matrix4<Scalar>& a) {
  // 2x2 minors of the top two rows (s) and bottom two rows (c).
  const Scalar s0 = a(0, 0) * a(1, 1) - a(1, 0) * a(0, 1);
  const Scalar s1 = a(0, 0) * a(1, 2) - a(1, 0) * a(0, 2);
  const Scalar s2 = a(0, 0) * a(1, 3) - a(1, 0) * a(0, 3);
  const Scalar s3 = a(0, 1) * a(1, 2) - a(1, 1) * a(0, 2);
  const Scalar s4 = a(0, 1) * a(1, 3) - a(1, 1) * a(0, 3);
  const Scalar s5 = a(0, 2) * a(1, 3) - a(1, 2) * a(0, 3);
  const Scalar c5 = a(2, 2) * a(3, 3) - a(3, 2) * a(2, 3);
  const Scalar c4 = a(2, 1) * a(3, 3) - a(3, 1) * a(2, 3);
  const Scalar c3 = a(2, 1) * a(3, 2) - a(3, 1) * a(2, 2);
  const Scalar c2 = a(2, 0) * a(3, 3) - a(3, 0) * a(2, 3);
  const Scalar c1 = a(2, 0) * a(3, 2) - a(3, 0) * a(2, 2);
  const Scalar c0 = a(2, 0) * a(3, 1) - a(3, 0) * a(2, 1);
  const Scalar det = s0 * c5 - s1 * c4 + s2 * c3 + s3 * c2 - s4 * c1 + s5 * c0;
  using std::abs;
  if (!(abs(det) >= Scalar(1e-300))) throw DegenerateMetricError("singular 4x4 matrix");

  Matrix4<Scalar> adj;
  adj(0, 0) = a(1, 1) * c5 - a(1, 2) * c4 + a(1, 3) * c3;
  adj(0, 1) = -a(0, 1) * c5 + a(0, 2) * c4 - a(0, 3) * c3;
  adj(0, 2) = a(3, 1) * s5 - a(3, 2) * s4 + a(3, 3) * s3;
  adj(0, 3) = -a(2, 1) * s5 + a(2, 2) * s4 - a(2, 3) * s3;
  adj(1, 0) = -a(1, 0) * c5 + a(1, 2) * c2 - a(1, 3) * c1;
  adj(1, 1) = a(0, 0) * c5 - a(0, 2) * c2 + a(0, 3) * c1;
  adj(1, 2) = -a(3, 0) * s5 + a(3, 2) * s2 - a(3, 3) * s1;
  adj(1, 3) = a(2, 0) * s5 - a(2, 2) * s2 + a(2, 3) * s1;
  adj(2, 0) = a(1, 0) * c4 - a(1, 1) * c2 + a(1, 3) * c0;
  adj(2, 1) = -a(0, 0) * c4 + a(0, 1) * c2 - a(0, 3) * c0;
  adj(2, 2) = a(3, 0) * s4 - a(3, 1) * s2 + a(3, 3) * s0;
  adj(2, 3) = -a(2, 0) * s4 + a(2, 1) * s2 - a(2, 3) * s0;
  adj(3, 0) = -a(1, 0) * c3 + a(1, 1) * c1 - a(1, 2) * c0;
  adj(3, 1) = a(0, 0) * c3 - a(0, 1) * c1 + a(0, 2) * c0;
  adj(3, 2) = -a(3, 0) * s3 + a(3, 1) * s1 - a(3, 2) * s0;
  adj(3, 3) = a(2, 0) * s3 - a(2, 1) * s1 + a(2, 2) * s0;
  return adj / det;
}

template <typename Scalar>
Christoffel<Scalar> christoffel(const MetricJet<Scalar>& jet, const Matrix4<Scalar>& g_inv) {
  // First kind: Gamma_{k m n} = 1/2 (d_n g_km + d_m g_kn - d_k g_mn).
  Christoffel<Scalar> first;
  for (int k = 0; k < 4; ++k)
    for (int m = 0; m < 4; ++m)
      for (int n = m; n < 4; ++n)
        first(k, m, n) = first(k, n, m) =
            Scalar(0.5) * (jet.d1[n](k, m) + jet.d1[m](k, n) - jet.d1[k](m, n));
  Christoffel<Scalar> gamma;
  for (int l = 0; l < 4; ++l)
    for (int m = 0; m < 4; ++m)
      for (int n = m; n < 4; ++n) {
        Scalar s(0);
        for (int k = 0; k < 4; ++k) s += g_inv(l, k) * first(k, m, n);
        gamma(l, m, n) = gamma(l, n, m) = s;
      }
  return gamma;
}

template <typename Scalar>
Riemann<Scalar> riemann(const MetricJet<Scalar>& jet, const Christoffel<Scalar>& gamma,
                        int riemann_sign) {
  // Lowered form of R^r_{smn} = d_m Gamma^r_{ns} - d_n Gamma^r_{ms} + ...:
  // R_{asmn} = 1/2 (g_an,sm + g_sm,an - g_am,sn - g_sn,am)
  //            + Gamma_{f s m} Gamma^f_{a n} - Gamma_{f s n} Gamma^f_{a m}.
  Christoffel<Scalar> first;
  for (int f = 0; f < 4; ++f)
    for (int m = 0; m < 4; ++m)
      for (int n = 0; n < 4; ++n) {
        Scalar s(0);
        for (int e = 0; e < 4; ++e) s += jet.g(f, e) * gamma(e, m, n);
        first(f, m, n) = s;
      }
  auto d2 = [&jet](int i, int j, int k, int l) { return jet.d2[k][l](i, j); };
  const Scalar sign(riemann_sign);

  // Every component is evaluated independently so the algebraic symmetries
  // remain a genuine check on the result.
  Riemann<Scalar> r;
  for (int a = 0; a < 4; ++a)
    for (int s = 0; s < 4; ++s)
      for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n) {
          Scalar v =
              Scalar(0.5) * (d2(a, n, s, m) + d2(s, m, a, n) - d2(a, m, s, n) - d2(s, n, a, m));
          for (int f = 0; f < 4; ++f)
            v += first(f, s, m) * gamma(f, a, n) - first(f, s, n) * gamma(f, a, m);
          r(a, s, m, n) = sign * v;
        }
  return r;
}

template <typename Scalar>
Scalar kretschmann(const Riemann<Scalar>& low, const Matrix4<Scalar>& g_inv) {
  // Raise one index at a time: R^{abcd} = g^{ae} g^{bf} g^{cg} g^{dh} R_{efgh}.
  Riemann<Scalar> cur = low;
  for (int slot = 0; slot < 4; ++slot) {
    Riemann<Scalar> next;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int c = 0; c < 4; ++c)
          for (int d = 0; d < 4; ++d) {
            std::array<int, 4> idx{a, b, c, d};
            const int free = idx[slot];
            Scalar s(0);
            for (int e = 0; e < 4; ++e) {
              idx[slot] = e;
              s += g_inv(free, e) * cur(idx[0], idx[1], idx[2], idx[3]);
            }
            next(a, b, c, d) = s;
          }
    cur = next;
  }
  Scalar k(0);
  for (std::size_t i = 0; i < Riemann<Scalar>::kSize; ++i) k += cur.data()[i] * low.data()[i];
  return k;
}

template <typename Scalar>
CurvatureBundle<Scalar> curvature(const DerivedMetric& d, const Vector4<Scalar>& p,
                                  Convention convention) {
  CurvatureBundle<Scalar> b;
  const MetricJet<Scalar> jet = d.jet(p);
  b.point = p;
  b.g = jet.g;
  b.det = det4(jet.g);
  try {
    b.g_inv = invert4(jet.g);
  } catch (const DegenerateMetricError&) {
    std::ostringstream msg;
    msg << "degenerate metric '" << d.spec().name() << "' at (" << double(p[0]) << ", "
        << double(p[1]) << ", " << double(p[2]) << ", " << double(p[3]) << ")";
    throw DegenerateMetricError(msg.str());
  }
  b.riemann_sign = convention.riemann_sign;
  b.gamma = christoffel(jet, b.g_inv);
  b.riemann_low = riemann(jet, b.gamma, convention.riemann_sign);

  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) {
      Scalar s(0);
      for (int a = 0; a < 4; ++a)
        for (int c = 0; c < 4; ++c) s += b.g_inv(a, c) * b.riemann_low(a, m, c, n);
      b.ricci(m, n) = s;
    }
  b.scalar = (b.g_inv.array() * b.ricci.array()).sum();
  b.einstein = b.ricci - Scalar(0.5) * b.scalar * b.g;
  b.kretschmann = kretschmann(b.riemann_low, b.g_inv);
  return b;
}

template double det4(const Matrix4<double>&);
template long double det4(const Matrix4<long double>&);
template Matrix4<double> invert4(const Matrix4<double>&);
template Matrix4<long double> invert4(const Matrix4<long double>&);
template Christoffel<double> christoffel(const MetricJet<double>&, const Matrix4<double>&);
template Christoffel<long double> christoffel(const MetricJet<long double>&,
                                              const Matrix4<long double>&);
template Riemann<double> riemann(const MetricJet<double>&, const Christoffel<double>&, int);
template Riemann<long double> riemann(const MetricJet<long double>&,
                                      const Christoffel<long double>&, int);
template double kretschmann(const Riemann<double>&, const Matrix4<double>&);
template long double kretschmann(const Riemann<long double>&, const Matrix4<long double>&);
template CurvatureBundle<double> curvature(const DerivedMetric&, const Vector4<double>&,
                                           Convention);
template CurvatureBundle<long double> curvature(const DerivedMetric&,
                                                const Vector4<long double>&, Convention);

Christoffel<double> christoffel(const DerivedMetric& d, const Point& p) {
  const auto jet = d.jet(p);
  return christoffel(jet, invert4(jet.g));
}

Riemann<double> riemann(const DerivedMetric& d, const Point& p, Convention convention) {
  return curvature(d, p, convention).riemann_low;
}

Matrix4<double> ricci(const DerivedMetric& d, const Point& p) { return curvature(d, p).ricci; }

double scalar_curvature(const DerivedMetric& d, const Point& p) {
  return curvature(d, p).scalar;
}

Matrix4<double> einstein(const DerivedMetric& d, const Point& p) {
  return curvature(d, p).einstein;
}

double kretschmann(const DerivedMetric& d, const Point& p) { return curvature(d, p).kretschmann; }

double det_metric(const DerivedMetric& d, const Point& p) { return det4(d.spec().values(p)); }

CanonicalComponent canonicalize(int a, int b, int c, int d) {
  if (a == b || c == d) return {{a, b, c, d}, 0};
  int sign = 1;
  if (a > b) {
    std::swap(a, b);
    sign = -sign;
  }
  if (c > d) {
    std::swap(c, d);
    sign = -sign;
  }
  if (std::pair(a, b) > std::pair(c, d)) {
    std::swap(a, c);
    std::swap(b, d);
  }
  return {{a, b, c, d}, sign};
}

std::vector<std::array<int, 4>> canonical_components() {
  std::vector<std::array<int, 4>> out;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = c + 1; d < 4; ++d)
          if (std::pair(a, b) <= std::pair(c, d)) out.push_back({a, b, c, d});
  return out;
}

template <typename Scalar>
RiemannSymmetryResiduals symmetry_residuals(const Riemann<Scalar>& r) {
  RiemannSymmetryResiduals res{0, 0, 0, 0, double(r.max_abs())};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
          const double x = double(r(a, b, c, d));
          res.first_pair = std::max(res.first_pair, std::abs(x + double(r(b, a, c, d))));
          res.second_pair = std::max(res.second_pair, std::abs(x + double(r(a, b, d, c))));
          res.pair_exchange = std::max(res.pair_exchange, std::abs(x - double(r(c, d, a, b))));
          res.bianchi = std::max(
              res.bianchi, std::abs(x + double(r(a, c, d, b)) + double(r(a, d, b, c))));
        }
  return res;
}

template RiemannSymmetryResiduals symmetry_residuals(const Riemann<double>&);
template RiemannSymmetryResiduals symmetry_residuals(const Riemann<long double>&);

}  // namespace curvcheck
