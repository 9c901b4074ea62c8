#include "curvcheck/tensor.hpp"

namespace curvcheck {

namespace {

using Mat = Matrix4<double>;

// nabla_m G^m_n from a third-order jet. With kMagnitude every input is
// replaced by its absolute value and every subtraction by an addition, which
// yields the size of the terms whose cancellation the identity asserts.
template <bool kMagnitude>
Vector4<double> divergence(MetricJet<double> jet, Mat ginv) {
  auto sub = [](double x, double y) { return kMagnitude ? x + y : x - y; };
  if constexpr (kMagnitude) {
    ginv = ginv.cwiseAbs();
    jet.g = jet.g.cwiseAbs();
    for (auto& m : jet.d1) m = m.cwiseAbs();
    for (auto& a : jet.d2)
      for (auto& m : a) m = m.cwiseAbs();
    for (auto& a : jet.d3)
      for (auto& b : a)
        for (auto& m : b) m = m.cwiseAbs();
  }
  auto negm = [&](const Mat& m) -> Mat { return kMagnitude ? m : Mat(-m); };

  // Inverse metric derivatives.
  std::array<Mat, 4> dginv;
  for (int a = 0; a < 4; ++a) dginv[a] = negm(ginv * jet.d1[a] * ginv);
  std::array<std::array<Mat, 4>, 4> ddginv;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      ddginv[a][b] = negm(ginv * jet.d2[a][b] * ginv) +
                     ginv * jet.d1[a] * ginv * jet.d1[b] * ginv +
                     ginv * jet.d1[b] * ginv * jet.d1[a] * ginv;

  // Christoffel symbols of the first kind and their derivatives.
  Christoffel<double> g1;
  IndexArray<double, 4> dg1;   // (a, k, m, n)
  IndexArray<double, 5> ddg1;  // (a, b, k, m, n)
  for (int k = 0; k < 4; ++k)
    for (int m = 0; m < 4; ++m)
      for (int n = 0; n < 4; ++n) {
        g1(k, m, n) = 0.5 * sub(jet.d1[n](k, m) + jet.d1[m](k, n), jet.d1[k](m, n));
        for (int a = 0; a < 4; ++a) {
          dg1(a, k, m, n) = 0.5 * sub(jet.d2[a][n](k, m) + jet.d2[a][m](k, n), jet.d2[a][k](m, n));
          for (int b = 0; b < 4; ++b)
            ddg1(a, b, k, m, n) =
                0.5 * sub(jet.d3[a][b][n](k, m) + jet.d3[a][b][m](k, n), jet.d3[a][b][k](m, n));
        }
      }

  // Second kind and derivatives.
  Christoffel<double> gam;
  IndexArray<double, 4> dgam;   // (a, l, m, n)
  IndexArray<double, 5> ddgam;  // (a, b, l, m, n)
  for (int l = 0; l < 4; ++l)
    for (int m = 0; m < 4; ++m)
      for (int n = 0; n < 4; ++n) {
        double v = 0;
        for (int k = 0; k < 4; ++k) v += ginv(l, k) * g1(k, m, n);
        gam(l, m, n) = v;
        for (int a = 0; a < 4; ++a) {
          double dv = 0;
          for (int k = 0; k < 4; ++k) dv += dginv[a](l, k) * g1(k, m, n) + ginv(l, k) * dg1(a, k, m, n);
          dgam(a, l, m, n) = dv;
          for (int b = 0; b < 4; ++b) {
            double ddv = 0;
            for (int k = 0; k < 4; ++k)
              ddv += ddginv[a][b](l, k) * g1(k, m, n) + dginv[a](l, k) * dg1(b, k, m, n) +
                     dginv[b](l, k) * dg1(a, k, m, n) + ginv(l, k) * ddg1(a, b, k, m, n);
            ddgam(a, b, l, m, n) = ddv;
          }
        }
      }

  // Ricci and its first derivatives:
  // R_mn = d_l G^l_mn - d_n G^l_ml + G^l_ls G^s_mn - G^l_ns G^s_ml.
  Mat ric = Mat::Zero();
  std::array<Mat, 4> dric;
  for (auto& m : dric) m.setZero();
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) {
      double r = 0;
      for (int l = 0; l < 4; ++l) {
        r = r + dgam(l, l, m, n);
        r = sub(r, dgam(n, l, m, l));
        for (int s = 0; s < 4; ++s) {
          r = r + gam(l, l, s) * gam(s, m, n);
          r = sub(r, gam(l, n, s) * gam(s, m, l));
        }
      }
      ric(m, n) = r;
      for (int a = 0; a < 4; ++a) {
        double dr = 0;
        for (int l = 0; l < 4; ++l) {
          dr = dr + ddgam(a, l, l, m, n);
          dr = sub(dr, ddgam(a, n, l, m, l));
          for (int s = 0; s < 4; ++s) {
            dr = dr + dgam(a, l, l, s) * gam(s, m, n) + gam(l, l, s) * dgam(a, s, m, n);
            dr = sub(dr, dgam(a, l, n, s) * gam(s, m, l) + gam(l, n, s) * dgam(a, s, m, l));
          }
        }
        dric[a](m, n) = dr;
      }
    }

  Vector4<double> dscalar;
  for (int a = 0; a < 4; ++a)
    dscalar[a] = (dginv[a].array() * ric.array()).sum() + (ginv.array() * dric[a].array()).sum();

  // nabla_m G^m_n = g^{ma} (d_m R_an - G^l_ma R_ln - G^l_mn R_al) - 1/2 d_n R.
  Vector4<double> div;
  for (int n = 0; n < 4; ++n) {
    double v = 0;
    for (int m = 0; m < 4; ++m)
      for (int a = 0; a < 4; ++a) {
        double cov = dric[m](a, n);
        for (int l = 0; l < 4; ++l) {
          cov = sub(cov, gam(l, m, a) * ric(l, n));
          cov = sub(cov, gam(l, m, n) * ric(a, l));
        }
        v += ginv(m, a) * cov;
      }
    div[n] = sub(v, 0.5 * dscalar[n]);
  }
  return div;
}

}  // namespace

BianchiResidual contracted_bianchi(const DerivedMetric& d, const Point& p) {
  if (d.max_order() < 3)
    throw std::logic_error("contracted Bianchi check needs third metric derivatives");
  const MetricJet<double> jet = d.jet(p, 3);
  const Mat ginv = invert4(jet.g);
  BianchiResidual out;
  out.divergence = divergence<false>(jet, ginv);
  const double scale = divergence<true>(jet, ginv).maxCoeff();
  out.scale = scale > 0 ? scale : 1.0;
  return out;
}

}  // namespace curvcheck
