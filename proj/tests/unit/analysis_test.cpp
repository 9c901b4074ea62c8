#include <doctest.h>

#include <cmath>
#include <numbers>

#include "curvcheck/analysis.hpp"
#include "curvcheck/catalog.hpp"
#include "generators.hpp"

using namespace curvcheck;
using namespace curvcheck::testing;

namespace {

constexpr double kPi = std::numbers::pi;

Point pt(double t, double r) { return Point(t, r, 1.0, 0.0); }

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("signature spot values") {
  const MetricSpec s = build_theorem2();
  const SignatureReport rep = signature_at(s, pt(0, 1));
  CHECK(rep.minors[0] == doctest::Approx(32.0).epsilon(1e-14));
  CHECK(rep.minors[1] == doctest::Approx(-32.0).epsilon(1e-14));
  CHECK(rep.minors[2] == doctest::Approx(32.0).epsilon(1e-14));
  CHECK(rep.minors[3] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(rep.classification == SignatureClass::time_coordinate_ok);
  CHECK(signature_at(s, pt(-kPi / 2, 1)).classification == SignatureClass::degenerate);

  const SignatureReport flat = signature_at(minkowski(), pt(0, 1));
  CHECK(flat.minors == std::array<double, 4>{1, -1, 1, -1});
  CHECK(flat.classification == SignatureClass::time_coordinate_ok);

  // Euclidean signature is neither.
  const MetricSpec wrong("euclid", default_coordinates(),
                         {Expr(1.0), 0.0, 0.0, 0.0, Expr(1.0), 0.0, 0.0, Expr(1.0), 0.0, Expr(1.0)});
  CHECK(signature_at(wrong, pt(0, 1)).classification == SignatureClass::other);
}

TEST_CASE("signature minors match their closed forms") {
  const MetricSpec s = build_theorem2();
  Rng rng(61);
  for (int i = 0; i < 100; ++i) {
    const Point p = sample_regular_point(rng);
    const SignatureReport rep = signature_at(s, p);
    const auto expected = closed_form::minors(p[0], p[1]);
    for (int k = 0; k < 4; ++k) CHECK(close(rep.minors[k], expected[k], 1e-9));
    CHECK(rep.classification == SignatureClass::time_coordinate_ok);
  }
}

TEST_CASE("null slopes") {
  const MetricSpec s = build_theorem2();
  const NullSlopes a = null_slopes(s, pt(0, 1));
  CHECK(a.plus == doctest::Approx(0.1767766953).epsilon(1e-9));
  CHECK(a.minus == doctest::Approx(-0.1767766953).epsilon(1e-9));
  CHECK(null_slopes(s, pt(0, 2)).plus == doctest::Approx(0.0883883476).epsilon(1e-9));
  const NullSlopes flat = null_slopes(minkowski(), pt(0.3, 2));
  CHECK(flat.plus == 1.0);
  CHECK(flat.minus == -1.0);

  Rng rng(67);
  for (int i = 0; i < 100; ++i) {
    const Point p = sample_regular_point(rng);
    const NullSlopes n = null_slopes(s, p);
    CHECK(close(n.plus, -n.minus, 1e-12));
    CHECK(close(n.plus, closed_form::null_slope(p[0], p[1]), 1e-9));
    CHECK(null_residual(s, p, n.plus) <= 1e-12);
  }
}

TEST_CASE("null slope errors are typed") {
  auto kind_at = [](const MetricSpec& s, const Point& p) {
    try {
      null_slopes(s, p);
    } catch (const NullSlopeError& e) {
      return e.kind();
    }
    FAIL("no error");
    return NullSlopeError::Kind::undefined_metric;
  };
  CHECK(kind_at(build_theorem2(), pt(-kPi / 2, 1)) == NullSlopeError::Kind::undefined_metric);
  const MetricSpec euclid("euclid", default_coordinates(),
                          {Expr(1.0), 0.0, 0.0, 0.0, Expr(1.0), 0.0, 0.0, Expr(1.0), 0.0, Expr(1.0)});
  CHECK(kind_at(euclid, pt(0, 1)) == NullSlopeError::Kind::complex_roots);
  const MetricSpec null00("null", default_coordinates(),
                          {Expr(0.0), 1.0, 0.0, 0.0, Expr(-1.0), 0.0, 0.0, Expr(-1.0), 0.0, Expr(-1.0)});
  CHECK(kind_at(null00, pt(0, 1)) == NullSlopeError::Kind::degenerate_quadratic);
}

TEST_CASE("the plus curve from (0.5, 1) stays trapped and rises") {
  const MetricSpec s = build_theorem2();
  const NullCurve c = integrate_null_curve(s, pt(0.5, 1), Branch::plus, 100.0, 0.01);
  CHECK(c.termination == Termination::reached_end);
  CHECK(c.samples.back().r == 100.0);
  for (std::size_t i = 0; i < c.samples.size(); ++i) {
    const NullSample& x = c.samples[i];
    CHECK(x.t > -kPi / 2);
    CHECK(x.t < 3 * kPi / 2);
    CHECK(x.residual <= 1e-6);
    if (i > 0) CHECK(x.t > c.samples[i - 1].t);
  }
}

TEST_CASE("Minkowski null curves are straight") {
  const NullCurve up = integrate_null_curve(minkowski(), pt(0.5, 1), Branch::plus, 3.0, 0.1);
  const NullCurve down = integrate_null_curve(minkowski(), pt(0.5, 1), Branch::minus, 3.0, 0.1);
  for (const NullSample& x : up.samples) CHECK(x.t == doctest::Approx(0.5 + (x.r - 1)));
  for (const NullSample& x : down.samples) CHECK(x.t == doctest::Approx(0.5 - (x.r - 1)));
}

TEST_CASE("step halving agrees with the fourth-order error model") {
  const MetricSpec s = build_theorem2();
  auto end_t = [&](double h) {
    return integrate_null_curve(s, pt(0.5, 1), Branch::plus, 5.0, h).samples.back().t;
  };
  const double coarse = end_t(0.02);
  const double fine = end_t(0.01);
  const double finer = end_t(0.005);
  // For an order-4 method successive differences shrink by 2^4.
  const double e1 = std::abs(coarse - fine);
  const double e2 = std::abs(fine - finer);
  CHECK(e1 > 0);
  CHECK(e2 <= e1 / 16 * 1.5 + 1e-14);
  // Richardson estimate of the error of the fine curve, from the coarse pair.
  const double estimate = e1 / 15;
  CHECK(e2 <= 16 * estimate);
}

TEST_CASE("curve toward r = 0 leaves the domain; a curve into an excluded locus stops near it") {
  const MetricSpec s = build_theorem2();
  const NullCurve in = integrate_null_curve(s, pt(0.5, 1), Branch::plus, 1e-6, 0.01);
  CHECK(in.termination == Termination::left_domain);
  CHECK(in.samples.back().r == doctest::Approx(1e-4));

  // Flat space with an excluded line t = 2 across the light ray t = r - 1.
  RegularDomain dom;
  dom.guards.push_back(parse("t-2"));
  const MetricSpec cut("cut", default_coordinates(),
                       {Expr(1.0), 0.0, 0.0, 0.0, Expr(-1.0), 0.0, 0.0, Expr(-1.0), 0.0,
                        Expr(-1.0)},
                       {}, dom);
  const NullCurve stop = integrate_null_curve(cut, pt(0, 1), Branch::plus, 10, 0.1);
  CHECK(stop.termination == Termination::near_degeneracy);
  CHECK(stop.samples.back().t == doctest::Approx(2.0).epsilon(1e-2));
  CHECK(stop.samples.back().t < 2.0 - 1e-3);
  CHECK_FALSE(stop.reason.empty());

  CHECK_THROWS_AS(integrate_null_curve(s, pt(-kPi / 2, 1), Branch::plus, 2, 0.1), std::domain_error);
  CHECK_THROWS_AS(integrate_null_curve(s, pt(0, 1), Branch::plus, 2, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(integrate_null_curve(s, pt(0, 1), Branch::plus, 0, 0.1), std::invalid_argument);
}

TEST_CASE("axes") {
  const auto lin = Axis{0, 1, 5}.values();
  CHECK(lin == std::vector<double>{0, 0.25, 0.5, 0.75, 1});
  const auto lg = Axis{1e-4, 1e-1, 4, true}.values();
  CHECK(lg.front() == 1e-4);
  CHECK(lg[1] == doctest::Approx(1e-3));
  CHECK(lg.back() == 1e-1);
  CHECK_THROWS_AS((Axis{0, 1, 0}.values()), std::invalid_argument);
  CHECK_THROWS_AS((Axis{0, 1, 3, true}.values()), std::invalid_argument);
}

TEST_CASE("r scan: slope -3 and an essential locus at r -> 0") {
  const DerivedMetric d = derive(build_theorem2());
  const ScanResult res = scan_singularity(d, {{0, 0, 1}, {1e-4, 1e-1, 13, true}});
  REQUIRE(res.fits.size() == 1);
  CHECK(std::abs(res.fits[0].slope + 3) <= 1e-3);
  CHECK(res.fits[0].points == 13);
  bool found = false;
  for (const Locus& l : res.loci)
    if (l.kind == LocusKind::essential && l.axis == "r" && l.approach == 1e-4) found = true;
  CHECK(found);
}

TEST_CASE("t scan: metric blows up while K vanishes") {
  const DerivedMetric d = derive(build_theorem2());
  const ScanResult res = scan_singularity(d, {{-1.2, -kPi / 2 + 1e-3, 12}, {1, 1, 1}});
  const ScanRow& last = res.rows.back();
  CHECK(last.error.empty());
  CHECK(last.kretschmann < 1e-12);
  CHECK(last.max_metric_component > 1e6);
  bool found = false;
  for (const Locus& l : res.loci)
    if (l.kind == LocusKind::non_essential && l.axis == "t" && l.approach == last.point[0])
      found = true;
  CHECK(found);
  // Closed form of K all the way in.
  for (const ScanRow& row : res.rows)
    CHECK(close(row.kretschmann, closed_form::kretschmann(row.point[0], row.point[1]), 1e-6));
}

TEST_CASE("Minkowski scan is flat; failing points keep their error") {
  const ScanResult flat = scan_singularity(derive(minkowski()), {{0, 1, 3}, {0.1, 10, 4, true}});
  for (const ScanRow& row : flat.rows) CHECK(row.kretschmann == 0.0);
  CHECK(flat.loci.empty());

  const ScanRow bad = scan_point(derive(build_theorem2()), pt(-kPi / 2, 1));
  CHECK_FALSE(bad.error.empty());
  CHECK(std::isnan(bad.kretschmann));
}

TEST_CASE("reported quantities are periodic in t") {
  const MetricSpec s = build_theorem2();
  const DerivedMetric d = derive(s);
  Rng rng(71);
  for (int i = 0; i < 50; ++i) {
    const Point p = sample_regular_point(rng);
    Point q = p;
    q[0] += 2 * kPi;
    const ScanRow a = scan_point(d, p);
    const ScanRow b = scan_point(d, q);
    CHECK(close(a.kretschmann, b.kretschmann, 1e-9));
    CHECK(close(a.det, b.det, 1e-9));
    CHECK(close(a.max_metric_component, b.max_metric_component, 1e-9));
    const auto ma = signature_at(s, p).minors;
    const auto mb = signature_at(s, q).minors;
    for (int k = 0; k < 4; ++k) CHECK(close(ma[k], mb[k], 1e-9));
    CHECK(close(null_slopes(s, p).plus, null_slopes(s, q).plus, 1e-9));
  }
}

TEST_CASE("slices") {
  const MetricSpec s = build_theorem2();
  CHECK(slice_metric(s, 0).coefficient(0, 0, {{"r", 4}, {"theta", 1}}) ==
        doctest::Approx(-0.5).epsilon(1e-15));
  const SliceMetric up = slice_metric(s, kPi / 2);
  CHECK(up.coordinates == std::array<std::string, 2>{"r", "theta"});
  // The printed dtheta^2 coefficient is -64 here; the metric itself gives -4.
  CHECK(up.coefficient(1, 1, {{"r", 1}, {"theta", 1}}) == doctest::Approx(-4.0).epsilon(1e-15));
  CHECK(closed_form::slice(kPi / 2, 1)[1] == doctest::Approx(-64.0).epsilon(1e-15));
  CHECK_THROWS_AS(slice_metric(s, -kPi / 2), std::domain_error);

  const SliceMetric flat = slice_metric(minkowski(), 0.3);
  CHECK(flat.coefficient(0, 0, {{"r", 2}, {"theta", 1}}) == -1.0);
  CHECK(flat.coefficient(1, 1, {{"r", 2}, {"theta", 1}}) == -1.0);
  CHECK(flat.coefficient(0, 1, {{"r", 2}, {"theta", 1}}) == 0.0);
}

TEST_CASE("Killing residuals") {
  const std::array<Expr, 4> dt{Expr(1.0), Expr(0.0), Expr(0.0), Expr(0.0)};
  const std::array<Expr, 4> dtheta{Expr(0.0), Expr(0.0), Expr(1.0), Expr(0.0)};
  CHECK(killing_residual(derive(minkowski()), dt, pt(0.4, 2)).max_abs() == 0.0);

  const DerivedMetric d = derive(build_theorem2());
  const KillingResidual kt = killing_residual(d, dtheta, pt(1, 2));
  CHECK(kt.max_abs() <= 1e-9 * std::max(kt.scale, 1.0));
  const KillingResidual k = killing_residual(d, dt, pt(0, 1));
  CHECK(k.residual(2, 2) == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(k.residual == k.residual.transpose());

  // phi-translation is an isometry of Schwarzschild.
  const std::array<Expr, 4> dphi{Expr(0.0), Expr(0.0), Expr(0.0), Expr(1.0)};
  CHECK(killing_residual(derive(schwarzschild(1.0)), dphi, Point(0, 4, 1.1, 0.3)).max_abs() == 0.0);
}

TEST_CASE("Killing residual is linear in the field") {
  const DerivedMetric d = derive(build_theorem2());
  ExprGenerator gen(73);
  for (int i = 0; i < 20; ++i) {
    std::array<Expr, 4> x1, x2, combo;
    const double alpha = uniform(gen.rng(), -2, 2);
    const double beta = uniform(gen.rng(), -2, 2);
    using enum BinaryOp;
    for (int k = 0; k < 4; ++k) {
      x1[k] = gen(2);
      x2[k] = gen(2);
      combo[k] = Expr::binary(add, Expr::binary(multiply, Expr(alpha), x1[k]),
                              Expr::binary(multiply, Expr(beta), x2[k]));
    }
    const Point p = sample_regular_point(gen.rng(), {-1.2, 2, 0.3, 0.5, 2.0, 0.3, 2.8});
    const KillingResidual a = killing_residual(d, x1, p);
    const KillingResidual b = killing_residual(d, x2, p);
    const KillingResidual c = killing_residual(d, combo, p);
    const Matrix4<double> expected = alpha * a.residual + beta * b.residual;
    const double scale = std::abs(alpha) * a.scale + std::abs(beta) * b.scale;
    CHECK((c.residual - expected).cwiseAbs().maxCoeff() <= 1e-12 * scale);
  }
}

}  // TEST_SUITE
