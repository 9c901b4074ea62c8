#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "curvcheck/expr.hpp"
#include "curvcheck/tensor.hpp"

namespace curvcheck {

// ---------------------------------------------------------------------------
// Signature

enum class SignatureClass { time_coordinate_ok, degenerate, other };

std::string_view name_of(SignatureClass c);

struct SignatureReport {
  Point point;
  /// Leading principal minors of orders 1..4 in coordinate order. NaN when
  /// the metric cannot be evaluated at the point.
  std::array<double, 4> minors;
  SignatureClass classification;
};

SignatureReport signature_at(const MetricSpec& spec, const Point& p);

// ---------------------------------------------------------------------------
// Radial null curves in the (t, r) plane

enum class Branch { plus, minus };

std::string_view name_of(Branch b);

class NullSlopeError : public std::runtime_error {
 public:
  enum class Kind { degenerate_quadratic, complex_roots, undefined_metric };
  NullSlopeError(Kind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct NullSlopes {
  double plus;
  double minus;
  double operator[](Branch b) const { return b == Branch::plus ? plus : minus; }
};

/// Roots dt/dr of g00 dt^2 + 2 g01 dt dr + g11 dr^2 = 0 at fixed theta, phi.
NullSlopes null_slopes(const MetricSpec& spec, const Point& p);

/// |g00 s^2 + 2 g01 s + g11| over the sum of the magnitudes of its terms.
double null_residual(const MetricSpec& spec, const Point& p, double slope);

struct NullSample {
  double r;
  double t;
  double residual;
};

enum class Termination { reached_end, near_degeneracy, left_domain, step_underflow };

std::string_view name_of(Termination t);

struct NullCurve {
  Branch branch;
  std::vector<NullSample> samples;
  double step_size;
  Termination termination;
  std::string reason;
};

struct NullCurveOptions {
  /// Stop when the guard distance falls below this.
  double guard_band = 1e-3;
  double r_min = 1e-4;
  /// Step halvings allowed before giving up near a boundary.
  int max_halvings = 30;
};

/// Classical RK4 in r for dt/dr = slope_branch(t, r) from start toward
/// r_end. theta and phi are taken from start.
NullCurve integrate_null_curve(const MetricSpec& spec, const Point& start, Branch branch,
                               double r_end, double step, NullCurveOptions options = {});

// ---------------------------------------------------------------------------
// Curvature scans

struct Axis {
  double lower;
  double upper;
  int count;
  bool log_spaced = false;
  std::vector<double> values() const;
};

struct ScanGrid {
  Axis t;
  Axis r;
  double theta = 1.0;
  double phi = 0.0;
};

struct ScanRow {
  Point point;
  double kretschmann;
  double det;
  double max_metric_component;
  /// Empty when the point evaluated cleanly.
  std::string error;
};

/// Ordinary least squares of log K against log r along one fixed-t line.
struct PowerFit {
  double t;
  double slope;
  double intercept;
  int points;
};

enum class LocusKind { essential, non_essential };

std::string_view name_of(LocusKind k);

/// A grid end toward which the metric misbehaves.
struct Locus {
  LocusKind kind;
  /// The coordinate that varies along the approach ("r" or "t").
  std::string axis;
  /// Value of the other coordinate, held fixed.
  double fixed;
  /// The last grid value on the approach.
  double approach;
  double kretschmann;
  double max_metric_component;
};

struct ScanResult {
  std::vector<ScanRow> rows;
  std::vector<PowerFit> fits;
  std::vector<Locus> loci;
};

/// Rows are ordered t-major, r-minor. Points that fail to evaluate are kept
/// with NaN values and the error message.
ScanResult scan_singularity(const DerivedMetric& d, const ScanGrid& grid);

ScanRow scan_point(const DerivedMetric& d, const Point& p);

// ---------------------------------------------------------------------------
// t-slices

struct SliceMetric {
  double t0;
  /// (r, theta) block with t frozen: g[0][0] on dr^2, g[1][1] on dtheta^2.
  std::array<std::array<Expr, 2>, 2> g;
  std::array<std::string, 2> coordinates;
  double coefficient(int i, int j, const Bindings& at) const;
};

/// Throws std::domain_error if t0 lies on an excluded locus.
SliceMetric slice_metric(const MetricSpec& spec, double t0);

// ---------------------------------------------------------------------------
// Killing equation

struct KillingResidual {
  /// xi^l d_l g_mn + g_ln d_m xi^l + g_ml d_n xi^l
  Matrix4<double> residual;
  /// Largest sum of term magnitudes over the entries.
  double scale;
  double max_abs() const { return residual.cwiseAbs().maxCoeff(); }
  double relative() const { return scale > 0 ? max_abs() / scale : max_abs(); }
};

/// xi holds contravariant components as expressions in the coordinates.
KillingResidual killing_residual(const DerivedMetric& d, const std::array<Expr, 4>& xi,
                                 const Point& p);

}  // namespace curvcheck
