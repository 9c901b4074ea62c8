#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "curvcheck/expr.hpp"
#include "curvcheck/tensor.hpp"

namespace curvcheck {

/// Free functions of the block ansatz
///   ds^2 = u^2 dt^2 + 2q dt dr + 2v dt dphi - a^2 b^2 dr^2 - a^2 dtheta^2.
/// u, v, a depend on (t, r); b and q on t only.
struct AnsatzFunctions {
  Expr u, v, a, b, q;
};

/// Throws std::invalid_argument if b or q depends on r.
MetricSpec build_ansatz(const AnsatzFunctions& fns, std::string name = "ansatz");

/// Free functions of the Ricci-flat family. H is derived, never supplied.
struct SolutionParams {
  Expr f, c, q, H0, H1;
};

/// H = (24 c f_t^2 + 4 c_t f f_t - 4 c f f_tt) / (f^8 c), built with diff().
Expr H_of(const SolutionParams& params);

/// The t interval on which f and c are checked for zeros.
struct TimeWindow {
  double lower = -1.2;
  double upper = 4.4;
  int samples = 1001;
};

/// g00 = 4 H r^{3/2} + H0 r ln r + H1 r, g01 = q, g03 = c r,
/// g11 = -1/(f^6 sqrt r), g22 = -f^2/sqrt r, g33 = 0.
/// Throws std::invalid_argument when f or c vanishes (or changes sign) on the
/// window, or when any function depends on r.
MetricSpec build_theorem1(const SolutionParams& params, TimeWindow window = {},
                          std::string name = "theorem1");

/// f = 1 + sin t, c = f^-4, q = H0 = H1 = 0.
SolutionParams theorem2_params();
/// The fixed periodic solution, entries as printed.
MetricSpec build_theorem2();
AnsatzFunctions theorem2_ansatz();

MetricSpec minkowski();
/// Throws std::invalid_argument unless M > 0. Regular domain r > 2M.
MetricSpec schwarzschild(double mass);

// ---------------------------------------------------------------------------
// Closed forms for the periodic solution, S = 1 + sin t.

namespace closed_form {
double eta00(double t, double r);
double det(double t, double r);
/// The eight nonzero lowered Riemann components in printed index order.
struct PrintedComponent {
  std::array<int, 4> index;
  double (*value)(double t, double r);
};
const std::array<PrintedComponent, 8>& riemann_components();
double kretschmann(double t, double r);
/// dt/dr = sqrt(S) / (4 r sqrt(2 - sin t)).
double null_slope(double t, double r);
/// Printed t-slice coefficients (dr^2, dtheta^2).
std::array<double, 2> slice(double t, double r);
/// Leading principal minors of orders 1..4.
std::array<double, 4> minors(double t, double r);
}  // namespace closed_form

// ---------------------------------------------------------------------------
// Derivation chain

enum class Stage {
  raw,          // general ansatz
  linear_v,     // v = c r
  power_a,      // ... and a = f r^{-1/4}
  normalized_b  // ... and b = 1/f^4
};

std::string_view name_of(Stage stage);

struct DerivationRow {
  int mu;
  int nu;
  double engine;
  /// Printed closed form where the chain gives one; the vanishing claims
  /// carry 0.
  std::optional<double> paper;
};

struct DerivationReport {
  Stage stage;
  Point point;
  /// Sign relating engine Ricci to the printed formulas.
  int printed_ricci_sign;
  /// 1 + sqrt|K| at the point.
  double zero_scale;
  /// All ten independent Ricci components, row-major upper triangle.
  std::vector<DerivationRow> rows;
};

class StagePreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Engine Ricci next to the printed formula values for one stage. The stage
/// substitutions are checked numerically near p.
DerivationReport derivation_residuals(const AnsatzFunctions& fns, Stage stage, const Point& p,
                                      Convention convention);

/// Fixes both signs empirically: riemann_sign from R_2121 of the periodic
/// solution, printed_ricci_sign from R_03 of a raw ansatz.
Convention calibrate_convention();

// ---------------------------------------------------------------------------
// Randomized draws

using Rng = std::mt19937_64;
inline constexpr std::uint64_t kDefaultSeed = 42;

/// a0 + sum_{k=1..degree} (a_k cos kt + b_k sin kt) with sum |a_k|+|b_k| = amplitude.
Expr random_trig_polynomial(Rng& rng, double center, double amplitude, int degree = 3);

/// f in [1.5, 2.5], |c| >= 0.2, q, H0, H1 bounded trig polynomials.
SolutionParams random_solution_params(Rng& rng);
/// The same draw with q replaced by 0.
SolutionParams with_zero_q(SolutionParams params);

/// Generic raw ansatz with a, b, v bounded away from zero on the sampling window.
AnsatzFunctions random_ansatz(Rng& rng);

struct SamplingWindow {
  double t_lower = -1.2;
  double t_upper = 4.4;
  double guard = 0.05;
  double r_lower = 0.05;
  double r_upper = 20.0;
  double theta_lower = 0.3;
  double theta_upper = 2.8;
};

/// t uniform outside the guard bands around -pi/2 + 2k pi, r log-uniform.
Point sample_regular_point(Rng& rng, const SamplingWindow& window = {});
/// Distance from t to the nearest zero of 1 + sin t.
double distance_to_degeneracy(double t);

}  // namespace curvcheck
