#include <cmath>

#include "curvcheck/analysis.hpp"

namespace curvcheck {

std::string_view name_of(LocusKind k) {
  return k == LocusKind::essential ? "essential" : "non_essential";
}

std::vector<double> Axis::values() const {
  if (count < 1) throw std::invalid_argument("axis needs at least one point");
  if (log_spaced && !(lower > 0.0 && upper > 0.0))
    throw std::invalid_argument("log-spaced axis needs positive bounds");
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) {
    const double s = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    v[i] = log_spaced ? std::exp(std::log(lower) + s * (std::log(upper) - std::log(lower)))
                      : lower + s * (upper - lower);
  }
  if (count > 1) {
    v.front() = lower;
    v.back() = upper;
  }
  return v;
}

ScanRow scan_point(const DerivedMetric& d, const Point& p) {
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  ScanRow row{p, kNaN, kNaN, kNaN, {}};
  try {
    const Matrix4<double> g = d.spec().values(p);
    row.det = det4(g);
    row.max_metric_component = g.cwiseAbs().maxCoeff();
    row.kretschmann = curvature<double>(d, p).kretschmann;
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

namespace {

bool usable(const ScanRow& row) { return row.error.empty() && std::isfinite(row.kretschmann); }

std::optional<PowerFit> fit_line(double t, const std::vector<const ScanRow*>& line) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const ScanRow* row : line) {
    if (!usable(*row) || !(row->kretschmann > 0.0)) continue;
    const double x = std::log(row->point[1]);
    const double y = std::log(row->kretschmann);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  const double denom = n * sxx - sx * sx;
  if (n < 2 || denom == 0.0) return std::nullopt;
  const double slope = (n * sxy - sx * sy) / denom;
  return PowerFit{t, slope, (sy - slope * sx) / n, n};
}

// Examines the last few usable rows toward one end of a line. Growth is
// required to be monotone and at least tenfold over that stretch.
std::optional<Locus> classify_end(std::vector<const ScanRow*> approach, const std::string& axis,
                                  int axis_index) {
  std::erase_if(approach, [](const ScanRow* r) { return !usable(*r); });
  if (approach.size() > 4) approach.erase(approach.begin(), approach.end() - 4);
  if (approach.size() < 3) return std::nullopt;

  auto monotone = [&](auto key, bool increasing) {
    for (std::size_t i = 1; i < approach.size(); ++i) {
      const double a = key(*approach[i - 1]);
      const double b = key(*approach[i]);
      if (increasing ? !(b > a) : !(b < a)) return false;
    }
    return true;
  };
  auto K = [](const ScanRow& r) { return r.kretschmann; };
  auto G = [](const ScanRow& r) { return r.max_metric_component; };

  const ScanRow& first = *approach.front();
  const ScanRow& last = *approach.back();
  Locus locus{LocusKind::essential, axis, last.point[1 - axis_index], last.point[axis_index],
              last.kretschmann, last.max_metric_component};
  if (monotone(K, true) && last.kretschmann > 10.0 * first.kretschmann) return locus;
  if (monotone(G, true) && last.max_metric_component > 10.0 * first.max_metric_component &&
      monotone(K, false)) {
    locus.kind = LocusKind::non_essential;
    return locus;
  }
  return std::nullopt;
}

void classify_line(const std::vector<const ScanRow*>& line, const std::string& axis,
                   int axis_index, std::vector<Locus>& out) {
  if (line.size() < 3) return;
  if (auto l = classify_end(line, axis, axis_index)) out.push_back(*l);
  std::vector<const ScanRow*> reversed(line.rbegin(), line.rend());
  if (auto l = classify_end(reversed, axis, axis_index)) out.push_back(*l);
}

}  // namespace

ScanResult scan_singularity(const DerivedMetric& d, const ScanGrid& grid) {
  const std::vector<double> ts = grid.t.values();
  const std::vector<double> rs = grid.r.values();
  ScanResult result;
  result.rows.reserve(ts.size() * rs.size());
  for (double t : ts)
    for (double r : rs) result.rows.push_back(scan_point(d, Point(t, r, grid.theta, grid.phi)));

  const std::size_t nr = rs.size();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    std::vector<const ScanRow*> line;
    for (std::size_t j = 0; j < nr; ++j) line.push_back(&result.rows[i * nr + j]);
    if (nr >= 2)
      if (auto fit = fit_line(ts[i], line)) result.fits.push_back(*fit);
    classify_line(line, "r", 1, result.loci);
  }
  for (std::size_t j = 0; j < nr; ++j) {
    std::vector<const ScanRow*> line;
    for (std::size_t i = 0; i < ts.size(); ++i) line.push_back(&result.rows[i * nr + j]);
    classify_line(line, "t", 0, result.loci);
  }
  return result;
}

}  // namespace curvcheck
