#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

#include "curvcheck/cli.hpp"

namespace curvcheck::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i)
    if (i == s.size() || s[i] == sep) {
      parts.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  return parts;
}

}  // namespace

// Numbers may be written as constant expressions in pi, e.g. "-pi/2".
double parse_real(std::string_view text) {
  const std::string_view s = trim(text);
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  try {
    return evaluate(parse(s), Bindings{{"pi", std::numbers::pi}});
  } catch (const std::exception& e) {
    throw UsageError("invalid number '" + std::string(s) + "': " + e.what());
  }
}

Axis parse_axis(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3)
    throw UsageError("axis must be lo:hi:n or lo:hi:nlog, got '" + std::string(text) + "'");
  Axis axis{parse_real(parts[0]), parse_real(parts[1]), 0, false};
  std::string_view n = parts[2];
  if (n.ends_with("log")) {
    axis.log_spaced = true;
    n.remove_suffix(3);
  }
  const auto [ptr, ec] = std::from_chars(n.data(), n.data() + n.size(), axis.count);
  if (ec != std::errc() || ptr != n.data() + n.size() || axis.count < 1)
    throw UsageError("axis count must be a positive integer, got '" + std::string(parts[2]) + "'");
  if (axis.log_spaced && !(axis.lower > 0 && axis.upper > 0))
    throw UsageError("log-spaced axis needs positive bounds");
  return axis;
}

Point parse_point(std::string_view text, const Coordinates& coords) {
  Point p(0.0, 1.0, std::numbers::pi / 2, 0.0);
  for (std::string_view item : split(text, ',')) {
    if (item.empty() || item == "...") continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos)
      throw UsageError("point entries look like name=value, got '" + std::string(item) + "'");
    const std::string_view name = trim(item.substr(0, eq));
    const auto it = std::find(coords.begin(), coords.end(), name);
    if (it == coords.end()) throw UsageError("unknown coordinate '" + std::string(name) + "'");
    p[it - coords.begin()] = parse_real(item.substr(eq + 1));
  }
  return p;
}

std::vector<double> parse_list(std::string_view text) {
  std::vector<double> out;
  for (std::string_view item : split(text, ','))
    if (!item.empty()) out.push_back(parse_real(item));
  if (out.empty()) throw UsageError("empty list");
  return out;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

bool Tolerance::close(double x, double y) const {
  return std::abs(x - y) <= atol + rtol * std::max(std::abs(x), std::abs(y));
}

}  // namespace curvcheck::cli
