#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "curvcheck/analysis.hpp"
#include "curvcheck/tensor.hpp"

namespace curvcheck::cli {

enum ExitCode : int {
  kPass = 0,
  kVerificationFailed = 1,
  kUsageError = 2,
  kNumericError = 3,
};

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// "lo:hi:n" (linear) or "lo:hi:nlog" (log-spaced).
Axis parse_axis(std::string_view text);

/// "t=0,r=1" with unnamed coordinates defaulting to t=0, r=1, theta=pi/2, phi=0.
Point parse_point(std::string_view text, const Coordinates& coords);

/// A real written as a constant expression in pi ("-pi/2"), or +-inf.
double parse_real(std::string_view text);

/// Comma-separated reals.
std::vector<double> parse_list(std::string_view text);

/// 17 significant digits, "." separator, independent of the locale.
std::string format_double(double value);

// ---------------------------------------------------------------------------
// Metric files
//
//   name = perturbed
//   coords = t, r, theta, phi
//   param M = 1
//   g[0][0] = 1 - 2*M/r
//   domain r = 0 : inf
//   exclude = 1 + sin(t)
//
// '#' starts a comment. Omitted entries are 0.

class MetricFileError : public std::runtime_error {
 public:
  MetricFileError(int line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

MetricSpec parse_metric_file(std::string_view text, std::string default_name = "file");
MetricSpec load_metric_file(const std::filesystem::path& path);
std::string format_metric_file(const MetricSpec& spec);

/// FNV-1a over the canonical metric-file text.
std::uint64_t metric_hash(const MetricSpec& spec);
std::string hex(std::uint64_t value);

// ---------------------------------------------------------------------------

struct Tolerance {
  double atol = 1e-9;
  double rtol = 1e-7;
  bool close(double x, double y) const;
};

/// In-process entry point. args excludes the program name.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace curvcheck::cli
