#include "cli/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>

namespace curvcheck::cli {

RunReport::RunReport(std::string command) : command_(std::move(command)) {}

void RunReport::set_metric(const MetricSpec& spec) {
  metric_name_ = spec.name();
  metric_hash_ = hex(metric_hash(spec));
}

bool RunReport::passed() const {
  for (const Check& c : checks_)
    if (!c.pass) return false;
  return true;
}

Json number(double value) {
  if (std::isfinite(value)) return value;
  return format_double(value);
}

Json RunReport::to_json() const {
  Json j;
  j["command"] = command_;
  j["metric"] = {{"name", metric_name_}, {"hash", metric_hash_}};
  j["convention"] = {{"riemann_sign", convention_.riemann_sign},
                     {"printed_ricci_sign", convention_.printed_ricci_sign}};
  j["tolerance"] = {{"atol", tolerance_.atol}, {"rtol", tolerance_.rtol}};
  j["seed"] = seed_;
  Json checks = Json::array();
  for (const Check& c : checks_) {
    Json cj;
    cj["name"] = c.name;
    cj["status"] = c.pass ? "pass" : "fail";
    cj["value"] = number(c.value);
    cj["limit"] = c.limit ? number(*c.limit) : Json(nullptr);
    cj["detail"] = c.detail;
    checks.push_back(std::move(cj));
  }
  j["checks"] = std::move(checks);
  j["passed"] = passed();
  j["data"] = data_;
  j["wall_time_s"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  return j;
}

namespace {

// Shortest text that reads back to the same double.
std::string shortest(double value) {
  if (!std::isfinite(value)) return format_double(value);
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

}  // namespace

void RunReport::write_text(std::ostream& out) const {
  out << command_ << ": metric " << metric_name_ << " [" << metric_hash_ << "]\n";
  out << "convention: riemann_sign=" << convention_.riemann_sign
      << " printed_ricci_sign=" << convention_.printed_ricci_sign << "  seed=" << seed_
      << "  atol=" << shortest(tolerance_.atol) << " rtol=" << shortest(tolerance_.rtol)
      << "\n";
  if (!rows_.empty()) {
    std::vector<std::size_t> width(columns_.size());
    for (std::size_t i = 0; i < columns_.size(); ++i) width[i] = columns_[i].size();
    for (const auto& row : rows_)
      for (std::size_t i = 0; i < row.size() && i < width.size(); ++i)
        width[i] = std::max(width[i], row[i].size());
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size() && i < width.size(); ++i)
        out << std::left << std::setw(static_cast<int>(width[i]) + 2) << cells[i];
      out << "\n";
    };
    line(columns_);
    for (const auto& row : rows_) line(row);
  }
  // With a table the checks are already visible in it; list failures only.
  for (const Check& c : checks_) {
    if (!rows_.empty() && c.pass) continue;
    out << (c.pass ? "PASS " : "FAIL ") << std::left << std::setw(28) << c.name << " "
        << shortest(c.value);
    if (c.limit) out << " (limit " << shortest(*c.limit) << ")";
    if (!c.detail.empty()) out << "  " << c.detail;
    out << "\n";
  }
  out << (passed() ? "result: pass" : "result: FAIL") << "\n";
}

}  // namespace curvcheck::cli
