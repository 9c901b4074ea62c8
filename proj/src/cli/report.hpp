#pragma once

#include <chrono>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "curvcheck/cli.hpp"

namespace curvcheck::cli {

using Json = nlohmann::ordered_json;

struct Check {
  std::string name;
  bool pass;
  double value;
  std::optional<double> limit;
  std::string detail;
};

/// Everything a command reports. Key order in the JSON form is fixed.
class RunReport {
 public:
  explicit RunReport(std::string command);

  void set_metric(const MetricSpec& spec);
  void set_convention(Convention c) { convention_ = c; }
  void set_tolerance(Tolerance t) { tolerance_ = t; }
  void set_seed(std::uint64_t seed) { seed_ = seed; }
  void add_check(Check check) { checks_.push_back(std::move(check)); }
  Json& data() { return data_; }
  /// Extra table printed in text mode only.
  void set_columns(std::vector<std::string> columns) { columns_ = std::move(columns); }
  void add_row(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  bool passed() const;
  Json to_json() const;
  void write_text(std::ostream& out) const;

 private:
  std::string command_;
  std::string metric_name_;
  std::string metric_hash_;
  Convention convention_;
  Tolerance tolerance_;
  std::uint64_t seed_ = 0;
  std::vector<Check> checks_;
  Json data_ = Json::object();
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

/// Finite doubles as numbers, the rest as strings ("nan", "inf").
Json number(double value);

}  // namespace curvcheck::cli
