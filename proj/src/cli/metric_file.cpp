#include <fstream>
#include <numbers>
#include <regex>
#include <sstream>

#include "curvcheck/cli.hpp"

namespace curvcheck::cli {

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

Expr parse_entry(const std::string& text, int line) {
  try {
    return parse(text);
  } catch (const ParseError& e) {
    throw MetricFileError(line, e.what());
  }
}

}  // namespace

MetricSpec parse_metric_file(std::string_view text, std::string default_name) {
  static const std::regex kEntry(R"(g\[([0-3])\]\[([0-3])\])");
  static const std::regex kParam(R"(param\s+([A-Za-z_][A-Za-z_0-9]*))");
  static const std::regex kDomain(R"(domain\s+([A-Za-z_][A-Za-z_0-9]*))");
  static const std::regex kIdent(R"([A-Za-z_][A-Za-z_0-9]*)");

  std::string name = std::move(default_name);
  Coordinates coords = default_coordinates();
  bool coords_seen = false;
  Bindings params;
  std::array<std::optional<std::pair<Expr, int>>, 10> entries;
  std::vector<std::pair<std::string, std::pair<Interval, int>>> domains;
  std::vector<std::pair<Expr, int>> guards;

  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    raw = trim(raw);
    if (raw.empty()) continue;
    const auto eq = raw.find('=');
    if (eq == std::string::npos) throw MetricFileError(line, "expected 'key = value'");
    const std::string key = trim(raw.substr(0, eq));
    const std::string value = trim(raw.substr(eq + 1));
    if (value.empty()) throw MetricFileError(line, "empty value for '" + key + "'");

    std::smatch m;
    if (key == "name") {
      name = value;
    } else if (key == "coords") {
      if (coords_seen) throw MetricFileError(line, "coords declared twice");
      coords_seen = true;
      std::vector<std::string> names;
      std::istringstream items(value);
      for (std::string item; std::getline(items, item, ',');) names.push_back(trim(item));
      if (names.size() != 4) throw MetricFileError(line, "coords needs exactly four names");
      for (int i = 0; i < 4; ++i) {
        if (!std::regex_match(names[i], kIdent) || function_from_name(names[i]))
          throw MetricFileError(line, "invalid coordinate name '" + names[i] + "'");
        coords[i] = names[i];
      }
    } else if (std::regex_match(key, m, kParam)) {
      if (function_from_name(m[1].str()))
        throw MetricFileError(line, "parameter name '" + m[1].str() + "' is a function");
      try {
        params[m[1].str()] = evaluate(parse(value), Bindings{{"pi", std::numbers::pi}});
      } catch (const std::exception& e) {
        throw MetricFileError(line, "parameter value: " + std::string(e.what()));
      }
    } else if (std::regex_match(key, m, kEntry)) {
      int i = m[1].str()[0] - '0';
      int j = m[2].str()[0] - '0';
      if (i > j) throw MetricFileError(line, "give the upper triangle only (i <= j)");
      auto& slot = entries[MetricSpec::packed_index(i, j)];
      if (slot) throw MetricFileError(line, "entry g[" + std::to_string(i) + "][" +
                                                std::to_string(j) + "] given twice");
      slot.emplace(parse_entry(value, line), line);
    } else if (std::regex_match(key, m, kDomain)) {
      const auto colon = value.find(':');
      if (colon == std::string::npos) throw MetricFileError(line, "domain needs 'lo : hi'");
      Interval iv;
      try {
        iv.lower = parse_real(value.substr(0, colon));
        iv.upper = parse_real(value.substr(colon + 1));
      } catch (const UsageError& e) {
        throw MetricFileError(line, e.what());
      }
      if (!(iv.lower < iv.upper)) throw MetricFileError(line, "empty domain interval");
      domains.push_back({m[1].str(), {iv, line}});
    } else if (key == "exclude") {
      guards.emplace_back(parse_entry(value, line), line);
    } else {
      throw MetricFileError(line, "unknown key '" + key + "'");
    }
  }

  std::set<std::string> known(coords.begin(), coords.end());
  for (const auto& [p, v] : params) {
    if (known.contains(p)) throw MetricFileError(0, "parameter '" + p + "' shadows a coordinate");
    known.insert(p);
  }
  auto check_symbols = [&](const Expr& e, int at) {
    for (const std::string& s : free_symbols(e))
      if (!known.contains(s)) throw MetricFileError(at, "unknown symbol '" + s + "'");
  };

  std::array<Expr, 10> g;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (!entries[k]) {
      g[k] = 0.0;
      continue;
    }
    check_symbols(entries[k]->first, entries[k]->second);
    g[k] = entries[k]->first;
  }

  RegularDomain dom;
  for (const auto& [coord, iv] : domains) {
    const auto it = std::find(coords.begin(), coords.end(), coord);
    if (it == coords.end()) throw MetricFileError(iv.second, "unknown coordinate '" + coord + "'");
    dom.intervals[it - coords.begin()] = iv.first;
  }
  for (const auto& [guard, at] : guards) {
    check_symbols(guard, at);
    dom.guards.push_back(guard);
  }
  try {
    return MetricSpec(name, coords, std::move(g), std::move(params), std::move(dom));
  } catch (const std::invalid_argument& e) {
    throw MetricFileError(0, e.what());
  }
}

MetricSpec load_metric_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read metric file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_metric_file(text.str(), path.stem().string());
}

std::string format_metric_file(const MetricSpec& spec) {
  std::ostringstream out;
  const auto& c = spec.coordinates();
  out << "name = " << spec.name() << "\n";
  out << "coords = " << c[0] << ", " << c[1] << ", " << c[2] << ", " << c[3] << "\n";
  for (const auto& [p, v] : spec.parameters()) out << "param " << p << " = " << format_double(v) << "\n";
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j)
      if (!spec(i, j).is_constant(0.0))
        out << "g[" << i << "][" << j << "] = " << to_string(spec(i, j)) << "\n";
  const auto& dom = spec.domain();
  for (int i = 0; i < 4; ++i) {
    const Interval& iv = dom.intervals[i];
    if (std::isinf(iv.lower) && std::isinf(iv.upper)) continue;
    out << "domain " << c[i] << " = " << format_double(iv.lower) << " : "
        << format_double(iv.upper) << "\n";
  }
  for (const Expr& guard : dom.guards) out << "exclude = " << to_string(guard) << "\n";
  return out.str();
}

std::uint64_t metric_hash(const MetricSpec& spec) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : format_metric_file(spec)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex(std::uint64_t value) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, value >>= 4) s[i] = kDigits[value & 0xf];
  return s;
}

}  // namespace curvcheck::cli
