#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "curvcheck/catalog.hpp"
#include "curvcheck/cli.hpp"

using namespace curvcheck;
using namespace curvcheck::cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "curvcheck_unit";
  std::filesystem::create_directories(dir);
  return dir / name;
}

void write(const std::filesystem::path& p, const std::string& text) { std::ofstream(p) << text; }

int line_of(std::string_view text) {
  try {
    parse_metric_file(text);
  } catch (const MetricFileError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("grid and point syntax") {
  const Axis lin = parse_axis("-1:4.4:40");
  CHECK(lin.lower == -1);
  CHECK(lin.upper == 4.4);
  CHECK(lin.count == 40);
  CHECK_FALSE(lin.log_spaced);
  const Axis lg = parse_axis("0.05:20:40log");
  CHECK(lg.log_spaced);
  CHECK(lg.count == 40);
  CHECK_THROWS_AS(parse_axis("1:2"), UsageError);
  CHECK_THROWS_AS(parse_axis("1:2:x"), UsageError);
  CHECK_THROWS_AS(parse_axis("0:2:3log"), UsageError);

  const Point p = parse_point("t=0,r=4", default_coordinates());
  CHECK(p == Point(0, 4, std::numbers::pi / 2, 0));
  CHECK(parse_point("r=4,...", default_coordinates())[1] == 4);
  CHECK(parse_point("t=-pi/2", default_coordinates())[0] == -std::numbers::pi / 2);
  CHECK_THROWS_AS(parse_point("x=1", default_coordinates()), UsageError);
  CHECK_THROWS_AS(parse_point("t", default_coordinates()), UsageError);
  CHECK(parse_real("inf") == std::numeric_limits<double>::infinity());
  CHECK(parse_list("0.5, 1,2") == std::vector<double>{0.5, 1, 2});
}

TEST_CASE("17 significant digits") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(0.75) == "0.75");
  CHECK(std::stod(format_double(1.0 / 3)) == 1.0 / 3);
}

TEST_CASE("metric file round trip") {
  const std::string text =
      "# perturbed vacuum\n"
      "name = demo\n"
      "coords = t, r, theta, phi\n"
      "param M = 1\n"
      "g[0][0] = 1 - 2*M/r\n"
      "g[1][1] = -1/(1 - 2*M/r)\n"
      "g[2][2] = -r^2\n"
      "g[3][3] = -r^2*sin(theta)^2\n"
      "domain r = 2 : inf\n"
      "exclude = sin(theta)\n";
  const MetricSpec s = parse_metric_file(text);
  CHECK(s.name() == "demo");
  CHECK(s.parameters().at("M") == 1.0);
  CHECK(s.domain().intervals[1].lower == 2.0);
  CHECK_FALSE(s.is_regular(Point(0, 1.5, 1, 0)));
  const MetricSpec back = parse_metric_file(format_metric_file(s));
  CHECK(metric_hash(back) == metric_hash(s));
  const Point p(0.2, 4, 1.1, 0.3);
  CHECK(back.values(p) == s.values(p));
  CHECK(hex(metric_hash(s)).size() == 16);
}

TEST_CASE("metric file errors carry the line") {
  CHECK(line_of("coords = t, r, theta, phi\nwhatever = 1\n") == 2);
  CHECK(line_of("g[1][0] = r\n") == 1);
  CHECK(line_of("g[0][0] = 1\ng[0][0] = 2\n") == 2);
  CHECK(line_of("g[0][0] = 1 +\n") == 1);
  CHECK(line_of("\n\ng[0][0] = k*r\n") == 3);
  CHECK(line_of("domain r = 3 : 1\n") == 1);
  CHECK(line_of("coords = t, r\n") == 1);
}

TEST_CASE("verify exit codes") {
  CHECK(run_cli({"verify", "--metric", "minkowski"}).code == kPass);
  const Result ok = run_cli({"verify", "--metric", "theorem2", "--t", "-1:4.4:10", "--r",
                            "0.05:20:10log"});
  CHECK(ok.code == kPass);
  CHECK(ok.out.find("ricci_zero_scaled") != std::string::npos);

  const auto file = scratch("perturbed.metric");
  write(file,
        "name = perturbed\n"
        "g[0][0] = 16*r^(3/2)*(1+sin(t)+cos(t)^2)/(1+sin(t))^8\n"
        "g[0][3] = r/(1+sin(t))^4\n"
        "g[1][1] = -1/(sqrt(r)*(1+sin(t))^6)\n"
        "g[2][2] = -(1+sin(t))^2/sqrt(r) + 0.001*r\n"
        "domain r = 0 : inf\n"
        "exclude = 1 + sin(t)\n");
  const Result bad = run_cli({"verify", "--metric", file.string(), "--t", "-1:4.4:10", "--r",
                             "0.05:20:10log", "--json"});
  CHECK(bad.code == kVerificationFailed);
  const auto j = nlohmann::json::parse(bad.out);
  CHECK(j["passed"] == false);
  CHECK(j["checks"][0]["name"] == "ricci_zero_scaled");
  CHECK(j["checks"][0]["value"].get<double>() > 1e-6);
}

TEST_CASE("catalog emit round trips through verify") {
  const auto file = scratch("theorem1.metric");
  const Result emit = run_cli({"catalog", "--name", "theorem1", "--f", "2+cos(2*t)", "--c",
                              "1+0.3*sin(t)", "--q", "sin(t)", "--H0", "t", "--H1", "1+t^2",
                              "--emit", file.string()});
  REQUIRE(emit.code == kPass);
  CHECK(run_cli({"verify", "--metric", file.string()}).code == kPass);
  const MetricSpec loaded = load_metric_file(file);
  CHECK(loaded(3, 3).is_constant(0.0));
}

TEST_CASE("report layout") {
  const Result r = run_cli({"curvature", "--metric", "theorem2", "--at", "t=0,r=1", "--json"});
  CHECK(r.code == kPass);
  const auto j = nlohmann::ordered_json::parse(r.out);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"command", "metric", "convention", "tolerance", "seed",
                                         "checks", "passed", "data", "wall_time_s"});
  CHECK(j["convention"]["riemann_sign"] == 1);
  CHECK(j["seed"] == 42);
  bool saw_k = false, saw_0131 = false;
  for (const auto& c : j["checks"]) {
    if (c["name"] == "K") {
      saw_k = true;
      CHECK(c["value"].get<double>() == doctest::Approx(0.75));
    }
    if (c["name"] == "R0131") {
      saw_0131 = true;
      CHECK(c["value"].get<double>() == doctest::Approx(0.125));
    }
  }
  CHECK(saw_k);
  CHECK(saw_0131);
}

TEST_CASE("null curve CSV") {
  const auto file = scratch("null.csv");
  const Result r = run_cli({"nullcurves", "--t0", "0.5", "--r0", "1", "--branch", "both",
                           "--r-end", "50", "--out", file.string()});
  CHECK(r.code == kPass);
  std::ifstream in(file);
  std::string header;
  std::getline(in, header);
  CHECK(header == "curve_id,branch,r,t,residual");
  std::string line;
  std::set<std::string> branches;
  double worst = 0;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string id, branch, rs, ts, res;
    std::getline(ss, id, ',');
    std::getline(ss, branch, ',');
    std::getline(ss, rs, ',');
    std::getline(ss, ts, ',');
    std::getline(ss, res, ',');
    branches.insert(branch);
    worst = std::max(worst, std::stod(res));
  }
  CHECK(branches == std::set<std::string>{"plus", "minus"});
  CHECK(worst <= 1e-6);
}

TEST_CASE("scan and slice commands") {
  const Result flat = run_cli({"scan", "--metric", "minkowski", "--t", "0:1:3", "--r", "0.1:10:3log"});
  CHECK(flat.code == kPass);
  CHECK(run_cli({"scan", "--metric", "theorem2", "--expect-slope", "-3"}).code == kPass);
  CHECK(run_cli({"scan", "--metric", "theorem2", "--expect-slope", "-2"}).code ==
        kVerificationFailed);
  const Result slice = run_cli({"slice", "--metric", "minkowski", "--t0", "0", "--r", "4"});
  CHECK(slice.code == kPass);
}

TEST_CASE("killing command") {
  CHECK(run_cli({"killing", "--metric", "theorem2", "--xi", "0,0,1,0", "--at", "t=1,r=2"}).code ==
        kPass);
  CHECK(run_cli({"killing", "--metric", "theorem2", "--xi", "1,0,0,0", "--at", "t=0,r=1"}).code ==
        kVerificationFailed);
  CHECK(run_cli({"killing", "--metric", "minkowski", "--xi", "1,0,0,0"}).code == kPass);
  CHECK(run_cli({"killing", "--metric", "theorem2", "--xi", "1,0,0"}).code == kUsageError);
}

TEST_CASE("usage and numeric errors") {
  CHECK(run_cli({}).code == kUsageError);
  CHECK(run_cli({"verify", "--bogus"}).code == kUsageError);
  CHECK(run_cli({"verify", "--metric", "nope"}).code == kUsageError);
  CHECK(run_cli({"verify", "--metric", "schwarzschild", "--M", "-1"}).code == kUsageError);
  CHECK(run_cli({"curvature", "--at", "t=(1"}).code == kUsageError);
  CHECK(run_cli({"curvature", "--metric", "theorem2", "--at", "t=-pi/2,r=1"}).code == kNumericError);

  const auto file = scratch("broken.metric");
  write(file, "g[0][0] = 1\nfoo = 2\n");
  const Result r = run_cli({"verify", "--metric", file.string()});
  CHECK(r.code == kUsageError);
  CHECK(r.err.find("line 2") != std::string::npos);
  CHECK(run_cli({"verify", "--metric", scratch("missing.metric").string()}).code == kUsageError);
  CHECK(run_cli({"--help"}).code == kPass);
}

}  // TEST_SUITE
