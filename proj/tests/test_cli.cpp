#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "contactflow/cli.hpp"
#include "contactflow/errors.hpp"

using namespace contactflow;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::string& command, const json& config, bool report_only = false) {
  std::ostringstream out, err;
  cli::CommandOptions options;
  options.report_only = report_only;
  const int code = cli::run_command(command, cli::config_from_json(config), options, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("contactflow_cli_" + std::to_string(::getpid()))) {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string write(const std::string& name, const std::string& body) const {
    std::ofstream(path_ / name, std::ios::binary) << body;
    return (path_ / name).string();
  }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

int run_binary(const std::string& args) {
  const int status = std::system((std::string(CONTACTFLOW_CLI_PATH) + " " + args + " 2>/dev/null").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const json kDissipative = {{"system", "dissipative-2d"}, {"T", 0.1}, {"dt", 0.01}, {"seed", 42}};
const json kTorus = {{"system", "sasaki-einstein-t11"}, {"T", 0.01}, {"dt", 0.0005}, {"seed", 7}};

}  // namespace

TEST_CASE("config: unknown keys and wrong types are rejected") {
  CHECK_THROWS_AS(cli::config_from_json(json{{"system", "dissipative-2d"}, {"dT", 0.1}}), InputError);
  CHECK_THROWS_AS(cli::config_from_json(json{{"system", "dissipative-2d"}, {"T", "long"}}), InputError);
  CHECK_THROWS_AS(cli::config_from_json(json{{"T", 1.0}}), InputError);
  CHECK_THROWS_AS(cli::config_from_json(json{{"system", {{"chart", "darboux"}, {"h0", "1"}}}}), InputError);
  CHECK_THROWS_AS(cli::config_from_json(json{{"system", "dissipative-2d"}, {"scheme", "rk4"}}), InputError);
  CHECK_THROWS_AS(cli::config_from_json(json::array()), InputError);
}

TEST_CASE("config: effective configuration reloads to the same run") {
  const json original = {{"system", {{"catalog", "dissipative-2d"}, {"parameters", {{"gamma", 0.25}, {"V", "q1^2"}}}}},
                         {"T", 0.5},
                         {"dt", 0.01},
                         {"scheme", "midpoint"},
                         {"seed", 3},
                         {"active_noise", {1}},
                         {"bracket", {{"f", "q1"}, {"g", "p1"}}}};
  const json effective = cli::config_to_json(cli::config_from_json(original));
  CHECK(cli::config_to_json(cli::config_from_json(effective)) == effective);
  CHECK(effective.at("scheme") == "midpoint");
  CHECK(effective.at("system").at("parameters").at("V") == "q1^2");
  CHECK_FALSE(effective.contains("workers"));

  const json inline_sys = {{"system", {{"chart", "darboux"}, {"n", 1}, {"H0", "p1^2/2"}, {"noise", {"q1"}},
                                       {"constants", {{"k", 2.0}}}}}};
  const json eff2 = cli::config_to_json(cli::config_from_json(inline_sys));
  CHECK(cli::config_to_json(cli::config_from_json(eff2)) == eff2);
}

TEST_CASE("simulate: CSV layout and determinism") {
  const Result a = run("simulate", kDissipative);
  const Result b = run("simulate", kDissipative);
  REQUIRE(a.code == cli::kOk);
  CHECK(a.out == b.out);
  std::istringstream lines(a.out);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "t,q1,q2,p1,p2,z,lambda");
  int rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  CHECK(rows == 11);
}

TEST_CASE("simulate: dt must divide the interval") {
  json c = kDissipative;
  c["dt"] = 0.03;
  const Result r = run("simulate", c);
  CHECK(r.code == cli::kConfigError);
  CHECK(r.err.find("dt") != std::string::npos);
  CHECK(r.err.find("simulate") != std::string::npos);
}

TEST_CASE("simulate: singular chart point is a numerical failure") {
  json c = kTorus;
  c["initial_state"] = {0.0, 1.0, 0.0, 0.0, 0.0};
  CHECK(run("simulate", c).code == cli::kNumericalFailure);
  c["initial_state"] = {1.0, 1.0};
  CHECK(run("simulate", c).code == cli::kConfigError);
}

TEST_CASE("verify-contact: dissipative system passes with its closed form") {
  json c = kDissipative;
  c["T"] = 1.0;
  c["dt"] = 0.001;
  const Result r = run("verify-contact", c);
  REQUIRE(r.code == cli::kOk);
  const json report = json::parse(r.out);
  CHECK(report.at("pass") == true);
  CHECK(report.at("lambda_max_deviation").get<double>() <= 1e-12);
  CHECK(report.at("strict_contactomorphism") == false);
  CHECK(report.at("defect").at("errors").size() == 3);
  CHECK(report.at("min_defect_order").get<double>() >= 0.9);
}

TEST_CASE("verify-contact: T11 is strict and writes the defect CSV") {
  TempDir dir;
  json c = kTorus;
  c["defect_csv"] = dir.file("defect.csv");
  const Result r = run("verify-contact", c, true);
  REQUIRE(r.code == cli::kOk);
  const json report = json::parse(r.out);
  CHECK(report.at("strict_contactomorphism") == true);
  CHECK(report.at("lambda_final") == 1.0);
  const std::string csv = slurp(dir.file("defect.csv"));
  CHECK(csv.rfind("t,r_1,r_2,r_3,r_4,r_5,sup\n", 0) == 0);
}

TEST_CASE("verify-contact: wrong closed form fails with exit 1") {
  const json c = {{"system", {{"chart", "darboux"}, {"n", 1}, {"H0", "p1^2/2 + z"}, {"lambda_closed_form", "1"}}},
                  {"T", 0.4},
                  {"dt", 0.01}};
  CHECK(run("verify-contact", c).code == cli::kVerificationFailed);
  CHECK(run("verify-contact", c, true).code == cli::kOk);
}

TEST_CASE("verify-contact: grid must split into the coarsened levels") {
  json c = kDissipative;
  c["T"] = 0.5;
  const Result r = run("verify-contact", c);
  CHECK(r.code == cli::kConfigError);
  CHECK(r.err.find("divisible") != std::string::npos);
}

TEST_CASE("check-integrability: verdicts and errors") {
  json c = kTorus;
  c["integrals"] = {"1", "cos(theta1)/3", "cos(theta2)/3"};
  Result r = run("check-integrability", c);
  CHECK(r.code == cli::kOk);
  CHECK(json::parse(r.out).at("verdict") == "PASS");

  c["integrals"] = {"1", "cos(theta1)/3", "phi1"};
  r = run("check-integrability", c);
  CHECK(r.code == cli::kVerificationFailed);
  const json report = json::parse(r.out);
  CHECK(report.at("verdict") == "FAIL");
  CHECK(report.at("report").at("max_pair_bracket").get<double>() == doctest::Approx(1.0));

  json d = kDissipative;
  d["integrals"] = {"1", "q1"};
  CHECK(run("check-integrability", d).code == cli::kConfigError);
}

TEST_CASE("bracket: canonical pair at the initial state") {
  json c = {{"system", {{"chart", "darboux"}, {"n", 1}}}, {"initial_state", {0.3, 0.4, 0.5}},
            {"bracket", {{"f", "q1"}, {"g", "p1"}}}};
  const json report = json::parse(run("bracket", c).out);
  CHECK(report.at("value") == 1.0);
  CHECK(report.at("reeb_f") == 0.0);
}

TEST_CASE("monte-carlo: constant observable and worker independence") {
  json c = kDissipative;
  c["observable"] = "1";
  c["n_paths"] = 10;
  json stats = json::parse(run("monte-carlo", c).out).at("stats");
  CHECK(stats.at("mean") == 1.0);
  CHECK(stats.at("variance") == 0.0);

  c["observable"] = "z";
  c["n_paths"] = 50;
  const std::string one = run("monte-carlo", c).out;
  c["workers"] = 5;
  CHECK(run("monte-carlo", c).out == one);
}

TEST_CASE("list-systems") {
  const json report = json::parse(run("list-systems", json{{"system", "dissipative-2d"}}).out);
  CHECK(report.at("systems").size() == 2);
}

TEST_CASE("binary: exit codes and byte-identical output") {
  TempDir dir;
  const std::string cfg = dir.write("run.json", kDissipative.dump());
  CHECK(run_binary("simulate --config " + cfg + " --out " + dir.file("a.csv")) == 0);
  CHECK(run_binary("simulate --config " + cfg + " --out " + dir.file("b.csv")) == 0);
  CHECK(slurp(dir.file("a.csv")) == slurp(dir.file("b.csv")));
  CHECK(run_binary("simulate --config " + cfg + " --seed 43 --out " + dir.file("c.csv")) == 0);
  CHECK(slurp(dir.file("a.csv")) != slurp(dir.file("c.csv")));

  CHECK(run_binary("simulate --config " + cfg + " --dt 0.03 --out " + dir.file("d.csv")) == 2);
  CHECK(run_binary("simulate --config " + dir.file("missing.json")) == 2);
  CHECK(run_binary("simulate") == 2);
  CHECK(run_binary("simulate --config " + cfg + " --scheme rk4") == 2);
  const std::string bad = dir.write("bad.json", "{\"system\": \"dissipative-2d\", \"dT\": 1}");
  CHECK(run_binary("simulate --config " + bad) == 2);
  const std::string broken = dir.write("broken.json", "{\"system\": ");
  CHECK(run_binary("simulate --config " + broken) == 2);

  CHECK(run_binary("monte-carlo --config " + cfg + " --n-paths 40 --observable z --workers 1 --out " + dir.file("m1")) == 0);
  CHECK(run_binary("monte-carlo --config " + cfg + " --n-paths 40 --observable z --workers 6 --out " + dir.file("m6")) == 0);
  CHECK(slurp(dir.file("m1")) == slurp(dir.file("m6")));
}
