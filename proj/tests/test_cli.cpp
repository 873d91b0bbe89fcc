#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "warpmin/cantor.hpp"
#include "warpmin/json_io.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path dir = [] {
  auto d = fs::temp_directory_path() / "warpmin_cli_test";
  fs::create_directories(d);
  return d;
}();

int run(const std::string& args, const std::string& out = "") {
  std::string cmd = std::string(WARPMIN_CLI) + " " + args;
  if (!out.empty()) cmd += " > " + (dir / out).string();
  cmd += " 2> " + (dir / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json load(const std::string& name) { return nlohmann::json::parse(slurp(dir / name)); }

std::string write(const std::string& name, const std::string& text) {
  std::ofstream(dir / name) << text;
  return (dir / name).string();
}

}  // namespace

TEST_CASE("analyze 2 + cos") {
  const auto prof = write("cos.json",
                          R"({"period": 1, "analytic": true, "expr": {"sum": [{"const": 2}, {"cos": {"amp": 1, "freq": 1}}]}})");
  REQUIRE(run("analyze --profile " + prof, "cos_report.json") == 0);
  const auto r = load("cos_report.json");
  CHECK(r["branch"] == "WeakCore");
  REQUIRE(r["slices"].size() == 2);
  CHECK(r["slices"][0]["index"] == 225);
  CHECK(r["slices"][1]["index"] == 0);
  CHECK(r["analytic_no_accumulating"]["pass"] == true);
  CHECK(r["weak_core_bound"]["pass"] == true);
  CHECK_FALSE(r.contains("generated_at"));

  REQUIRE(run("analyze --profile " + prof, "cos_report2.json") == 0);
  CHECK(slurp(dir / "cos_report.json") == slurp(dir / "cos_report2.json"));
  REQUIRE(run("analyze --stamp --profile " + prof, "cos_stamped.json") == 0);
  CHECK(load("cos_stamped.json").contains("generated_at"));
}

TEST_CASE("analyze formats") {
  const auto prof = write("cos.json",
                          R"({"period": 1, "analytic": true, "expr": {"sum": [{"const": 2}, {"cos": {"amp": 1, "freq": 1}}]}})");
  REQUIRE(run("analyze --format csv --profile " + prof, "cos.csv") == 0);
  const auto csv = slurp(dir / "cos.csv");
  CHECK(csv.rfind("t,kind,area", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  const auto dat = (dir / "cos.dat").string();
  REQUIRE(run("analyze --format gnuplot --profile " + prof + " -o " + dat) == 0);
  CHECK(fs::exists(dat + ".json"));
  std::ifstream in(dat);
  std::string header, line;
  std::getline(in, header);
  std::getline(in, line);
  CHECK(line == "0 3");
  CHECK(run("analyze --format svg --profile " + prof) == 1);
}

TEST_CASE("generate-cantor and analyze") {
  const auto out = (dir / "c3.json").string();
  REQUIRE(run("generate-cantor --depth 3 -o " + out) == 0);
  const auto cert = nlohmann::json::parse(slurp(out + ".cert.json"));
  for (const auto& c : cert["certificates"]) CHECK(c["pass"] == true);
  REQUIRE(run("analyze --profile " + out, "c3_report.json") == 0);
  const auto r = load("c3_report.json");
  CHECK(r["branch"] == "PathologicalCantor");
  REQUIRE(r["certificates"].size() == 2);
  CHECK(r["certificates"][0]["pass"] == true);
}

TEST_CASE("generate-cantor round trip") {
  const auto out = (dir / "c5.json").string();
  REQUIRE(run("generate-cantor --depth 5 --schedule pow6 -o " + out) == 0);
  const auto loaded = warpmin::load_profile(out);
  const auto direct = warpmin::build_cantor_profile({5, warpmin::Schedule::pow6()});
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double t = U(rng);
    REQUIRE(loaded.eval(t) == direct.eval(t));
  }
}

TEST_CASE("depth ceiling") {
  CHECK(run("generate-cantor --depth 25 -o " + (dir / "c25.json").string()) == 1);
  CHECK(slurp(dir / "stderr.txt").find("depth") != std::string::npos);
}

TEST_CASE("widths") {
  REQUIRE(run("widths --synthetic --A 1 --B 1 --n 2 --pmax 1000", "w.json") == 0);
  CHECK(load("w.json")["growth"]["pass"] == true);
  REQUIRE(run("widths --counting --areas 1 --C 10 --c-prime 5 --n 2", "count.json") == 0);
  CHECK(load("count.json")["counting"]["p"] == 9);
  const auto empty = write("empty.csv", "");
  CHECK(run("widths --csv " + empty + " --A 1 --B 1") == 1);
  const auto table = write("t.csv", "p,omega\n1,2\n2,3\n3,3.5\n");
  REQUIRE(run("widths --csv " + table + " --A 1 --B 1", "t.json") == 0);
  CHECK(load("t.json")["table"]["provenance"] == "user-supplied");
}

TEST_CASE("report on the flat product") {
  const auto prof = write("one.json", R"({"period": 1, "analytic": true, "expr": {"const": 1}})");
  REQUIRE(run("report --profile " + prof + " --omega 5", "one_report.json") == 0);
  const auto r = load("one_report.json");
  CHECK(r["weakly_frankel"] == true);
  CHECK(r["cycle_space"]["full"][0]["rp_dimension"] == 4);
  CHECK(r["cohomology_dims"]["5"] == 0);
}

TEST_CASE("input errors") {
  const auto bad = write("bad.json", "{\"period\": 1,\n");
  CHECK(run("analyze --profile " + bad, "bad_report.json") == 1);
  CHECK(slurp(dir / "stderr.txt").find("line") != std::string::npos);
  CHECK(run("analyze --profile " + (dir / "missing.json").string(), "m.json") == 1);
  CHECK(run("frobnicate") == 1);
}
