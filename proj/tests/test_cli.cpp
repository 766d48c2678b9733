#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "greenroute/report.hpp"

namespace fs = std::filesystem;
using greenroute::json;

namespace {

struct Run {
  int status;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(GREENROUTE_CLI) + " " + args;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  const int raw = pclose(p);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

fs::path write_temp(const std::string& name, const std::string& text) {
  const fs::path dir = fs::temp_directory_path() / "greenroute_cli_test";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p) << text;
  return p;
}

const char* kDiamond = R"({
  "nodes": ["s", "a", "b", "t"],
  "edges": [{"id": 0, "u": "s", "v": "a"}, {"id": 1, "u": "a", "v": "t"},
            {"id": 2, "u": "s", "v": "b"}, {"id": 3, "u": "b", "v": "t"}],
  "demands": [{"src": "s", "dst": "t", "amount": 2}, {"src": "s", "dst": "t", "amount": 2}],
  "rates": [{"speed": 2, "cost": 1}, {"speed": 4, "cost": 8}]
})";

std::string strip_runtimes(const std::string& csv) {
  std::istringstream in(csv);
  std::ostringstream out;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (row++ >= 2) {
      for (std::size_t k = 0; k < greenroute::kBenchRuntimeColumns; ++k) line.erase(line.rfind(','));
    }
    out << line << '\n';
  }
  return out.str();
}

}  // namespace

TEST_CASE("solve on the diamond splits the two demands") {
  const auto file = write_temp("diamond.json", kDiamond);
  const Run r = run("solve " + file.string() + " --trials 50 --seed 3 2>&1");
  REQUIRE(r.status == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["total_cost"].get<double>() == doctest::Approx(4.0));
  CHECK(doc["paths"].size() == 2);
}

TEST_CASE("oracle and relax subcommands") {
  const auto file = write_temp("diamond.json", kDiamond);
  Run r = run("oracle " + file.string());
  REQUIRE(r.status == 0);
  CHECK(json::parse(r.out)["optimal_cost"].get<double>() == 4.0);

  r = run("relax " + file.string() + " --clamp-beta");
  REQUIRE(r.status == 0);
  CHECK(json::parse(r.out)["converged"] == true);
}

TEST_CASE("fit on a single level returns a flat law") {
  const auto file = write_temp("flat.json", R"({"rates": [{"speed": 2, "cost": 2}]})");
  const Run r = run("fit " + file.string());
  REQUIRE(r.status == 0);
  const json doc = json::parse(r.out);
  CHECK(std::abs(doc["beta"].get<double>()) <= 1e-12);
  CHECK(doc["mu"].get<double>() == doctest::Approx(2.0));
}

TEST_CASE("gen writes a loadable instance and honours --out") {
  const fs::path out = fs::temp_directory_path() / "greenroute_cli_test" / "gen.json";
  Run r = run("gen --nodes 5 --demands 2 --seed 4 --out " + out.string());
  REQUIRE(r.status == 0);
  r = run("solve " + out.string() + " --clamp-beta --trials 10");
  CHECK(r.status == 0);

  const auto graph = write_temp("graph.json", R"({
    "nodes": ["a", "b", "c", "d"],
    "edges": [{"id": 0, "u": "a", "v": "b"}, {"id": 1, "u": "b", "v": "c"}, {"id": 2, "u": "c", "v": "d"}],
    "demands": [{"src": "a", "dst": "c", "amount": 1}, {"src": "b", "dst": "d", "amount": 1}]
  })");
  r = run("gen --edp-gadget " + graph.string() + " --rho 3");
  REQUIRE(r.status == 0);
  const json g = json::parse(r.out);
  CHECK(g["rates"].size() == 2);
  CHECK(g["rates"][1]["speed"] == 2.0);
}

TEST_CASE("bench output repeats under the same seed") {
  const Run a = run("bench --count 50 --seed 7 --trials 50");
  const Run b = run("bench --count 50 --seed 7 --trials 50");
  REQUIRE(a.status == 0);
  REQUIRE(b.status == 0);
  CHECK(a.out.rfind(std::string(greenroute::kBenchSchema), 0) == 0);
  CHECK(strip_runtimes(a.out) == strip_runtimes(b.out));
}

TEST_CASE("errors print a JSON object on stderr and exit 1") {
  const auto bad = write_temp("bad.json", R"({"nodes": ["a", "b"], "edges": [{"id": 0, "u": "a", "v": "b"}],
    "demands": [{"src": "a", "dst": "a", "amount": 1}], "rates": [{"speed": 2, "cost": 1}]})");
  Run r = run("solve " + bad.string() + " 2>&1 1>/dev/null");
  CHECK(r.status == 1);
  json err = json::parse(r.out);
  CHECK(err["error"]["code"] == "invalid_instance");
  CHECK(err["error"]["message"].get<std::string>().find("degenerate demand") != std::string::npos);

  const auto big = write_temp("overflow.json", R"({"nodes": ["a", "b"], "edges": [{"id": 0, "u": "a", "v": "b"}],
    "demands": [{"src": "a", "dst": "b", "amount": 5}], "rates": [{"speed": 2, "cost": 1}, {"speed": 4, "cost": 3}]})");
  r = run("solve " + big.string() + " --clamp-beta 2>&1 1>/dev/null");
  CHECK(r.status == 1);
  err = json::parse(r.out);
  CHECK(err["error"]["code"] == "no_feasible_rounding");

  r = run("fit /nonexistent/file.json 2>&1 1>/dev/null");
  CHECK(r.status == 1);
}
