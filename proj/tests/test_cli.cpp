#include "doctest.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "relpoly/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result
{
  int status;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args)
{
  std::ostringstream out, err;
  int s = relpoly::cli::run(args, out, err);
  return { s, out.str(), err.str() };
}

fs::path scratch(const std::string& name)
{
  fs::path p = fs::temp_directory_path() / ("relpoly_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p)
{
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const fs::path& p, const std::string& text)
{
  std::ofstream(p, std::ios::binary) << text;
}

const std::string data = RELPOLY_DATA_DIR;

} // namespace

TEST_CASE("convert and invert")
{
  auto dir = scratch("convert");
  auto r = run({ "convert", data + "/toy_monomial.txt", "-o", (dir / "toy.beta").string() });
  REQUIRE(r.status == 0);
  CHECK(r.out.find("max round-trip error") != std::string::npos);
  std::string beta = slurp(dir / "toy.beta");
  CHECK(beta.find("3 0.2\n") != std::string::npos);
  CHECK(beta.find("7 1\n") != std::string::npos);

  auto back = run({ "convert", "--invert", (dir / "toy.beta").string() });
  REQUIRE(back.status == 0);
  std::istringstream coeffs(back.out);
  std::vector<double> mono;
  for (double v; coeffs >> v;)
    mono.push_back(v);
  std::vector<double> want{ 0, 0, 1, 2, 0, -3, 0, 1 };
  REQUIRE(mono.size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i)
    CHECK(mono[i] == doctest::Approx(want[i]).scale(1.0).epsilon(1e-12));

  auto up = run({ "convert", data + "/toy_monomial.txt", "--degree", "9" });
  REQUIRE(up.status == 0);
  CHECK(up.out.find("degree 9") != std::string::npos);
  CHECK(run({ "convert", data + "/toy_monomial.txt", "--degree", "3" }).status != 0);
}

TEST_CASE("convert edge cases")
{
  auto dir = scratch("convert_edge");
  spit(dir / "one.txt", "1\n");
  auto r = run({ "convert", (dir / "one.txt").string() });
  REQUIRE(r.status == 0);
  CHECK(r.out == "degree 0\n0 1\n");
  spit(dir / "bad.txt", "# header\n1\nfoo\n");
  auto bad = run({ "convert", (dir / "bad.txt").string() });
  CHECK(bad.status != 0);
  CHECK(bad.err.find("bad.txt:3:") != std::string::npos);
}

TEST_CASE("norm")
{
  auto dir = scratch("norm");
  spit(dir / "a.beta", "0 0\n1 0.5\n2 1\n");
  spit(dir / "b.beta", "0 0.1\n1 0.6\n2 1.1\n");
  spit(dir / "c.beta", "0 0\n1 1\n");
  CHECK(run({ "norm", (dir / "a.beta").string(), (dir / "a.beta").string() }).out == "0.000000\n");
  CHECK(run({ "norm", (dir / "a.beta").string(), (dir / "b.beta").string() }).out == "0.100000\n");
  auto bad = run({ "norm", (dir / "a.beta").string(), (dir / "c.beta").string() });
  CHECK(bad.status != 0);
  CHECK(bad.err.find("degree") != std::string::npos);
}

TEST_CASE("bounds")
{
  auto dir = scratch("bounds");
  spit(dir / "p.beta", "degree 7\nkmin 2 1/21\nkmax 5 19/21\n3 1/5\n");
  auto r = run({ "bounds", (dir / "p.beta").string(), "--grid", "11" });
  REQUIRE(r.status == 0);
  CHECK(r.out.rfind("x,lower,estimate,upper\n", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 12);
}

TEST_CASE("oracle")
{
  auto r = run({ "oracle", "--graph", data + "/toy.edges", "--directed", "--target", "5", "--all", "--exact" });
  REQUIRE(r.status == 0);
  CHECK(r.out.find("\n3 1/5 0\n") != std::string::npos);
  CHECK(r.out.find("\n4 18/35 0\n") != std::string::npos);

  auto a = run({ "oracle", "--graph", data + "/toy.edges", "--directed", "--target", "5", "--k", "3", "--samples", "2000", "--seed", "4" });
  auto b = run({ "oracle", "--graph", data + "/toy.edges", "--directed", "--target", "5", "--k", "3", "--samples", "2000", "--seed", "4" });
  REQUIRE(a.status == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("seed 4") != std::string::npos);

  CHECK(run({ "oracle", "--graph", data + "/toy.edges", "--directed", "--k", "3" }).status != 0);
  CHECK(run({ "oracle", "--graph", data + "/toy.edges", "--target", "5" }).status != 0);
  CHECK(run({ "oracle", "--graph", data + "/karate.edges", "--target", "5", "--all", "--exact" }).status != 0);
}

TEST_CASE("design output, determinism and replay")
{
  auto dir = scratch("design");
  std::vector<std::string> args{ "design", "--graph", data + "/karate.edges", "--rule", "largest",
                                 "--threshold", "10", "--kmin", "9", "--kmax", "27",
                                 "--samples", "3000", "--seed", "5", "--max-measurements", "3",
                                 "--grid", "21" };
  auto first = args;
  first.insert(first.end(), { "--out", (dir / "a").string() });
  auto second = args;
  second.insert(second.end(), { "--out", (dir / "b").string() });
  REQUIRE(run(first).status == 0);
  REQUIRE(run(second).status == 0);
  for (const char* f : { "trace.txt", "trace.json", "estimate.beta", "curves/step_000.csv",
                         "curves/step_003.csv" })
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
  CHECK(slurp(dir / "a" / "trace.txt").find("# stop_reason budget_exhausted") != std::string::npos);
  std::string manifest = slurp(dir / "a" / "manifest.json");
  CHECK(manifest.find("\"sha256\"") != std::string::npos);
  CHECK(manifest.find("\"stop_reason\": \"budget_exhausted\"") != std::string::npos);

  REQUIRE(run({ "replay", (dir / "a" / "manifest.json").string(), "--out", (dir / "c").string() }).status == 0);
  CHECK(slurp(dir / "a" / "trace.txt") == slurp(dir / "c" / "trace.txt"));

  // replay refuses a changed input
  fs::copy_file(data + "/karate.edges", dir / "k.edges");
  auto local = args;
  local[2] = (dir / "k.edges").string();
  local.insert(local.end(), { "--out", (dir / "d").string() });
  REQUIRE(run(local).status == 0);
  std::ofstream(dir / "k.edges", std::ios::app) << "# edited\n";
  auto replay = run({ "replay", (dir / "d" / "manifest.json").string(), "--out", (dir / "e").string() });
  CHECK(replay.status != 0);
  CHECK(replay.err.find("changed") != std::string::npos);
}

TEST_CASE("design with exact oracle picks up the truth")
{
  auto dir = scratch("design_exact");
  auto r = run({ "design", "--graph", data + "/toy.edges", "--directed", "--target", "5", "--exact",
                 "--mode", "oracle-informed", "--out", dir.string() });
  REQUIRE(r.status == 0);
  std::string trace = slurp(dir / "trace.txt");
  CHECK(trace.find("\n1 3 0.2 ") != std::string::npos);
  CHECK(trace.find("# stop_reason all_measured") != std::string::npos);
}

TEST_CASE("config file")
{
  auto dir = scratch("config");
  spit(dir / "cfg.ini", "[oracle]\ngraph = " + data + "/toy.edges\ndirected = true\ntarget = 5\nk = 3\nexact = true\n");
  auto r = run({ "--config", (dir / "cfg.ini").string(), "oracle" });
  REQUIRE(r.status == 0);
  CHECK(r.out.find("\n3 1/5 0\n") != std::string::npos);
}

TEST_CASE("usage errors")
{
  CHECK(run({}).status != 0);
  CHECK(run({ "nonsense" }).status != 0);
  CHECK(run({ "design", "--graph", data + "/toy.edges" }).status != 0);
  CHECK(run({ "--help" }).status == 0);
}
