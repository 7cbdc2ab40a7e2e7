#include "cli.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using framesurf::cli::run_cli;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("framesurf_cli_" + name);
  fs::remove_all(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), {}};
}

std::vector<std::string> lines(const fs::path& p) {
  std::vector<std::string> v;
  std::ifstream is(p);
  for (std::string l; std::getline(is, l);) v.push_back(l);
  return v;
}

}  // namespace

TEST(Cli, ParseIntList) {
  using framesurf::cli::parse_int_list;
  EXPECT_EQ(parse_int_list("2,3,5"), (std::vector<int>{2, 3, 5}));
  EXPECT_EQ(parse_int_list("2..4"), (std::vector<int>{2, 3, 4}));
  EXPECT_THROW(parse_int_list("x"), std::exception);
}

TEST(Cli, MeshGenWritesTableAndIsReproducible) {
  const fs::path a = fresh_dir("mesh_a"), b = fresh_dir("mesh_b");
  ASSERT_EQ(call({"mesh-gen", "--refine", "1", "--q", "3", "--out", a.string()}).code, 0);
  ASSERT_EQ(call({"mesh-gen", "--refine", "1", "--q", "3", "--out", b.string()}).code, 0);
  const auto rows = lines(a / "stats.csv");
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0], "p,node_count,l2,linf");
  EXPECT_EQ(slurp(a / "mesh.txt"), slurp(b / "mesh.txt"));
  EXPECT_EQ(slurp(a / "stats.csv"), slurp(b / "stats.csv"));
  EXPECT_TRUE(fs::exists(a / "config.echo"));
}

TEST(Cli, EllipsoidMeshHeader) {
  const fs::path d = fresh_dir("ellipsoid");
  ASSERT_EQ(call({"mesh-gen", "--surface", "ellipsoid", "--refine", "0", "--out", d.string()}).code, 0);
  EXPECT_NE(slurp(d / "mesh.txt").find("ELLIPSOID"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(call({"static", "--op", "div", "--test", "1", "--p-list", "", "--out",
                  fresh_dir("empty").string()}).code, 2);
  EXPECT_EQ(call({"run", "--model", "swe", "--case", "no_such_case", "--out",
                  fresh_dir("case").string()}).code, 2);
  EXPECT_EQ(call({"run", "--model", "advection", "--p", "0", "--out", fresh_dir("p").string()}).code, 2);
  EXPECT_EQ(call({"run", "--set", "bogus=1", "--out", fresh_dir("set").string()}).code, 2);
  EXPECT_EQ(call({"frobnicate"}).code, 2);
  EXPECT_EQ(call({"mesh-gen", "--mesh-file", "/nonexistent/mesh.txt", "--out",
                  fresh_dir("missing").string()}).code, 2);
}

TEST(Cli, BadThreadCount) {
  ::setenv("FRAMESURF_THREADS", "abc", 1);
  const int code = call({"mesh-gen", "--refine", "0", "--out", fresh_dir("threads").string()}).code;
  ::unsetenv("FRAMESURF_THREADS");
  EXPECT_EQ(code, 2);
}

TEST(Cli, StaticWritesStats) {
  const fs::path d = fresh_dir("static");
  ASSERT_EQ(call({"static", "--op", "div", "--test", "2", "--frames", "both", "--p-list", "2,3",
                  "--refine", "1", "--out", d.string()}).code, 0);
  const auto rows = lines(d / "stats.csv");
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0], "op,test,frames,with_G,p,l2_error,linf_error,g_term1_l2,g_term2_l2");
}

TEST(Cli, RunCompareWritesSeriesAndDelta) {
  const fs::path d = fresh_dir("compare");
  const Outcome o = call({"run", "--model", "advection", "--compare", "--p", "2..3", "--refine", "1",
                          "--dt", "0.005", "--T", "0.02", "--stride", "2", "--out", d.string()});
  ASSERT_EQ(o.code, 0) << o.err;
  for (const char* f : {"series_LOCAL_p2.csv", "series_LOCSPHnoG_p3.csv", "series_LOCSPHwithG_p3.csv",
                        "delta_p2.csv", "delta_p3.csv", "config.echo"}) {
    EXPECT_TRUE(fs::exists(d / f)) << f;
  }
  const auto stats = lines(d / "stats.csv");
  ASSERT_EQ(stats.size(), 7u);
  EXPECT_EQ(stats[0], "p,variant,final_t,l2_error,max_mass_err,max_energy_err,aborted");
  EXPECT_EQ(lines(d / "delta_p2.csv")[0],
            "t,d_l2_local,d_l2_nog,d_mass_local,d_mass_nog,d_energy_local,d_energy_nog");
  // t = 0, every second step, and the end
  EXPECT_EQ(lines(d / "series_LOCAL_p2.csv").size(), 4u);
}

TEST(Cli, ConfigFileWithOverrides) {
  const fs::path d = fresh_dir("config");
  fs::create_directories(d);
  {
    std::ofstream os(d / "in.cfg");
    os << "# advection smoke run\nmodel = advection\nrefine = 1\np = 2\ndt = 0.01\nT_final = 0.02\n";
  }
  ASSERT_EQ(call({"run", "--config", (d / "in.cfg").string(), "--set", "p=3", "--out",
                  (d / "out").string()}).code, 0);
  const std::string echo = slurp(d / "out" / "config.echo");
  EXPECT_NE(echo.find("p=3"), std::string::npos);
  EXPECT_NE(echo.find("dt=0.01"), std::string::npos);
}

TEST(Cli, AbortExitCodeAndRow) {
  const fs::path d = fresh_dir("abort");
  EXPECT_EQ(call({"run", "--model", "swe", "--p", "2", "--refine", "1", "--dt", "0.05", "--T", "20",
                  "--out", d.string()}).code, 3);
  const auto rows = lines(d / "series_LOCAL.csv");
  ASSERT_FALSE(rows.empty());
  EXPECT_EQ(rows.back().rfind("ABORT,", 0), 0u);
  EXPECT_EQ(lines(d / "stats.csv").back().back(), '1');
}
