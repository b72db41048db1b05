#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "filtdg/filtdg.hpp"

using namespace filtdg;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("filtdg_test_runner_" + name);
  fs::remove_all(p);
  return p;
}

RunConfig small_custom(const fs::path& dir) {
  auto f = ConfigFile::from_string("[problem]\nbenchmark = custom\n");
  f.set_override("mesh.nx=8");
  f.set_override("mesh.ny=8");
  f.set_override("time.t_final=0.05");
  f.set_override("output.directory=" + dir.string());
  f.set_override("output.dump_times=0");
  return resolve(f);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Command {
  int status;
  std::string output;
};

Command shell(const std::string& cmd) {
  Command r{-1, ""};
  FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
  if (!pipe) return r;
  char buf[512];
  while (fgets(buf, sizeof buf, pipe)) r.output += buf;
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

}  // namespace

TEST(Simulate, InMemoryRunReachesFinalTime) {
  auto cfg = small_custom(scratch("memory"));
  cfg.scheme = SchemeKind::high_order;
  cfg.degree = 2;
  const auto res = simulate(cfg, make_advection_problem(cfg), false);
  EXPECT_EQ(res.report.status, "ok");
  EXPECT_DOUBLE_EQ(res.report.t_final, 0.05);
  EXPECT_EQ(res.report.steps, res.history.size());
  EXPECT_TRUE(res.report.has_reference);
  EXPECT_LT(res.report.error.l1_rel, 0.02);
  EXPECT_LT(res.report.max_abs_mass_drift, 1e-12);  // periodic: the DG operator conserves
  EXPECT_FALSE(fs::exists(cfg.output.directory));
  for (std::size_t i = 1; i < res.history.size(); ++i) EXPECT_GT(res.history[i].t, res.history[i - 1].t);
}

TEST(Simulate, WritesManifestSeriesFieldsAndReport) {
  const auto dir = scratch("outputs");
  auto cfg = small_custom(dir);
  cfg.output.vtk = true;
  const auto rep = run(cfg);
  for (const char* f : {"manifest.ini", "timeseries.csv", "field_t0.csv", "field_t0.vtk", "field_final.csv",
                        "field_final.vtk", "report.json"})
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  // The manifest reproduces the configuration.
  const auto again = resolve(ConfigFile::from_file((dir / "manifest.ini").string()));
  EXPECT_EQ(to_config_text(again), to_config_text(cfg));
  const std::string series = slurp(dir / "timeseries.csv");
  EXPECT_EQ(series.substr(0, series.find('\n')), timeseries_header());
  std::size_t rows = 0;
  for (char ch : series) rows += ch == '\n';
  EXPECT_EQ(rows, rep.steps + 1);
  const auto back = read_report((dir / "report.json").string());
  EXPECT_EQ(back.steps, rep.steps);
  EXPECT_EQ(back.error.l1_rel, rep.error.l1_rel);
  // The final dump loads back into a field of the same layout.
  auto mesh = std::make_shared<const QuadMesh>(QuadMesh::build_uniform(8, 8, {}, [] {
    MeshOptions o;
    o.periodic_x = o.periodic_y = true;
    return o;
  }()));
  NodalField<1> f(mesh, 1);
  std::ifstream in(dir / "field_final.csv");
  EXPECT_NO_THROW(read_field_csv(in, f));
  fs::remove_all(dir);
}

TEST(Simulate, StateErrorWritesFailedReport) {
  const auto dir = scratch("state_error");
  auto f = ConfigFile::from_string("[problem]\nbenchmark = sod\n");
  f.set_override("mesh.nx=20");
  f.set_override("time.dt=0.2");
  f.set_override("filter.scheme=high_order");
  f.set_override("output.directory=" + dir.string());
  const auto cfg = resolve(f);
  EXPECT_THROW(run(cfg), StateError);
  const auto rep = read_report((dir / "report.json").string());
  EXPECT_EQ(rep.status, "state_error");
  EXPECT_NE(rep.message.find("cell"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Simulate, AdaptiveRunKeepsBalancedMesh) {
  auto f = ConfigFile::from_string("[problem]\nbenchmark = explosion\n");
  f.set_override("mesh.nx=8");
  f.set_override("mesh.ny=8");
  f.set_override("time.t_final=0.005");
  f.set_override("amr.enabled=true");
  f.set_override("amr.interval=1");
  f.set_override("amr.max_level=2");
  f.set_override("filter.scheme=low_order");
  const auto cfg = resolve(f);
  const auto res = simulate(cfg, make_euler_problem(cfg), false);
  EXPECT_GT(res.field.n_cells(), 64u);
  EXPECT_TRUE(res.field.mesh().is_balanced());
  // No wave has reached the transmissive walls yet; the transfer conserves.
  EXPECT_LT(res.report.max_abs_mass_drift, 1e-12);
}

TEST(Convergence, WritesTableAndCsv) {
  const auto dir = scratch("convergence");
  auto cfg = small_custom(dir);
  cfg.nx = cfg.ny = 4;
  cfg.scheme = SchemeKind::high_order;
  cfg.output.dump_times.clear();
  const auto reps = run_convergence(cfg, 3);
  ASSERT_EQ(reps.size(), 3u);
  EXPECT_EQ(reps[2].nx, 16);
  EXPECT_LT(reps[2].error.l1_rel, reps[0].error.l1_rel);
  EXPECT_TRUE(fs::exists(dir / "level_2" / "report.json"));
  EXPECT_NE(slurp(dir / "table.txt").find("L1 rate"), std::string::npos);
  EXPECT_EQ(slurp(dir / "convergence.csv").substr(0, 2), "nx");
  EXPECT_THROW(run_convergence(cfg, 1), ConfigError);
  fs::remove_all(dir);
}

class BenchCli : public ::testing::Test {
 protected:
  void SetUp() override {
    const char* b = std::getenv("FILTDG_BENCH");
    const char* c = std::getenv("FILTDG_CONFIGS");
    if (!b || !c) GTEST_SKIP() << "FILTDG_BENCH / FILTDG_CONFIGS not set";
    bench_ = b;
    configs_ = c;
    dir_ = scratch("cli");
  }
  void TearDown() override {
    if (!dir_.empty()) fs::remove_all(dir_);
  }
  std::string bench_;
  fs::path configs_;
  fs::path dir_;
};

TEST_F(BenchCli, RunAndTable) {
  const auto r = shell(bench_ + " run " + (configs_ / "custom.ini").string() +
                       " --set mesh.nx=8 --set mesh.ny=8 --set time.t_final=0.05 --set output.directory=" +
                       dir_.string());
  EXPECT_EQ(r.status, 0) << r.output;
  EXPECT_NE(r.output.find("rel. errors"), std::string::npos);
  const auto t = shell(bench_ + " table --style extrema " + (dir_ / "report.json").string());
  EXPECT_EQ(t.status, 0) << t.output;
  EXPECT_NE(t.output.find("custom"), std::string::npos);
}

TEST_F(BenchCli, ExitCodes) {
  const auto bad_key = shell(bench_ + " run " + (configs_ / "custom.ini").string() + " --set mesh.colour=red");
  EXPECT_EQ(bad_key.status, 1);
  EXPECT_NE(bad_key.output.find("unknown key 'mesh.colour'"), std::string::npos);
  EXPECT_EQ(shell(bench_ + " run /nonexistent.ini").status, 1);
  EXPECT_EQ(shell(bench_ + " frobnicate").status, 1);
  EXPECT_EQ(shell(bench_ + " table /nonexistent/report.json").status, 1);
  const auto crash = shell(bench_ + " run " + (configs_ / "sod.ini").string() +
                           " --set mesh.nx=20 --set time.dt=0.2 --set filter.scheme=high_order"
                           " --set output.directory=" + dir_.string());
  EXPECT_EQ(crash.status, 2) << crash.output;
  EXPECT_NE(crash.output.find("solver failure"), std::string::npos);
}

TEST_F(BenchCli, ShippedConfigsResolve) {
  for (const char* name : {"solid_body.ini", "vortex.ini", "sod.ini", "explosion.ini", "riemann2d.ini",
                           "custom.ini"})
    EXPECT_NO_THROW(resolve(ConfigFile::from_file((configs_ / name).string()))) << name;
}
