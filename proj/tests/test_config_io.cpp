#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "filtdg/config.hpp"
#include "filtdg/io.hpp"

using namespace filtdg;

namespace {

std::string error_of(const std::string& text) {
  try {
    resolve(ConfigFile::from_string(text, "case.ini"));
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

RunReport sample_report(int nx, double l1, double l2, double linf) {
  RunReport r;
  r.name = "vortex_n" + std::to_string(nx);
  r.benchmark = "isentropic_vortex";
  r.nx = r.ny = nx;
  r.has_reference = true;
  r.error.l1_rel = l1;
  r.error.l2_rel = l2;
  r.error.linf_rel = linf;
  return r;
}

}  // namespace

TEST(ConfigFile, SectionsCommentsAndDottedKeys) {
  const auto f = ConfigFile::from_string(
      "# comment\n[problem]\nbenchmark = sod   ; trailing\n\n[mesh]\nnx=200\ntime.t_final = 0.1\n");
  EXPECT_EQ(f.entries().at("problem.benchmark").value, "sod");
  EXPECT_EQ(f.entries().at("mesh.nx").value, "200");
  EXPECT_EQ(f.entries().at("time.t_final").value, "0.1");
  EXPECT_EQ(f.entries().at("mesh.nx").origin, "<string>:6");
}

TEST(ConfigFile, DiagnosticsNameFileLineAndKey) {
  EXPECT_EQ(error_of("[problem]\nbenchmark = sod\n[mesh]\nnx = ten\n"),
            "case.ini:4: mesh.nx: expected an integer, got 'ten'");
  EXPECT_EQ(error_of("[problem]\nbenchmark = sod\n[mesh]\ncolour = red\n"),
            "case.ini:4: unknown key 'mesh.colour'");
  EXPECT_EQ(error_of("[problem]\nbenchmark = sod\nbenchmark = vortex\n"),
            "case.ini:3: duplicate key 'problem.benchmark'");
  EXPECT_EQ(error_of("[mesh]\nnx = 3\n"), "problem.benchmark: required key is missing");
  EXPECT_EQ(error_of("[problem]\nbenchmark = tornado\n"),
            "case.ini:2: problem.benchmark: unknown benchmark 'tornado'");
  EXPECT_EQ(error_of("[problem\n"), "case.ini:1: malformed section header '[problem'");
  EXPECT_EQ(error_of("[problem]\nbenchmark = sod\n[mesh]\ndegree = 9\n"),
            "case.ini:4: mesh.degree: must lie in [1, 6]");
  EXPECT_EQ(error_of("[problem]\nbenchmark = sod\nvortex_velocity = 1\n"),
            "case.ini:3: problem.vortex_velocity: expected two components 'ux, uy'");
}

TEST(ConfigFile, MissingFileIsConfigError) {
  EXPECT_THROW(ConfigFile::from_file("/nonexistent/dir/run.ini"), ConfigError);
}

TEST(Resolve, BenchmarkDefaultsAndBetaExpansion) {
  const auto sod = resolve(ConfigFile::from_string("[problem]\nbenchmark = sod\n"));
  EXPECT_EQ(sod.nx, 100);
  EXPECT_EQ(sod.ny, 1);
  EXPECT_EQ(sod.time.mode, StepMode::fixed_dt);
  EXPECT_EQ(sod.time.dt_fixed, 5e-4);
  EXPECT_EQ(sod.filter.function, FilterFunction::f2);
  EXPECT_EQ(sod.filter.betas, (std::vector<double>{0.3, 0.3, 0.3, 0.3}));
  EXPECT_EQ(sod.resolved_ssp_order(), 2);

  const auto e = resolve(ConfigFile::from_string("[problem]\nbenchmark = explosion\n[filter]\nbeta = 1, 0.5, 2\n"));
  EXPECT_EQ(e.filter.betas, (std::vector<double>{1.0, 0.5, 0.5, 2.0}));
  const auto s = resolve(ConfigFile::from_string("[problem]\nbenchmark = solid_body_rotation\n[filter]\nbeta=0.25\n"));
  EXPECT_EQ(s.filter.betas, (std::vector<double>{0.25}));
  EXPECT_THROW(resolve(ConfigFile::from_string("[problem]\nbenchmark = sod\n[filter]\nbeta = 1, 2\n")),
               ConfigError);
}

TEST(Resolve, OverridesWinOverFileValues) {
  auto f = ConfigFile::from_string("[problem]\nbenchmark = isentropic_vortex\n[mesh]\nnx = 20\n");
  f.set_override("mesh.nx=80");
  f.set_override("filter.function = f2");
  const auto c = resolve(f);
  EXPECT_EQ(c.nx, 80);
  EXPECT_EQ(c.filter.function, FilterFunction::f2);
  EXPECT_THROW(f.set_override("mesh.nx"), ConfigError);
  f.set_override("mesh.bogus=1");
  try {
    resolve(f);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& err) {
    EXPECT_EQ(std::string(err.what()), "--set: unknown key 'mesh.bogus'");
  }
}

TEST(Resolve, ManifestRoundTrips) {
  for (auto b : {BenchmarkKind::solid_body_rotation, BenchmarkKind::isentropic_vortex, BenchmarkKind::sod,
                 BenchmarkKind::explosion, BenchmarkKind::riemann2d, BenchmarkKind::custom}) {
    auto f = ConfigFile::from_string("[problem]\nbenchmark = " + to_string(b) + "\n");
    f.set_override("output.dump_times=0, 0.05");
    f.set_override("time.courant=0.123456789012345");
    const auto c = resolve(f);
    const std::string text = to_config_text(c);
    const auto again = resolve(ConfigFile::from_string(text));
    EXPECT_EQ(to_config_text(again), text) << to_string(b);
    EXPECT_EQ(again.time.courant, 0.123456789012345);
  }
}

TEST(FieldCsv, RoundTripIsBitExact) {
  MeshOptions o;
  o.max_level = 1;
  auto base = std::make_shared<const QuadMesh>(QuadMesh::build_uniform(3, 2, {-1.0, 2.0, 0.0, 1.0}, o));
  auto mesh = std::make_shared<const QuadMesh>(base->refine({2}));
  NodalField<2> f(mesh, 2);
  f.fill([](const Point& x) { return std::array<double, 2>{std::exp(x[0]) / 3.0, 1e-17 * x[1]}; });
  std::stringstream ss;
  write_field_csv(ss, f, {"a", "b"});
  const std::string text = ss.str();
  std::size_t lines = 0;
  for (char ch : text) lines += ch == '\n';
  EXPECT_EQ(lines, 1 + f.n_cells() * 9);
  EXPECT_EQ(text.substr(0, text.find('\n')), "cell_id,level,x,y,node_i,a,b");
  NodalField<2> g(mesh, 2);
  read_field_csv(ss, g);
  for (std::size_t i = 0; i < f.data().size(); ++i) EXPECT_EQ(g.data()[i], f.data()[i]);
  EXPECT_THROW(write_field_csv(ss, f, {"a"}), std::invalid_argument);
  std::istringstream bad("cell_id,level,x,y,node_i,a,b\n0,0,0,0,0,1\n");
  EXPECT_THROW(read_field_csv(bad, g), IoError);
}

TEST(FieldVtk, HeaderAndCounts) {
  auto mesh = std::make_shared<const QuadMesh>(QuadMesh::build_uniform(2, 1, {}));
  NodalField<1> f(mesh, 3);
  std::ostringstream os;
  write_field_vtk(os, f, {"u"});
  const std::string s = os.str();
  EXPECT_EQ(s.rfind("# vtk DataFile Version 3.0\n", 0), 0u);
  EXPECT_NE(s.find("POINTS 32 double"), std::string::npos);
  EXPECT_NE(s.find("CELLS 18 90"), std::string::npos);
  EXPECT_NE(s.find("SCALARS u double 1"), std::string::npos);
}

TEST(Reports, JsonRoundTrip) {
  RunReport r = sample_report(40, 3.63e-3, 4.1e-3, 2.2e-2);
  r.status = "state_error";
  r.message = "euler: negative pressure";
  r.steps = 17;
  r.error.absolute = true;
  r.artifacts = {"out/a.csv", "out/report.json"};
  const auto back = report_from_json(to_json(r));
  EXPECT_EQ(to_json(back), to_json(r));
  const auto dir = std::filesystem::temp_directory_path() / "filtdg_test_config_io";
  std::filesystem::remove_all(dir);
  write_report(r, (dir / "nested" / "report.json").string());
  EXPECT_EQ(to_json(read_report((dir / "nested" / "report.json").string())), to_json(r));
  std::filesystem::remove_all(dir);
}

TEST(Reports, IoErrorsNameThePath) {
  const std::string missing = "/nonexistent/filtdg/report.json";
  try {
    read_report(missing);
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find(missing), std::string::npos);
  }
  try {
    write_report(RunReport{}, "/proc/filtdg/report.json");
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("/proc/filtdg"), std::string::npos);
  }
}

TEST(Tables, ErrorTableRatesAndDash) {
  const std::string t = emit_table({sample_report(20, 3.63e-3, 1e-2, 1e-1), sample_report(40, 8.02e-4, 2.5e-3, 5e-2)},
                                   TableStyle::errors);
  std::istringstream in(t);
  std::string header, rule, first, second;
  std::getline(in, header);
  std::getline(in, rule);
  std::getline(in, first);
  std::getline(in, second);
  EXPECT_NE(header.find("L1 rel. err"), std::string::npos);
  EXPECT_NE(first.find("3.63e-03"), std::string::npos);
  EXPECT_NE(first.find("\xE2\x80\x94"), std::string::npos);
  EXPECT_NE(second.find("2.18"), std::string::npos);
  EXPECT_NE(second.find("2.00"), std::string::npos);
  EXPECT_NE(second.find("1.00"), std::string::npos);
  EXPECT_THROW(emit_table({}, TableStyle::errors), std::invalid_argument);
}

TEST(Tables, ExtremaTable) {
  RunReport r;
  r.name = "sbr_filtered";
  r.nx = 120;
  r.error.max_value = 1.0009;
  r.error.min_value = -0.0001;
  const std::string t = emit_table({r}, TableStyle::extrema);
  EXPECT_NE(t.find("sbr_filtered"), std::string::npos);
  EXPECT_NE(t.find("1.000900"), std::string::npos);
  EXPECT_NE(t.find("-0.000100"), std::string::npos);
}

TEST(ReferenceCsv, RiemannProfileAndTable) {
  std::ostringstream os;
  write_riemann_profile_csv(os, sod_solver(), 0.2, -0.5, 0.5, 11);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "x,rho,u,p");
  std::getline(in, line);
  EXPECT_EQ(line, "-0.5,1,0,1");
  int rows = 1;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 11);
  EXPECT_THROW(write_riemann_profile_csv(os, sod_solver(), 0.2, 0.5, -0.5, 11), std::invalid_argument);
  std::ostringstream t;
  write_table_csv(t, {"a", "b"}, {{0.1, 2.0}});
  EXPECT_EQ(t.str(), "a,b\n0.1,2\n");
  EXPECT_THROW(write_table_csv(t, {"a"}, {{1.0, 2.0}}), std::invalid_argument);
}
