// Command-line benchmark runner.
//
//   filtdg_bench run <config> [--set section.key=value ...]
//   filtdg_bench convergence <config> --levels n [--set ...]
//   filtdg_bench table [--style errors|extrema] <report.json ...>
//
// Exit codes: 0 success, 1 configuration error, 2 solver failure.

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "filtdg/filtdg.hpp"

namespace {

filtdg::RunConfig load(const std::string& path, const std::vector<std::string>& overrides) {
  auto file = filtdg::ConfigFile::from_file(path);
  for (const auto& s : overrides) file.set_override(s);
  return filtdg::resolve(file);
}

void print_summary(const filtdg::RunReport& r) {
  std::cout << r.name << ": " << r.steps << " steps, " << r.n_cells << " cells, t = " << r.t_final
            << ", cpu " << r.cpu_seconds << " s\n";
  std::cout << "  range over run [" << r.global_min << ", " << r.global_max << "], final ["
            << r.error.min_value << ", " << r.error.max_value << "]\n";
  if (r.has_reference)
    std::cout << "  rel. errors L1 " << r.error.l1_rel << "  L2 " << r.error.l2_rel << "  Linf "
              << r.error.linf_rel << (r.error.absolute ? " (absolute)" : "") << "\n";
  std::cout << "  mass drift " << r.error.mass_drift_rel << ", filtered fraction "
            << r.filter_fraction << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Filtered DG monotonization benchmark runner"};
  app.require_subcommand(1);

  std::string config;
  std::vector<std::string> overrides;
  int levels = 3;
  std::vector<std::string> reports;
  std::string style = "errors";

  auto* run = app.add_subcommand("run", "Run one configured benchmark");
  run->add_option("config", config, "Configuration file")->required();
  run->add_option("--set", overrides, "Override a key: section.key=value");

  auto* conv = app.add_subcommand("convergence", "Mesh-doubling convergence study");
  conv->add_option("config", config, "Configuration file")->required();
  conv->add_option("--levels", levels, "Number of meshes (>= 2)")->required();
  conv->add_option("--set", overrides, "Override a key: section.key=value");

  auto* table = app.add_subcommand("table", "Tabulate run reports");
  table->add_option("reports", reports, "report.json files")->required();
  table->add_option("--style", style, "errors | extrema")->check(CLI::IsMember({"errors", "extrema"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*run) {
      const auto report = filtdg::run(load(config, overrides));
      print_summary(report);
    } else if (*conv) {
      const auto rs = filtdg::run_convergence(load(config, overrides), levels);
      std::cout << filtdg::emit_table(rs, filtdg::TableStyle::errors);
    } else if (*table) {
      std::vector<filtdg::RunReport> rs;
      for (const auto& p : reports) rs.push_back(filtdg::read_report(p));
      std::cout << filtdg::emit_table(rs, style == "errors" ? filtdg::TableStyle::errors
                                                            : filtdg::TableStyle::extrema);
    }
  } catch (const filtdg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const filtdg::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 1;
  } catch (const filtdg::StateError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 2;
  } catch (const filtdg::SolverError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
