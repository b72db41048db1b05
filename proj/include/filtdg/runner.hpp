#pragma once

// Benchmark runner: [adapt] -> dt -> filtered step -> diagnostics, with
// manifest, time series, field dumps and the final report written to the
// output directory.

#include <algorithm>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "filtdg/amr.hpp"
#include "filtdg/analysis.hpp"
#include "filtdg/benchmarks.hpp"
#include "filtdg/config.hpp"
#include "filtdg/high_order_operator.hpp"
#include "filtdg/io.hpp"
#include "filtdg/low_order_operator.hpp"
#include "filtdg/time_stepper.hpp"

namespace filtdg {

template <std::size_t NV>
struct SimulationResult {
  NodalField<NV> field;
  RunReport report;
  std::vector<StepRecord> history;
};

namespace detail {

template <std::size_t NV, class F>
NodalField<NV> sample_on(std::shared_ptr<const QuadMesh> mesh,
                         std::shared_ptr<const TensorBasis2D> basis, F&& f) {
  NodalField<NV> out(std::move(mesh), std::move(basis));
  out.fill(f);
  return out;
}

inline std::string path_in(const std::string& dir, const std::string& file) {
  return (std::filesystem::path(dir) / file).string();
}

}  // namespace detail

/// Run one configured problem. With `write_outputs` false nothing touches the
/// file system (used by tests). A StateError is rethrown after the partial
/// outputs and a failed report have been written.
template <class Model>
SimulationResult<Model::n_vars> simulate(const RunConfig& cfg, const Problem<Model>& problem,
                                         bool write_outputs = true) {
  constexpr std::size_t NV = Model::n_vars;
  cfg.validate();
  const auto names = Model::variable_names();
  const std::string& dir = cfg.output.directory;

  SimulationResult<NV> res;
  RunReport& rep = res.report;
  rep.name = cfg.name;
  rep.benchmark = to_string(cfg.benchmark);
  rep.degree = cfg.degree;
  rep.nx = cfg.nx;
  rep.ny = cfg.ny;

  std::optional<std::ofstream> series;
  auto add_artifact = [&](const std::string& p) { rep.artifacts.push_back(p); };
  if (write_outputs) {
    const std::string manifest = detail::path_in(dir, "manifest.ini");
    auto out = detail::open_for_write(manifest);
    out << to_config_text(cfg);
    detail::check_written(out, manifest);
    add_artifact(manifest);
    if (cfg.output.timeseries) {
      const std::string p = detail::path_in(dir, "timeseries.csv");
      series = detail::open_for_write(p);
      *series << timeseries_header() << '\n';
      add_artifact(p);
    }
  }

  auto dump = [&](const NodalField<NV>& f, const std::string& stem) {
    if (!write_outputs) return;
    if (cfg.output.csv) {
      const std::string p = detail::path_in(dir, stem + ".csv");
      emit_field(f, names, p, FieldFormat::csv);
      add_artifact(p);
    }
    if (cfg.output.vtk) {
      const std::string p = detail::path_in(dir, stem + ".vtk");
      emit_field(f, names, p, FieldFormat::vtk);
      add_artifact(p);
    }
  };

  // Initial mesh and data; adaptive runs re-sample the initial condition on
  // each adapted mesh.
  auto basis = std::make_shared<const TensorBasis2D>(cfg.degree);
  NodalField<NV> v = detail::sample_on<NV>(problem.build_mesh(cfg.nx, cfg.ny), basis, problem.initial);
  if (cfg.amr_enabled) {
    for (int cycle = 0; cycle < cfg.amr_initial_cycles; ++cycle) {
      const auto ad = adapt(v, cfg.amr, compute_indicator(v, 0));
      if (ad.refined == 0 && ad.coarsened == 0) break;
      v = detail::sample_on<NV>(ad.field.mesh_ptr(), basis, problem.initial);
    }
  }

  const HighOrderOperator<Model> high(problem.model, problem.bc);
  const LowOrderOperator<Model> low(problem.model, problem.bc);
  const StageScheme scheme = StageScheme::of_order(cfg.resolved_ssp_order());
  const double mass0 = v.integral()[0];
  const double mass_scale = l1_norm(v, 0);

  ExtremaTracker extrema;
  extrema.record(v, 0);
  std::vector<double> dumps = cfg.output.dump_times;
  std::sort(dumps.begin(), dumps.end());
  std::size_t next_dump = 0;
  auto dump_due = [&](double t) {
    while (next_dump < dumps.size() && t >= dumps[next_dump] - 1e-12) {
      dump(v, "field_t" + std::to_string(next_dump));
      ++next_dump;
    }
  };
  dump_due(0.0);

  double t = 0.0;
  std::size_t step = 0;
  FilterStats total;
  double cpu = 0.0;
  try {
    const std::clock_t c0 = std::clock();
    while (t < cfg.time.t_final) {
      if (cfg.amr_enabled && step > 0 && step % static_cast<std::size_t>(cfg.amr.interval) == 0)
        v = adapt(v, cfg.amr, compute_indicator(v, 0)).field;
      double dt = compute_dt(cfg.time, v, problem.model, cfg.degree, t);
      dt = cfg.time.clip(t, dt);
      FilterStats st;
      v = filtered_step(v, scheme, t, dt, high, low, cfg.filter, cfg.scheme, &st);
      total += st;
      t = (t + dt >= cfg.time.t_final) ? cfg.time.t_final : t + dt;
      ++step;
      extrema.record(v, 0);
      StepRecord rec{step,          t,
                     dt,            v.n_cells(),
                     extrema.last_min(), extrema.last_max(),
                     relative_drift(mass0, v.integral()[0], mass_scale), st.fraction()};
      rep.max_abs_mass_drift = std::max(rep.max_abs_mass_drift, std::abs(rec.mass_drift_rel));
      if (series) *series << to_csv_row(rec) << '\n';
      res.history.push_back(rec);
      dump_due(t);
    }
    cpu = static_cast<double>(std::clock() - c0) / CLOCKS_PER_SEC;
  } catch (const StateError& e) {
    std::ostringstream msg;
    msg << e.what() << " (cell " << e.cell() << ", t = " << t << ", step " << step + 1 << ")";
    rep.status = "state_error";
    rep.message = msg.str();
    rep.steps = step;
    rep.n_cells = v.n_cells();
    rep.t_final = t;
    if (write_outputs) {
      if (series) series->flush();
      write_report(rep, detail::path_in(dir, "report.json"));
    }
    throw StateError(msg.str(), e.cell());
  }

  rep.steps = step;
  rep.t_final = t;
  rep.n_cells = v.n_cells();
  rep.cpu_seconds = cpu;
  rep.global_max = extrema.global_max();
  rep.global_min = extrema.global_min();
  rep.filter_fraction = total.fraction();
  if (problem.exact) {
    rep.has_reference = true;
    rep.error = error_norms(v, 0, [&](const Point& x) { return problem.exact(x, t); });
  } else {
    rep.error.max_value = v.max(0);
    rep.error.min_value = v.min(0);
  }
  rep.error.mass_drift_rel = relative_drift(mass0, v.integral()[0], mass_scale);
  if (write_outputs) {
    dump(v, "field_final");
    if (series) detail::check_written(*series, detail::path_in(dir, "timeseries.csv"));
    const std::string rp = detail::path_in(dir, "report.json");
    add_artifact(rp);
    write_report(rep, rp);
  }
  res.field = std::move(v);
  return res;
}

/// Dispatch on the benchmark's model.
inline RunReport run(const RunConfig& cfg, bool write_outputs = true) {
  if (is_euler(cfg.benchmark)) return simulate(cfg, make_euler_problem(cfg), write_outputs).report;
  return simulate(cfg, make_advection_problem(cfg), write_outputs).report;
}

/// Mesh-doubling study: level l runs with nx * 2^l (and ny * 2^l except on
/// the Sod strip) in `<directory>/level_<l>`; writes convergence.csv and
/// table.txt into the base directory.
inline std::vector<RunReport> run_convergence(const RunConfig& base, int levels,
                                              bool write_outputs = true) {
  if (levels < 2) throw ConfigError("convergence: --levels must be >= 2");
  std::vector<RunReport> reports;
  for (int l = 0; l < levels; ++l) {
    RunConfig c = base;
    c.nx = base.nx << l;
    if (base.benchmark != BenchmarkKind::sod) c.ny = base.ny << l;
    c.name = base.name + "_n" + std::to_string(c.nx);
    c.output.directory = detail::path_in(base.output.directory, "level_" + std::to_string(l));
    reports.push_back(run(c, write_outputs));
  }
  if (write_outputs) {
    const std::string csv = detail::path_in(base.output.directory, "convergence.csv");
    auto out = detail::open_for_write(csv);
    out << "nx,n_cells,l1_rel,l2_rel,linf_rel,l1_rate,l2_rate,linf_rate\n";
    for (std::size_t i = 0; i < reports.size(); ++i) {
      const auto& r = reports[i];
      std::string row = std::to_string(r.nx) + "," + std::to_string(r.n_cells);
      const double cur[3] = {r.error.l1_rel, r.error.l2_rel, r.error.linf_rel};
      for (double e : cur) {
        row += ",";
        detail::append_double(row, e);
      }
      for (int m = 0; m < 3; ++m) {
        row += ",";
        if (i == 0) continue;
        const auto& p = reports[i - 1];
        const double prev[3] = {p.error.l1_rel, p.error.l2_rel, p.error.linf_rel};
        if (prev[m] > 0.0 && cur[m] > 0.0)
          detail::append_double(row, convergence_rate({prev[m], cur[m]},
                                                      {static_cast<double>(r.nx) / p.nx})[0]);
      }
      out << row << '\n';
    }
    detail::check_written(out, csv);
    const std::string tp = detail::path_in(base.output.directory, "table.txt");
    auto tab = detail::open_for_write(tp);
    tab << emit_table(reports, TableStyle::errors);
    detail::check_written(tab, tp);
  }
  return reports;
}

}  // namespace filtdg
