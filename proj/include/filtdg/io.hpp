#pragma once

// Field dumps (CSV, legacy ASCII VTK), run reports (JSON) and the
// paper-style summary tables.

#include <json.hpp>

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "filtdg/analysis.hpp"
#include "filtdg/errors.hpp"
#include "filtdg/field.hpp"
#include "filtdg/reference.hpp"

namespace filtdg {

namespace detail {

inline std::ofstream open_for_write(const std::string& path) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
    if (ec) throw IoError(p.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path + ": " + std::strerror(errno));
  return out;
}

inline void check_written(std::ostream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError(path + ": write failed: " + std::strerror(errno));
}

inline void append_double(std::string& s, double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  s.append(buf, res.ptr);
}

inline double read_double(std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw IoError("csv: malformed number '" + std::string(s) + "'");
  return v;
}

}  // namespace detail

enum class FieldFormat { csv, vtk };

/// One row per node: cell_id,level,x,y,node_i,<vars>. Values use the
/// shortest decimal form that round-trips, so dumps are bit-exact.
template <std::size_t NV>
void write_field_csv(std::ostream& out, const NodalField<NV>& f,
                     const std::vector<std::string>& names) {
  if (names.size() != NV) throw std::invalid_argument("write_field_csv: one name per variable");
  std::string line = "cell_id,level,x,y,node_i";
  for (const auto& n : names) line += "," + n;
  out << line << '\n';
  for (std::size_t c = 0; c < f.n_cells(); ++c) {
    const int level = f.mesh().cell(c).key.level;
    for (std::size_t n = 0; n < f.nodes_per_cell(); ++n) {
      const Point x = f.node_position(c, n);
      line = std::to_string(c) + "," + std::to_string(level) + ",";
      detail::append_double(line, x[0]);
      line += ",";
      detail::append_double(line, x[1]);
      line += "," + std::to_string(n);
      for (std::size_t v = 0; v < NV; ++v) {
        line += ",";
        detail::append_double(line, f.at(c, n, v));
      }
      out << line << '\n';
    }
  }
}

/// Fill `f` (same mesh and degree as the dump) from a CSV written by
/// write_field_csv.
template <std::size_t NV>
void read_field_csv(std::istream& in, NodalField<NV>& f) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("csv: missing header");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string_view> cols;
    std::string_view sv(line);
    std::size_t pos = 0;
    while (true) {
      const auto next = sv.find(',', pos);
      cols.push_back(sv.substr(pos, next == sv.npos ? sv.npos : next - pos));
      if (next == sv.npos) break;
      pos = next + 1;
    }
    if (cols.size() != 5 + NV) throw IoError("csv: wrong column count in row " + std::to_string(rows + 1));
    const auto c = static_cast<std::size_t>(detail::read_double(cols[0]));
    const auto n = static_cast<std::size_t>(detail::read_double(cols[4]));
    if (c >= f.n_cells() || n >= f.nodes_per_cell()) throw IoError("csv: cell/node index out of range");
    for (std::size_t v = 0; v < NV; ++v) f.at(c, n, v) = detail::read_double(cols[5 + v]);
    ++rows;
  }
  if (rows != f.n_nodes()) throw IoError("csv: expected " + std::to_string(f.n_nodes()) + " rows");
}

/// Legacy ASCII VTK unstructured grid; each Q_k cell is split into k x k
/// bilinear quads spanned by its Gauss-Lobatto nodes.
template <std::size_t NV>
void write_field_vtk(std::ostream& out, const NodalField<NV>& f,
                     const std::vector<std::string>& names, const std::string& title = "filtdg") {
  const std::size_t n1 = f.basis().n1d();
  const std::size_t k = n1 - 1;
  const std::size_t npts = f.n_nodes();
  const std::size_t nsub = f.n_cells() * k * k;
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << npts << " double\n";
  std::string s;
  for (std::size_t c = 0; c < f.n_cells(); ++c)
    for (std::size_t n = 0; n < f.nodes_per_cell(); ++n) {
      const Point x = f.node_position(c, n);
      s.clear();
      detail::append_double(s, x[0]);
      s += ' ';
      detail::append_double(s, x[1]);
      out << s << " 0\n";
    }
  out << "CELLS " << nsub << ' ' << nsub * 5 << '\n';
  for (std::size_t c = 0; c < f.n_cells(); ++c) {
    const std::size_t base = c * f.nodes_per_cell();
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t i = 0; i < k; ++i)
        out << "4 " << base + i + n1 * j << ' ' << base + i + 1 + n1 * j << ' '
            << base + i + 1 + n1 * (j + 1) << ' ' << base + i + n1 * (j + 1) << '\n';
  }
  out << "CELL_TYPES " << nsub << '\n';
  for (std::size_t i = 0; i < nsub; ++i) out << "9\n";
  out << "POINT_DATA " << npts << '\n';
  for (std::size_t v = 0; v < NV; ++v) {
    out << "SCALARS " << names.at(v) << " double 1\nLOOKUP_TABLE default\n";
    for (std::size_t c = 0; c < f.n_cells(); ++c)
      for (std::size_t n = 0; n < f.nodes_per_cell(); ++n) {
        s.clear();
        detail::append_double(s, f.at(c, n, v));
        out << s << '\n';
      }
  }
}

/// Write a field dump to `path`; IO failures report the path and OS error.
template <std::size_t NV>
void emit_field(const NodalField<NV>& f, const std::vector<std::string>& names,
                const std::string& path, FieldFormat format) {
  auto out = detail::open_for_write(path);
  if (format == FieldFormat::csv)
    write_field_csv(out, f, names);
  else
    write_field_vtk(out, f, names);
  detail::check_written(out, path);
}

/// Generic numeric table: a header line, then one row per entry, values in
/// shortest round-trip form.
inline void write_table_csv(std::ostream& out, const std::vector<std::string>& columns,
                            const std::vector<std::vector<double>>& rows) {
  if (columns.empty()) throw std::invalid_argument("write_table_csv: no columns");
  std::string line;
  for (std::size_t i = 0; i < columns.size(); ++i) line += (i ? "," : "") + columns[i];
  out << line << '\n';
  for (const auto& r : rows) {
    if (r.size() != columns.size()) throw std::invalid_argument("write_table_csv: row width mismatch");
    line.clear();
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) line += ",";
      detail::append_double(line, r[i]);
    }
    out << line << '\n';
  }
}

/// Exact Riemann profile x,rho,u,p at `samples` equispaced points of [x0, x1].
inline void write_riemann_profile_csv(std::ostream& out, const ExactRiemannSolver& rs, double t,
                                      double x0, double x1, int samples) {
  if (samples < 2 || !(x1 > x0)) throw std::invalid_argument("write_riemann_profile_csv: bad sampling");
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < samples; ++i) {
    const double x = x0 + (x1 - x0) * i / (samples - 1);
    const auto w = rs.sample(x, t);
    rows.push_back({x, w.rho, w.u, w.p});
  }
  write_table_csv(out, {"x", "rho", "u", "p"}, rows);
}

/// Radial reference profile r,rho,u,p at time t on the oracle's cell centres.
inline void write_radial_profile_csv(std::ostream& out, const RadialReference& ref, double t) {
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < ref.options().cells; ++i) {
    const double r = ref.cell_center(i);
    const auto w = ref(r, t);
    rows.push_back({r, w.rho, w.u, w.p});
  }
  write_table_csv(out, {"r", "rho", "u", "p"}, rows);
}

/// Per-step diagnostics row.
struct StepRecord {
  std::size_t step = 0;
  double t = 0.0;
  double dt = 0.0;
  std::size_t n_cells = 0;
  double min_value = 0.0;
  double max_value = 0.0;
  double mass_drift_rel = 0.0;
  double filter_fraction = 0.0;
};

inline const char* timeseries_header() {
  return "step,t,dt,n_cells,min,max,mass_drift_rel,filter_fraction";
}

inline std::string to_csv_row(const StepRecord& r) {
  std::string s = std::to_string(r.step) + ",";
  detail::append_double(s, r.t);
  s += ",";
  detail::append_double(s, r.dt);
  s += "," + std::to_string(r.n_cells) + ",";
  detail::append_double(s, r.min_value);
  s += ",";
  detail::append_double(s, r.max_value);
  s += ",";
  detail::append_double(s, r.mass_drift_rel);
  s += ",";
  detail::append_double(s, r.filter_fraction);
  return s;
}

/// Summary of one run, serialised as report.json next to its outputs.
struct RunReport {
  std::string name;
  std::string benchmark;
  std::string status = "ok";  // ok | state_error
  std::string message;
  int degree = 1;
  int nx = 0;
  int ny = 0;
  std::size_t n_cells = 0;
  std::size_t steps = 0;
  double t_final = 0.0;
  bool has_reference = false;
  ErrorReport error;  // variable 0 at the final time
  double global_max = 0.0;
  double global_min = 0.0;
  double max_abs_mass_drift = 0.0;
  double filter_fraction = 0.0;
  double cpu_seconds = 0.0;
  std::vector<std::string> artifacts;
};

inline nlohmann::json to_json(const RunReport& r) {
  using nlohmann::json;
  json j;
  j["name"] = r.name;
  j["benchmark"] = r.benchmark;
  j["status"] = r.status;
  j["message"] = r.message;
  j["degree"] = r.degree;
  j["nx"] = r.nx;
  j["ny"] = r.ny;
  j["n_cells"] = r.n_cells;
  j["steps"] = r.steps;
  j["t_final"] = r.t_final;
  j["has_reference"] = r.has_reference;
  j["error"] = {{"l1_rel", r.error.l1_rel},
                {"l2_rel", r.error.l2_rel},
                {"linf_rel", r.error.linf_rel},
                {"max_value", r.error.max_value},
                {"min_value", r.error.min_value},
                {"mass_drift_rel", r.error.mass_drift_rel},
                {"absolute", r.error.absolute}};
  j["global_max"] = r.global_max;
  j["global_min"] = r.global_min;
  j["max_abs_mass_drift"] = r.max_abs_mass_drift;
  j["filter_fraction"] = r.filter_fraction;
  j["cpu_seconds"] = r.cpu_seconds;
  j["artifacts"] = r.artifacts;
  return j;
}

inline RunReport report_from_json(const nlohmann::json& j) {
  RunReport r;
  r.name = j.at("name").get<std::string>();
  r.benchmark = j.at("benchmark").get<std::string>();
  r.status = j.at("status").get<std::string>();
  r.message = j.value("message", std::string());
  r.degree = j.at("degree").get<int>();
  r.nx = j.at("nx").get<int>();
  r.ny = j.at("ny").get<int>();
  r.n_cells = j.at("n_cells").get<std::size_t>();
  r.steps = j.at("steps").get<std::size_t>();
  r.t_final = j.at("t_final").get<double>();
  r.has_reference = j.at("has_reference").get<bool>();
  const auto& e = j.at("error");
  r.error.l1_rel = e.at("l1_rel").get<double>();
  r.error.l2_rel = e.at("l2_rel").get<double>();
  r.error.linf_rel = e.at("linf_rel").get<double>();
  r.error.max_value = e.at("max_value").get<double>();
  r.error.min_value = e.at("min_value").get<double>();
  r.error.mass_drift_rel = e.at("mass_drift_rel").get<double>();
  r.error.absolute = e.at("absolute").get<bool>();
  r.global_max = j.at("global_max").get<double>();
  r.global_min = j.at("global_min").get<double>();
  r.max_abs_mass_drift = j.at("max_abs_mass_drift").get<double>();
  r.filter_fraction = j.at("filter_fraction").get<double>();
  r.cpu_seconds = j.at("cpu_seconds").get<double>();
  r.artifacts = j.at("artifacts").get<std::vector<std::string>>();
  return r;
}

inline void write_report(const RunReport& r, const std::string& path) {
  auto out = detail::open_for_write(path);
  out << to_json(r).dump(2) << '\n';
  detail::check_written(out, path);
}

inline RunReport read_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path + ": " + std::strerror(errno));
  try {
    return report_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path + ": not a run report: " + e.what());
  }
}

enum class TableStyle { errors, extrema };

namespace detail {

/// Display width of a UTF-8 string (counts code points).
inline std::size_t display_width(const std::string& s) {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

inline std::string fixed(double v, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

inline std::string render(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(rows.front().size(), 0);
  for (const auto& r : rows)
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], display_width(r[i]));
  std::string out;
  for (std::size_t ri = 0; ri < rows.size(); ++ri) {
    std::string line;
    for (std::size_t i = 0; i < rows[ri].size(); ++i) {
      if (i) line += " | ";
      line += std::string(width[i] - display_width(rows[ri][i]), ' ') + rows[ri][i];
    }
    out += line + "\n";
    if (ri == 0) {
      std::string rule;
      for (std::size_t i = 0; i < width.size(); ++i) rule += (i ? "-+-" : "") + std::string(width[i], '-');
      out += rule + "\n";
    }
  }
  return out;
}

}  // namespace detail

/// Plain-text table. `errors`: N_el with relative L1/L2/Linf errors and the
/// rates between consecutive rows ("—" where no rate exists). `extrema`:
/// per-run maximum and minimum of the tracked variable at the final time.
inline std::string emit_table(const std::vector<RunReport>& reports, TableStyle style) {
  if (reports.empty()) throw std::invalid_argument("emit_table: need at least one report");
  const std::string dash = "\xE2\x80\x94";
  std::vector<std::vector<std::string>> rows;
  if (style == TableStyle::errors) {
    rows.push_back({"N_el", "L1 rel. err", "L1 rate", "L2 rel. err", "L2 rate", "Linf rel. err", "Linf rate"});
    for (std::size_t i = 0; i < reports.size(); ++i) {
      const auto& r = reports[i];
      std::vector<std::string> row{std::to_string(r.nx)};
      const double cur[3] = {r.error.l1_rel, r.error.l2_rel, r.error.linf_rel};
      for (int m = 0; m < 3; ++m) {
        row.push_back(detail::sci(cur[m]));
        std::string rate = dash;
        if (i > 0 && r.nx != reports[i - 1].nx) {
          const auto& p = reports[i - 1];
          const double prev[3] = {p.error.l1_rel, p.error.l2_rel, p.error.linf_rel};
          if (prev[m] > 0.0 && cur[m] > 0.0)
            rate = detail::fixed(std::log(prev[m] / cur[m]) /
                                     std::log(static_cast<double>(r.nx) / p.nx), 2);
        }
        row.push_back(rate);
      }
      rows.push_back(std::move(row));
    }
  } else {
    rows.push_back({"run", "N_el", "max", "min", "Linf err"});
    for (const auto& r : reports)
      rows.push_back({r.name, std::to_string(r.nx), detail::fixed(r.error.max_value, 6),
                      detail::fixed(r.error.min_value, 6),
                      r.has_reference ? detail::sci(r.error.linf_rel) : dash});
  }
  return detail::render(rows);
}

}  // namespace filtdg
