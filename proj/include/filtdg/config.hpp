#pragma once

// Run configuration: a flat `key = value` text format with [sections]
// (problem, mesh, time, filter, amr, output), resolved into a validated
// RunConfig. Keys are addressed as `section.key`, which is also the syntax of
// command-line overrides (`--set filter.beta=0.3`).

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "filtdg/amr.hpp"
#include "filtdg/errors.hpp"
#include "filtdg/filter.hpp"
#include "filtdg/time_stepper.hpp"

namespace filtdg {

enum class BenchmarkKind { solid_body_rotation, isentropic_vortex, sod, explosion, riemann2d, custom };

inline std::string to_string(BenchmarkKind b) {
  switch (b) {
    case BenchmarkKind::solid_body_rotation: return "solid_body_rotation";
    case BenchmarkKind::isentropic_vortex: return "isentropic_vortex";
    case BenchmarkKind::sod: return "sod";
    case BenchmarkKind::explosion: return "explosion";
    case BenchmarkKind::riemann2d: return "riemann2d";
    case BenchmarkKind::custom: return "custom";
  }
  return "custom";
}

inline BenchmarkKind parse_benchmark(std::string_view s) {
  for (auto b : {BenchmarkKind::solid_body_rotation, BenchmarkKind::isentropic_vortex,
                 BenchmarkKind::sod, BenchmarkKind::explosion, BenchmarkKind::riemann2d,
                 BenchmarkKind::custom})
    if (to_string(b) == s) return b;
  throw ConfigError("unknown benchmark '" + std::string(s) + "'");
}

/// Scalar advection benchmarks use the advection model, the rest Euler.
inline bool is_euler(BenchmarkKind b) {
  return b != BenchmarkKind::solid_body_rotation && b != BenchmarkKind::custom;
}

struct ProblemParams {
  double beta_vortex = 5.0;
  double explosion_radius = 0.5;
  double explosion_outer_pressure = 0.1;
  Vec2 velocity{1.0, 0.5};  // custom benchmark: constant advection velocity
  Vec2 vortex_velocity{0.0, 0.0};  // isentropic vortex: free-stream velocity
};

struct OutputOptions {
  std::string directory = "out";
  std::vector<double> dump_times;
  bool csv = true;
  bool vtk = false;
  bool timeseries = true;
};

struct RunConfig {
  std::string name = "run";
  BenchmarkKind benchmark = BenchmarkKind::custom;
  ProblemParams problem;
  int degree = 1;
  int nx = 32;
  int ny = 32;
  StepController time;
  int ssp_order = 0;  // 0: default pairing with the degree
  SchemeKind scheme = SchemeKind::filtered;
  FilterConfig filter;
  bool amr_enabled = false;
  AdaptPolicy amr;
  int amr_initial_cycles = 3;
  OutputOptions output;

  std::size_t n_vars() const { return is_euler(benchmark) ? 4 : 1; }
  int resolved_ssp_order() const { return ssp_order ? ssp_order : default_ssp_order(degree); }

  /// Throws ConfigError naming the offending field.
  void validate() const {
    if (degree < 1 || degree > 6) throw ConfigError("mesh.degree: must lie in [1, 6]");
    if (nx < 1 || ny < 1) throw ConfigError("mesh.nx/mesh.ny: must be >= 1");
    if (benchmark == BenchmarkKind::sod && ny != 1) throw ConfigError("mesh.ny: sod runs on a strip, ny must be 1");
    if (!(time.t_final > 0.0)) throw ConfigError("time.t_final: must be > 0");
    if (time.mode == StepMode::fixed_courant && !(time.courant > 0.0))
      throw ConfigError("time.courant: must be > 0");
    if (time.mode == StepMode::fixed_dt && !(time.dt_fixed > 0.0))
      throw ConfigError("time.dt: must be > 0");
    if (ssp_order != 0 && ssp_order != 2 && ssp_order != 3)
      throw ConfigError("time.ssp_order: must be 2 or 3");
    filter.validate(n_vars());
    if (amr_enabled) {
      amr.validate();
      if (benchmark == BenchmarkKind::isentropic_vortex || benchmark == BenchmarkKind::sod ||
          benchmark == BenchmarkKind::custom)
        throw ConfigError("amr.enabled: adaptivity is available on non-periodic 2D benchmarks only");
      if (amr_initial_cycles < 0) throw ConfigError("amr.initial_cycles: must be >= 0");
    }
    if (!(problem.beta_vortex > 0.0)) throw ConfigError("problem.beta_vortex: must be > 0");
    if (!(problem.explosion_radius > 0.0 && problem.explosion_radius < 1.0))
      throw ConfigError("problem.explosion_radius: must lie in (0, 1)");
    if (!(problem.explosion_outer_pressure > 0.0))
      throw ConfigError("problem.explosion_outer_pressure: must be > 0");
    for (double t : output.dump_times)
      if (t < 0.0 || t > time.t_final) throw ConfigError("output.dump_times: times must lie in [0, t_final]");
    if (output.directory.empty()) throw ConfigError("output.directory: must not be empty");
  }
};

/// Paper parameters of each benchmark; every field can be overridden.
inline RunConfig defaults_for(BenchmarkKind b) {
  RunConfig c;
  c.benchmark = b;
  c.name = to_string(b);
  c.time.mode = StepMode::fixed_courant;
  c.time.courant = 0.1;
  c.filter.mode = FilterMode::relative;
  switch (b) {
    case BenchmarkKind::solid_body_rotation:
      c.nx = c.ny = 120;
      c.time.t_final = 2.0 * std::numbers::pi;
      c.filter.function = FilterFunction::f1;
      c.filter.betas = {0.4};
      c.amr.max_level = 2;
      break;
    case BenchmarkKind::isentropic_vortex:
      c.nx = c.ny = 40;
      c.time.t_final = 10.0;
      c.filter.function = FilterFunction::f1;
      c.filter.betas = {1.0, 1.0, 1.0, 1.0};
      break;
    case BenchmarkKind::sod:
      c.nx = 100;
      c.ny = 1;
      c.time.mode = StepMode::fixed_dt;
      c.time.dt_fixed = 5e-4;
      c.time.t_final = 0.2;
      c.filter.function = FilterFunction::f2;
      c.filter.betas = {0.3, 0.3, 0.3, 0.3};
      break;
    case BenchmarkKind::explosion:
      c.nx = c.ny = 200;
      c.time.t_final = 0.2;
      c.filter.function = FilterFunction::f2;
      c.filter.betas = {1.0, 1.0, 1.0, 1.0};
      c.amr.max_level = 3;
      break;
    case BenchmarkKind::riemann2d:
      c.degree = 2;
      c.nx = c.ny = 100;
      c.time.t_final = 0.25;
      c.filter.function = FilterFunction::f2;
      c.filter.betas = {0.25, 0.25, 0.25, 0.25};
      c.amr_enabled = true;
      c.amr.max_level = 1;
      break;
    case BenchmarkKind::custom:
      c.nx = c.ny = 32;
      c.time.t_final = 1.0;
      c.filter.function = FilterFunction::f1;
      c.filter.betas = {1.0};
      break;
  }
  return c;
}

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto next = s.find(',', pos);
    const auto item = trim(s.substr(pos, next == std::string_view::npos ? s.npos : next - pos));
    if (!item.empty()) out.push_back(item);
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

/// Shortest decimal representation that round-trips to the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string join_doubles(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_double(v[i]);
  return s;
}

}  // namespace detail

/// One `key = value` entry with its origin, for diagnostics.
struct ConfigEntry {
  std::string value;
  std::string origin;  // "file:line" or "--set"
};

/// Raw key/value contents of a configuration file plus overrides.
class ConfigFile {
 public:
  static ConfigFile parse(std::istream& in, const std::string& source = "<config>") {
    ConfigFile cfg;
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find_first_of("#;");
      const std::string text = detail::trim(hash == std::string::npos ? line : line.substr(0, hash));
      if (text.empty()) continue;
      const std::string where = source + ":" + std::to_string(lineno);
      if (text.front() == '[') {
        if (text.back() != ']' || text.size() < 3)
          throw ConfigError(where + ": malformed section header '" + text + "'");
        section = detail::trim(std::string_view(text).substr(1, text.size() - 2));
        continue;
      }
      const auto eq = text.find('=');
      if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
      const std::string key = detail::trim(std::string_view(text).substr(0, eq));
      if (key.empty()) throw ConfigError(where + ": empty key");
      const std::string full = section.empty() || key.find('.') != std::string::npos
                                   ? key
                                   : section + "." + key;
      if (cfg.entries_.count(full)) throw ConfigError(where + ": duplicate key '" + full + "'");
      cfg.entries_[full] = {detail::trim(std::string_view(text).substr(eq + 1)), where};
    }
    return cfg;
  }

  static ConfigFile from_string(const std::string& text, const std::string& source = "<string>") {
    std::istringstream in(text);
    return parse(in, source);
  }

  static ConfigFile from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open configuration file");
    return parse(in, path);
  }

  /// Apply a `section.key=value` override.
  void set_override(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ConfigError("--set " + assignment + ": expected section.key=value");
    const std::string key = detail::trim(std::string_view(assignment).substr(0, eq));
    entries_[key] = {detail::trim(std::string_view(assignment).substr(eq + 1)), "--set"};
  }

  const std::map<std::string, ConfigEntry>& entries() const { return entries_; }
  bool has(const std::string& key) const { return entries_.count(key) != 0; }

 private:
  std::map<std::string, ConfigEntry> entries_;
};

namespace detail {

struct KeyCodec {
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

inline double parse_double(const std::string& s) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end || !std::isfinite(v))
    throw ConfigError("expected a number, got '" + s + "'");
  return v;
}

inline int parse_int(const std::string& s) {
  int v = 0;
  const char* end = s.data() + s.size();
  auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) throw ConfigError("expected an integer, got '" + s + "'");
  return v;
}

inline bool parse_bool(const std::string& s) {
  if (s == "true" || s == "yes" || s == "on" || s == "1") return true;
  if (s == "false" || s == "no" || s == "off" || s == "0") return false;
  throw ConfigError("expected true/false, got '" + s + "'");
}

inline std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> v;
  for (const auto& item : split_list(s)) v.push_back(parse_double(item));
  return v;
}

inline const char* bool_str(bool b) { return b ? "true" : "false"; }

/// Every recognised key, in manifest order.
inline const std::vector<std::pair<std::string, KeyCodec>>& key_table() {
  using R = RunConfig;
  using S = const std::string&;
  static const std::vector<std::pair<std::string, KeyCodec>> table = {
      {"problem.benchmark", {[](R&, S) {}, [](const R& c) { return to_string(c.benchmark); }}},
      {"problem.name", {[](R& c, S v) { c.name = v; }, [](const R& c) { return c.name; }}},
      {"problem.beta_vortex",
       {[](R& c, S v) { c.problem.beta_vortex = parse_double(v); },
        [](const R& c) { return format_double(c.problem.beta_vortex); }}},
      {"problem.explosion_radius",
       {[](R& c, S v) { c.problem.explosion_radius = parse_double(v); },
        [](const R& c) { return format_double(c.problem.explosion_radius); }}},
      {"problem.explosion_outer_pressure",
       {[](R& c, S v) { c.problem.explosion_outer_pressure = parse_double(v); },
        [](const R& c) { return format_double(c.problem.explosion_outer_pressure); }}},
      {"problem.velocity",
       {[](R& c, S v) {
          const auto xs = parse_doubles(v);
          if (xs.size() != 2) throw ConfigError("expected two components 'ax, ay'");
          c.problem.velocity = {xs[0], xs[1]};
        },
        [](const R& c) {
          return join_doubles({c.problem.velocity[0], c.problem.velocity[1]});
        }}},
      {"problem.vortex_velocity",
       {[](R& c, S v) {
          const auto xs = parse_doubles(v);
          if (xs.size() != 2) throw ConfigError("expected two components 'ux, uy'");
          c.problem.vortex_velocity = {xs[0], xs[1]};
        },
        [](const R& c) {
          return join_doubles({c.problem.vortex_velocity[0], c.problem.vortex_velocity[1]});
        }}},
      {"mesh.degree", {[](R& c, S v) { c.degree = parse_int(v); },
                       [](const R& c) { return std::to_string(c.degree); }}},
      {"mesh.nx", {[](R& c, S v) { c.nx = parse_int(v); },
                   [](const R& c) { return std::to_string(c.nx); }}},
      {"mesh.ny", {[](R& c, S v) { c.ny = parse_int(v); },
                   [](const R& c) { return std::to_string(c.ny); }}},
      {"time.mode",
       {[](R& c, S v) {
          if (v == "courant") c.time.mode = StepMode::fixed_courant;
          else if (v == "fixed") c.time.mode = StepMode::fixed_dt;
          else throw ConfigError("expected 'courant' or 'fixed', got '" + v + "'");
        },
        [](const R& c) { return std::string(c.time.mode == StepMode::fixed_dt ? "fixed" : "courant"); }}},
      {"time.courant", {[](R& c, S v) { c.time.courant = parse_double(v); },
                        [](const R& c) { return format_double(c.time.courant); }}},
      {"time.dt", {[](R& c, S v) { c.time.dt_fixed = parse_double(v); },
                   [](const R& c) { return format_double(c.time.dt_fixed); }}},
      {"time.t_final", {[](R& c, S v) { c.time.t_final = parse_double(v); },
                        [](const R& c) { return format_double(c.time.t_final); }}},
      {"time.ssp_order", {[](R& c, S v) { c.ssp_order = parse_int(v); },
                          [](const R& c) { return std::to_string(c.resolved_ssp_order()); }}},
      {"filter.scheme",
       {[](R& c, S v) {
          if (v == "filtered") c.scheme = SchemeKind::filtered;
          else if (v == "high_order") c.scheme = SchemeKind::high_order;
          else if (v == "low_order") c.scheme = SchemeKind::low_order;
          else throw ConfigError("expected filtered|high_order|low_order, got '" + v + "'");
        },
        [](const R& c) {
          return std::string(c.scheme == SchemeKind::filtered
                                 ? "filtered"
                                 : (c.scheme == SchemeKind::high_order ? "high_order" : "low_order"));
        }}},
      {"filter.function",
       {[](R& c, S v) {
          if (v == "f1") c.filter.function = FilterFunction::f1;
          else if (v == "f2") c.filter.function = FilterFunction::f2;
          else throw ConfigError("expected f1|f2, got '" + v + "'");
        },
        [](const R& c) { return std::string(c.filter.function == FilterFunction::f1 ? "f1" : "f2"); }}},
      {"filter.mode",
       {[](R& c, S v) {
          if (v == "relative") c.filter.mode = FilterMode::relative;
          else if (v == "absolute") c.filter.mode = FilterMode::absolute;
          else throw ConfigError("expected relative|absolute, got '" + v + "'");
        },
        [](const R& c) {
          return std::string(c.filter.mode == FilterMode::relative ? "relative" : "absolute");
        }}},
      {"filter.c0", {[](R& c, S v) { c.filter.c0 = parse_double(v); },
                     [](const R& c) { return format_double(c.filter.c0); }}},
      {"filter.beta", {[](R& c, S v) { c.filter.betas = parse_doubles(v); },
                       [](const R& c) { return join_doubles(c.filter.betas); }}},
      {"filter.denominator_floor",
       {[](R& c, S v) { c.filter.denominator_floor = parse_double(v); },
        [](const R& c) { return format_double(c.filter.denominator_floor); }}},
      {"amr.enabled", {[](R& c, S v) { c.amr_enabled = parse_bool(v); },
                       [](const R& c) { return std::string(bool_str(c.amr_enabled)); }}},
      {"amr.max_level", {[](R& c, S v) { c.amr.max_level = parse_int(v); },
                         [](const R& c) { return std::to_string(c.amr.max_level); }}},
      {"amr.refine_fraction", {[](R& c, S v) { c.amr.refine_fraction = parse_double(v); },
                               [](const R& c) { return format_double(c.amr.refine_fraction); }}},
      {"amr.coarsen_fraction", {[](R& c, S v) { c.amr.coarsen_fraction = parse_double(v); },
                                [](const R& c) { return format_double(c.amr.coarsen_fraction); }}},
      {"amr.interval", {[](R& c, S v) { c.amr.interval = parse_int(v); },
                        [](const R& c) { return std::to_string(c.amr.interval); }}},
      {"amr.initial_cycles", {[](R& c, S v) { c.amr_initial_cycles = parse_int(v); },
                              [](const R& c) { return std::to_string(c.amr_initial_cycles); }}},
      {"output.directory", {[](R& c, S v) { c.output.directory = v; },
                            [](const R& c) { return c.output.directory; }}},
      {"output.dump_times", {[](R& c, S v) { c.output.dump_times = parse_doubles(v); },
                             [](const R& c) { return join_doubles(c.output.dump_times); }}},
      {"output.formats",
       {[](R& c, S v) {
          c.output.csv = c.output.vtk = false;
          for (const auto& f : split_list(v)) {
            if (f == "csv") c.output.csv = true;
            else if (f == "vtk") c.output.vtk = true;
            else throw ConfigError("expected a list of csv|vtk, got '" + f + "'");
          }
        },
        [](const R& c) {
          std::string s;
          if (c.output.csv) s = "csv";
          if (c.output.vtk) s += s.empty() ? "vtk" : ", vtk";
          return s;
        }}},
      {"output.timeseries", {[](R& c, S v) { c.output.timeseries = parse_bool(v); },
                             [](const R& c) { return std::string(bool_str(c.output.timeseries)); }}},
  };
  return table;
}

/// Expand a short beta list to one value per conserved variable: one value
/// is broadcast; for Euler, three values (rho, momentum, energy) are mapped
/// to (rho, rho_u, rho_v, rho_E).
inline std::vector<double> expand_betas(const std::vector<double>& b, std::size_t n_vars) {
  if (b.size() == 1) return std::vector<double>(n_vars, b[0]);
  if (n_vars == 4 && b.size() == 3) return {b[0], b[1], b[1], b[2]};
  return b;
}

}  // namespace detail

/// Resolve raw entries into a validated RunConfig: benchmark defaults first,
/// then every key in the file and the overrides.
inline RunConfig resolve(const ConfigFile& file) {
  const auto& entries = file.entries();
  const auto bench = entries.find("problem.benchmark");
  if (bench == entries.end()) throw ConfigError("problem.benchmark: required key is missing");
  RunConfig cfg;
  try {
    cfg = defaults_for(parse_benchmark(bench->second.value));
  } catch (const ConfigError& e) {
    throw ConfigError(bench->second.origin + ": problem.benchmark: " + e.what());
  }
  const auto& table = detail::key_table();
  for (const auto& [key, entry] : entries) {
    const auto it = std::find_if(table.begin(), table.end(),
                                 [&](const auto& kv) { return kv.first == key; });
    if (it == table.end()) throw ConfigError(entry.origin + ": unknown key '" + key + "'");
    try {
      it->second.set(cfg, entry.value);
    } catch (const ConfigError& e) {
      throw ConfigError(entry.origin + ": " + key + ": " + e.what());
    }
  }
  cfg.filter.betas = detail::expand_betas(cfg.filter.betas, cfg.n_vars());
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    const auto key = msg.substr(0, msg.find(':'));
    const auto it = entries.find(key);
    throw ConfigError(it != entries.end() ? it->second.origin + ": " + msg : msg);
  }
  return cfg;
}

/// Fully resolved configuration in the input format (the run manifest).
inline std::string to_config_text(const RunConfig& cfg) {
  std::ostringstream os;
  std::string section;
  for (const auto& [key, codec] : detail::key_table()) {
    const auto dot = key.find('.');
    const std::string sec = key.substr(0, dot);
    if (sec != section) {
      os << (section.empty() ? "" : "\n") << "[" << sec << "]\n";
      section = sec;
    }
    os << key.substr(dot + 1) << " = " << codec.get(cfg) << "\n";
  }
  return os.str();
}

}  // namespace filtdg
