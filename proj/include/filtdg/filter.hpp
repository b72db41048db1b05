#pragma once

// Nodewise blending of a high-order stage result uH with a monotone one uM:
//   u^F = uM + s F((uH - uM) / s)
// where the threshold s is eps * alpha * dt (absolute mode, eps = c0 h_K) or
// beta * max(|uM|, floor) (relative mode). F is odd, equals the identity on
// [-1, 1] and has compact support.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "filtdg/errors.hpp"
#include "filtdg/field.hpp"

namespace filtdg {

enum class FilterFunction { f1, f2 };
enum class FilterMode { absolute, relative };

/// x on |x| <= 1, zero elsewhere.
inline double filter_f1(double x) { return std::abs(x) <= 1.0 ? x : 0.0; }

/// sign(x) max(1 - ||x| - 1|, 0): identity on [-1,1], tent down to 0 at |x| = 2.
inline double filter_f2(double x) {
  const double a = std::abs(x);
  const double v = std::max(1.0 - std::abs(a - 1.0), 0.0);
  return x < 0.0 ? -v : (x > 0.0 ? v : 0.0);
}

inline double filter_eval(FilterFunction f, double x) {
  return f == FilterFunction::f1 ? filter_f1(x) : filter_f2(x);
}

/// uM + s F((uH - uM)/s) for s > 0, written so that the pass-through and
/// cut-off branches return uH and uM bit-exactly.
inline double filter_blend(FilterFunction f, double uh, double um, double s) {
  const double d = uh - um;
  const double a = std::abs(d);
  if (a <= s) return uh;
  if (f == FilterFunction::f1 || a >= 2.0 * s) return um;
  // F2 transition branch: s F2(d/s) = sign(d) (2 s - |d|).
  const double m = 2.0 * s - a;
  return d > 0.0 ? um + m : um - m;
}

struct FilterConfig {
  FilterFunction function = FilterFunction::f1;
  FilterMode mode = FilterMode::relative;
  /// eps = c0 * h_K (absolute mode).
  double c0 = 5.0;
  /// One beta per conserved variable (relative mode).
  std::vector<double> betas{0.4};
  double denominator_floor = 1e-8;

  void validate(std::size_t n_vars) const {
    if (mode == FilterMode::absolute) {
      if (!(c0 > 0.0)) throw ConfigError("filter: c0 must be > 0 in absolute mode");
      return;
    }
    if (betas.size() != n_vars)
      throw ConfigError("filter: expected " + std::to_string(n_vars) + " beta values, got " +
                        std::to_string(betas.size()));
    for (double b : betas)
      if (!(b > 0.0)) throw ConfigError("filter: every beta must be > 0");
    if (!(denominator_floor > 0.0)) throw ConfigError("filter: denominator_floor must be > 0");
  }
};

/// Count of nodal values replaced (not passed through) by the filter.
struct FilterStats {
  std::size_t values = 0;
  std::size_t modified = 0;
  FilterStats& operator+=(const FilterStats& o) {
    values += o.values;
    modified += o.modified;
    return *this;
  }
  double fraction() const { return values ? static_cast<double>(modified) / values : 0.0; }
};

template <std::size_t NV>
void check_congruent(const NodalField<NV>& a, const NodalField<NV>& b) {
  if (!a.same_layout(b)) throw std::logic_error("filter: fields are not congruent");
}

/// Absolute filter with per-cell eps = c0 h_K and threshold eps * alpha_dt.
template <std::size_t NV>
NodalField<NV> apply_absolute(const NodalField<NV>& uh, const NodalField<NV>& um,
                              double alpha_dt, const FilterConfig& cfg,
                              FilterStats* stats = nullptr) {
  check_congruent(uh, um);
  if (!(alpha_dt > 0.0)) throw std::invalid_argument("apply_absolute: alpha*dt must be > 0");
  if (cfg.mode != FilterMode::absolute) throw ConfigError("apply_absolute: not in absolute mode");
  NodalField<NV> out = um;
  FilterStats st;
  for (std::size_t c = 0; c < uh.n_cells(); ++c) {
    const double s = cfg.c0 * uh.mesh().cell(c).diameter() * alpha_dt;
    for (std::size_t n = 0; n < uh.nodes_per_cell(); ++n)
      for (std::size_t v = 0; v < NV; ++v) {
        const double h = uh.at(c, n, v);
        const double r = filter_blend(cfg.function, h, um.at(c, n, v), s);
        out.at(c, n, v) = r;
        ++st.values;
        if (r != h) ++st.modified;
      }
  }
  if (stats) *stats += st;
  return out;
}

/// Relative filter for one variable, writing into `out`. The threshold is
/// beta * max(|uM_i|, floor) with floor = denominator_floor * max_i |uM_i|;
/// an identically zero uM is copied verbatim.
template <std::size_t NV>
void apply_relative(const NodalField<NV>& uh, const NodalField<NV>& um, const FilterConfig& cfg,
                    std::size_t var, NodalField<NV>& out, FilterStats* stats = nullptr) {
  check_congruent(uh, um);
  if (cfg.mode != FilterMode::relative) throw ConfigError("apply_relative: not in relative mode");
  if (var >= NV || var >= cfg.betas.size())
    throw ConfigError("apply_relative: no beta for variable " + std::to_string(var));
  const double beta = cfg.betas[var];
  auto hd = uh.data();
  auto md = um.data();
  auto od = out.data();
  double scale = 0.0;
  for (std::size_t i = var; i < md.size(); i += NV) scale = std::max(scale, std::abs(md[i]));
  FilterStats st;
  if (scale == 0.0) {
    for (std::size_t i = var; i < md.size(); i += NV) {
      od[i] = md[i];
      ++st.values;
      if (md[i] != hd[i]) ++st.modified;
    }
  } else {
    const double floor = cfg.denominator_floor * scale;
    for (std::size_t i = var; i < md.size(); i += NV) {
      const double s = beta * std::max(std::abs(md[i]), floor);
      od[i] = filter_blend(cfg.function, hd[i], md[i], s);
      ++st.values;
      if (od[i] != hd[i]) ++st.modified;
    }
  }
  if (stats) *stats += st;
}

/// Relative filter applied to every variable with its own beta.
template <std::size_t NV>
NodalField<NV> apply_relative(const NodalField<NV>& uh, const NodalField<NV>& um,
                              const FilterConfig& cfg, FilterStats* stats = nullptr) {
  NodalField<NV> out = um;
  for (std::size_t v = 0; v < NV; ++v) apply_relative(uh, um, cfg, v, out, stats);
  return out;
}

/// Dispatch on the configured mode.
template <std::size_t NV>
NodalField<NV> apply_filter(const NodalField<NV>& uh, const NodalField<NV>& um, double alpha_dt,
                            const FilterConfig& cfg, FilterStats* stats = nullptr) {
  if (cfg.mode == FilterMode::absolute) return apply_absolute(uh, um, alpha_dt, cfg, stats);
  return apply_relative(uh, um, cfg, stats);
}

}  // namespace filtdg
