#pragma once

// SSP Runge-Kutta stepping in Shu-Osher form. Every stage is
//   v_s = c_old v^n + c_prev (v_{s-1} + dt N(v_{s-1}))
// i.e. a convex combination of the step start and one forward-Euler substep,
// which advances the solution by alpha * dt with alpha = c_prev.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "filtdg/errors.hpp"
#include "filtdg/field.hpp"
#include "filtdg/filter.hpp"
#include "filtdg/low_order_operator.hpp"

namespace filtdg {

struct StageCoefficients {
  double c_old = 0.0;
  double c_prev = 1.0;
  /// Offset of the stage input time, in units of dt.
  double time_offset = 0.0;
  double alpha() const { return c_prev; }
};

class StageScheme {
 public:
  static StageScheme ssp2() { return StageScheme(2, {{0.0, 1.0, 0.0}, {0.5, 0.5, 1.0}}); }
  static StageScheme ssp3() {
    return StageScheme(3, {{0.0, 1.0, 0.0}, {0.75, 0.25, 1.0}, {1.0 / 3.0, 2.0 / 3.0, 0.5}});
  }
  static StageScheme of_order(int order) {
    if (order == 2) return ssp2();
    if (order == 3) return ssp3();
    throw ConfigError("time: SSP order must be 2 or 3");
  }

  int order() const noexcept { return order_; }
  const std::vector<StageCoefficients>& stages() const noexcept { return stages_; }

 private:
  StageScheme(int order, std::vector<StageCoefficients> stages)
      : order_(order), stages_(std::move(stages)) {
    for (const auto& s : stages_) {
      if (s.c_old < 0.0 || s.c_prev < 0.0 || std::abs(s.c_old + s.c_prev - 1.0) > 1e-15)
        throw std::logic_error("StageScheme: coefficients are not a convex combination");
    }
  }

  int order_;
  std::vector<StageCoefficients> stages_;
};

/// Default pairing of polynomial degree and SSP order.
inline int default_ssp_order(int degree) { return degree <= 1 ? 2 : 3; }

inline double lincomb(double a, double x, double b, double y) { return a * x + b * y; }

template <std::size_t NV>
NodalField<NV> lincomb(double a, const NodalField<NV>& x, double b, const NodalField<NV>& y) {
  NodalField<NV> out = x;
  out.combine(a, b, y);
  return out;
}

template <std::size_t NV>
CellAverageField<NV> lincomb(double a, const CellAverageField<NV>& x, double b,
                             const CellAverageField<NV>& y) {
  if (x.mesh_ptr() != y.mesh_ptr()) throw std::logic_error("lincomb: mesh mismatch");
  CellAverageField<NV> out(x.mesh_ptr());
  for (std::size_t c = 0; c < x.n_cells(); ++c)
    for (std::size_t v = 0; v < NV; ++v) out[c][v] = a * x[c][v] + b * y[c][v];
  return out;
}

/// One SSP stage: c_old v_n + c_prev substep(v_prev, dt).
template <class V, class Substep>
V ssp_stage(const StageScheme& scheme, std::size_t stage, const V& v_n, const V& v_prev,
            double dt, Substep&& substep) {
  const StageCoefficients& s = scheme.stages().at(stage);
  V fe = substep(v_prev, dt);
  if (s.c_old == 0.0 && s.c_prev == 1.0) return fe;
  return lincomb(s.c_old, v_n, s.c_prev, fe);
}

/// Full SSP step of y' = N(y) for any type supporting lincomb.
template <class V, class Rhs>
V ssp_step(const StageScheme& scheme, const V& v_n, double dt, Rhs&& rhs) {
  V v = v_n;
  for (std::size_t s = 0; s < scheme.stages().size(); ++s)
    v = ssp_stage(scheme, s, v_n, v, dt,
                  [&](const V& x, double h) { return lincomb(1.0, x, h, rhs(x)); });
  return v;
}

enum class StepMode { fixed_dt, fixed_courant };

struct StepController {
  StepMode mode = StepMode::fixed_courant;
  double courant = 0.1;
  double dt_fixed = 0.0;
  double t_final = 1.0;

  /// Clip dt so the step lands exactly on t_final.
  double clip(double t, double dt) const {
    if (t + dt >= t_final || t_final - (t + dt) < 1e-12 * std::max(1.0, t_final))
      return t_final - t;
    return dt;
  }
};

/// dt = C H / (k max U[+c]) with H the minimum cell diameter.
template <class Model, std::size_t NV>
double compute_dt(const StepController& ctl, const NodalField<NV>& field, const Model& model,
                  int degree, double t = 0.0) {
  if (ctl.mode == StepMode::fixed_dt) {
    if (!(ctl.dt_fixed > 0.0)) throw ConfigError("time: dt must be > 0");
    return ctl.dt_fixed;
  }
  double umax = 0.0;
  for (std::size_t c = 0; c < field.n_cells(); ++c)
    for (std::size_t n = 0; n < field.nodes_per_cell(); ++n)
      umax = std::max(umax, model.cfl_speed(field.state(c, n), field.node_position(c, n), t));
  if (!(umax > 0.0)) throw std::domain_error("compute_dt: zero wave speed (degenerate dynamics)");
  const int k = std::max(degree, 1);
  return ctl.courant * field.mesh().min_diameter() / (k * umax);
}

enum class SchemeKind { high_order, low_order, filtered };

/// Stage-wise composition of the high-order and monotone operators with the
/// filter applied after every stage.
template <class HighOp, class LowOp, std::size_t NV>
NodalField<NV> filtered_step(const NodalField<NV>& v_n, const StageScheme& scheme, double t,
                             double dt, const HighOp& high, const LowOp& low,
                             const FilterConfig& cfg, SchemeKind kind = SchemeKind::filtered,
                             FilterStats* stats = nullptr) {
  if (!(dt > 0.0)) throw std::invalid_argument("filtered_step: dt must be > 0");
  NodalField<NV> v = v_n;
  std::optional<CellAverageField<NV>> avg_n;
  if (kind != SchemeKind::high_order) avg_n = project_to_averages(v_n);
  for (std::size_t s = 0; s < scheme.stages().size(); ++s) {
    const StageCoefficients& c = scheme.stages()[s];
    const double ts = t + c.time_offset * dt;
    if (kind == SchemeKind::high_order) {
      v = ssp_stage(scheme, s, v_n, v, dt,
                    [&](const NodalField<NV>& x, double h) { return high.substep(x, ts, h); });
      continue;
    }
    const CellAverageField<NV> am = ssp_stage(
        scheme, s, *avg_n, project_to_averages(v), dt,
        [&](const CellAverageField<NV>& x, double h) { return low.fv_substep(x, ts, h); });
    NodalField<NV> um = broadcast_to_nodes(am, v_n.basis_ptr());
    if (kind == SchemeKind::low_order) {
      v = std::move(um);
      continue;
    }
    const NodalField<NV> uh = ssp_stage(
        scheme, s, v_n, v, dt,
        [&](const NodalField<NV>& x, double h) { return high.substep(x, ts, h); });
    v = apply_filter(uh, um, c.alpha() * dt, cfg, stats);
  }
  return v;
}

}  // namespace filtdg
