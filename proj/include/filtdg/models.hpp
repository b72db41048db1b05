#pragma once

// PDE models F(u): scalar linear advection and the 2D compressible Euler
// system with ideal-gas closure.
//
// A model provides
//   n_vars, State
//   flux(w, x, t)             -> {F_x(w), F_y(w)}
//   flux_axis(w, axis, x, t)  -> F_axis(w)
//   max_wave_speed(w, n, x, t)-> |u.n| (+ c)
//   cfl_speed(w, x, t)        -> |u| (+ c), the U (+c) of the Courant number
//   check(w, cell)            -> throws StateError for inadmissible states

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "filtdg/errors.hpp"
#include "filtdg/mesh.hpp"

namespace filtdg {

/// Stationary or translating velocity field a(x, t).
struct VelocityField {
  enum class Kind { constant, rotation };
  Kind kind = Kind::constant;
  Vec2 value{1.0, 0.0};   // constant field
  double omega = 1.0;     // rotation rate (rad/s), counterclockwise
  Point center{0.0, 0.0};

  static VelocityField constant(Vec2 a) { return {Kind::constant, a, 0.0, {0.0, 0.0}}; }
  static VelocityField rotation(double omega, Point center = {0.0, 0.0}) {
    return {Kind::rotation, {0.0, 0.0}, omega, center};
  }

  Vec2 operator()(const Point& x, double /*t*/) const {
    if (kind == Kind::constant) return value;
    return {-omega * (x[1] - center[1]), omega * (x[0] - center[0])};
  }
};

struct AdvectionModel {
  static constexpr std::size_t n_vars = 1;
  using State = std::array<double, 1>;

  VelocityField velocity;

  static std::vector<std::string> variable_names() { return {"u"}; }

  std::array<State, 2> flux(const State& u, const Point& x, double t) const {
    const Vec2 a = velocity(x, t);
    return {State{a[0] * u[0]}, State{a[1] * u[0]}};
  }
  State flux_axis(const State& u, int axis, const Point& x, double t) const {
    return {velocity(x, t)[axis] * u[0]};
  }
  double max_wave_speed(const State&, const Vec2& n, const Point& x, double t) const {
    const Vec2 a = velocity(x, t);
    return std::abs(a[0] * n[0] + a[1] * n[1]);
  }
  double axis_wave_speed(const State&, int axis, const Point& x, double t) const {
    return std::abs(velocity(x, t)[axis]);
  }
  double cfl_speed(const State&, const Point& x, double t) const {
    const Vec2 a = velocity(x, t);
    return std::hypot(a[0], a[1]);
  }
  void check(const State& u, int cell = -1) const {
    if (!std::isfinite(u[0])) throw StateError("advection: non-finite value", cell);
  }
};

struct IdealGasEos {
  double gamma = 1.4;
};

/// Conserved Euler state (rho, rho u, rho v, rho E).
using EulerState = std::array<double, 4>;

/// Conserved state from primitive (rho, u, v, p).
inline EulerState euler_from_primitive(double rho, double u, double v, double p,
                                       const IdealGasEos& eos = {}) {
  return {rho, rho * u, rho * v, p / (eos.gamma - 1.0) + 0.5 * rho * (u * u + v * v)};
}

/// p = (gamma - 1)(rho E - |m|^2 / (2 rho)), without admissibility checks.
inline double pressure_unchecked(const EulerState& w, const IdealGasEos& eos) {
  return (eos.gamma - 1.0) * (w[3] - 0.5 * (w[1] * w[1] + w[2] * w[2]) / w[0]);
}

inline bool admissible(const EulerState& w, const IdealGasEos& eos) {
  return w[0] > 0.0 && std::isfinite(w[0]) && std::isfinite(w[1]) && std::isfinite(w[2]) &&
         pressure_unchecked(w, eos) > 0.0 && std::isfinite(w[3]);
}

inline double pressure(const EulerState& w, const IdealGasEos& eos, int cell = -1) {
  if (!(w[0] > 0.0)) throw StateError("euler: non-positive density", cell);
  const double p = pressure_unchecked(w, eos);
  if (!(p > 0.0) || !std::isfinite(p)) throw StateError("euler: negative pressure", cell);
  return p;
}

inline double sound_speed(const EulerState& w, const IdealGasEos& eos) {
  return std::sqrt(eos.gamma * pressure(w, eos) / w[0]);
}

/// Flux columns {F_x, F_y} of the Euler system.
inline std::array<EulerState, 2> euler_flux(const EulerState& w, const IdealGasEos& eos) {
  const double p = pressure(w, eos);
  const double u = w[1] / w[0];
  const double v = w[2] / w[0];
  return {EulerState{w[1], w[1] * u + p, w[2] * u, (w[3] + p) * u},
          EulerState{w[2], w[1] * v, w[2] * v + p, (w[3] + p) * v}};
}

/// |u.n| + c.
inline double max_wave_speed(const EulerState& w, const IdealGasEos& eos, const Vec2& n) {
  const double un = (w[1] * n[0] + w[2] * n[1]) / w[0];
  return std::abs(un) + sound_speed(w, eos);
}

struct EulerModel {
  static constexpr std::size_t n_vars = 4;
  using State = EulerState;

  IdealGasEos eos;

  static std::vector<std::string> variable_names() { return {"rho", "rho_u", "rho_v", "rho_E"}; }

  std::array<State, 2> flux(const State& w, const Point&, double) const {
    return euler_flux(w, eos);
  }
  State flux_axis(const State& w, int axis, const Point&, double) const {
    const double p = pressure_unchecked(w, eos);
    const double un = w[1 + axis] / w[0];
    State f{w[1 + axis], w[1] * un, w[2] * un, (w[3] + p) * un};
    f[1 + axis] += p;
    return f;
  }
  double max_wave_speed(const State& w, const Vec2& n, const Point&, double) const {
    return filtdg::max_wave_speed(w, eos, n);
  }
  double axis_wave_speed(const State& w, int axis, const Point&, double) const {
    const double p = pressure_unchecked(w, eos);
    return std::abs(w[1 + axis] / w[0]) + std::sqrt(eos.gamma * p / w[0]);
  }
  double cfl_speed(const State& w, const Point&, double) const {
    return std::hypot(w[1], w[2]) / w[0] + sound_speed(w, eos);
  }
  void check(const State& w, int cell = -1) const {
    if (!admissible(w, eos)) {
      if (!(w[0] > 0.0) || !std::isfinite(w[0]))
        throw StateError("euler: non-positive density", cell);
      throw StateError("euler: negative pressure", cell);
    }
  }
};

}  // namespace filtdg
