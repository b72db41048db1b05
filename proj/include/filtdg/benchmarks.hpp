#pragma once

// Benchmark problem definitions: domain, mesh, model, boundary rule, initial
// condition and (where available) the exact or reference solution of the
// tracked variable.

#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>

#include "filtdg/boundary.hpp"
#include "filtdg/config.hpp"
#include "filtdg/mesh.hpp"
#include "filtdg/models.hpp"
#include "filtdg/reference.hpp"

namespace filtdg {

template <class Model>
struct Problem {
  using State = typename Model::State;
  Model model;
  BoundaryCondition<Model> bc;
  Rect domain;
  MeshOptions mesh_options;
  std::function<State(const Point&)> initial;
  /// Exact value of variable 0 at (x, t); empty when no reference exists.
  std::function<double(const Point&, double)> exact;

  std::shared_ptr<const QuadMesh> build_mesh(int nx, int ny) const {
    return std::make_shared<const QuadMesh>(QuadMesh::build_uniform(nx, ny, domain, mesh_options));
  }
};

// ---------------------------------------------------------------- initial data

/// Indicator of the disc of radius sigma about (1/6, 1/6).
inline double solid_body_initial(const Point& x) {
  const double sigma = 0.2;
  const double X = (x[0] - 1.0 / 6.0) / sigma;
  const double Y = (x[1] - 1.0 / 6.0) / sigma;
  return X * X + Y * Y <= 1.0 ? 1.0 : 0.0;
}

/// Solid body rotation solution: the initial datum rotated by omega t.
inline double solid_body_exact(const Point& x, double t, double omega = 1.0) {
  const double c = std::cos(omega * t);
  const double s = std::sin(omega * t);
  return solid_body_initial({c * x[0] + s * x[1], -s * x[0] + c * x[1]});
}

inline Primitive1D sod_initial(double x) {
  return x < 0.0 ? Primitive1D{1.0, 0.0, 1.0} : Primitive1D{0.125, 0.0, 0.1};
}

inline EulerState to_euler(const Primitive1D& w, const IdealGasEos& eos = {}) {
  return euler_from_primitive(w.rho, w.u, 0.0, w.p, eos);
}

inline EulerState explosion_initial(const Point& x, const ProblemParams& prm = {},
                                    const IdealGasEos& eos = {}) {
  const double r = std::hypot(x[0], x[1]);
  return r <= prm.explosion_radius ? euler_from_primitive(1.0, 0.0, 0.0, 1.0, eos)
                                   : euler_from_primitive(0.125, 0.0, 0.0,
                                                          prm.explosion_outer_pressure, eos);
}

/// Four-quadrant Riemann problem (configuration 4 of Kurganov-Tadmor).
inline EulerState riemann2d_initial(const Point& x, const IdealGasEos& eos = {}) {
  const bool right = x[0] > 0.5;
  const bool top = x[1] > 0.5;
  if (right && top) return euler_from_primitive(1.1, 0.0, 0.0, 1.1, eos);
  if (!right && top) return euler_from_primitive(0.5065, 0.8939, 0.0, 0.35, eos);
  if (!right && !top) return euler_from_primitive(1.1, 0.8939, 0.8939, 1.1, eos);
  return euler_from_primitive(0.5065, 0.0, 0.8939, 0.35, eos);
}

inline double custom_initial(const Point& x) {
  const double pi = std::numbers::pi;
  return std::sin(2.0 * pi * x[0]) * std::sin(2.0 * pi * x[1]);
}

// ---------------------------------------------------------------- problems

inline Problem<AdvectionModel> make_advection_problem(const RunConfig& cfg) {
  Problem<AdvectionModel> p;
  switch (cfg.benchmark) {
    case BenchmarkKind::solid_body_rotation:
      p.model.velocity = VelocityField::rotation(1.0);
      p.bc = BoundaryCondition<AdvectionModel>::inflow_zero();
      p.domain = {-0.5, 0.5, -0.5, 0.5};
      p.initial = [](const Point& x) { return AdvectionModel::State{solid_body_initial(x)}; };
      p.exact = [](const Point& x, double t) { return solid_body_exact(x, t); };
      break;
    case BenchmarkKind::custom: {
      const Vec2 a = cfg.problem.velocity;
      p.model.velocity = VelocityField::constant(a);
      p.bc = BoundaryCondition<AdvectionModel>::periodic();
      p.domain = {0.0, 1.0, 0.0, 1.0};
      p.mesh_options.periodic_x = p.mesh_options.periodic_y = true;
      p.initial = [](const Point& x) { return AdvectionModel::State{custom_initial(x)}; };
      p.exact = [a](const Point& x, double t) {
        return custom_initial({x[0] - a[0] * t, x[1] - a[1] * t});
      };
      break;
    }
    default:
      throw ConfigError("problem.benchmark: '" + to_string(cfg.benchmark) +
                        "' is not a scalar advection benchmark");
  }
  p.mesh_options.max_level = cfg.amr_enabled ? cfg.amr.max_level : 0;
  return p;
}

inline Problem<EulerModel> make_euler_problem(const RunConfig& cfg) {
  Problem<EulerModel> p;
  const IdealGasEos eos = p.model.eos;
  switch (cfg.benchmark) {
    case BenchmarkKind::isentropic_vortex: {
      VortexParams vp;
      vp.gamma = eos.gamma;
      vp.beta_vortex = cfg.problem.beta_vortex;
      vp.u_inf = cfg.problem.vortex_velocity;
      p.domain = vp.domain;
      p.mesh_options.periodic_x = p.mesh_options.periodic_y = true;
      p.bc = BoundaryCondition<EulerModel>::periodic();
      p.initial = [vp](const Point& x) { return vortex_exact(x, 0.0, vp); };
      p.exact = [vp](const Point& x, double t) { return vortex_exact(x, t, vp)[0]; };
      break;
    }
    case BenchmarkKind::sod: {
      // One cell high strip, periodic across it, Dirichlet data at x = +-0.5.
      const double h = 1.0 / cfg.nx;
      p.domain = {-0.5, 0.5, 0.0, h};
      p.mesh_options.periodic_y = true;
      p.bc = BoundaryCondition<EulerModel>::dirichlet(
          [eos](const Point& x, double) { return to_euler(sod_initial(x[0]), eos); });
      p.initial = [eos](const Point& x) { return to_euler(sod_initial(x[0]), eos); };
      p.exact = [](const Point& x, double t) {
        return t > 0.0 ? sod_exact(x[0], t).rho : sod_initial(x[0]).rho;
      };
      break;
    }
    case BenchmarkKind::explosion: {
      const ProblemParams prm = cfg.problem;
      p.domain = {-1.0, 1.0, -1.0, 1.0};
      p.bc = BoundaryCondition<EulerModel>::transmissive();
      p.initial = [prm, eos](const Point& x) { return explosion_initial(x, prm, eos); };
      RadialReference::Options opt;
      opt.t_final = cfg.time.t_final;
      opt.radius = prm.explosion_radius;
      opt.outer = {0.125, 0.0, prm.explosion_outer_pressure};
      opt.gamma = eos.gamma;
      auto oracle = std::make_shared<std::optional<RadialReference>>();
      // The oracle is built lazily on first use; beyond its outer radius the
      // flow is still at rest at T_f, so the undisturbed outer state is used.
      p.exact = [oracle, opt](const Point& x, double t) {
        if (!oracle->has_value()) oracle->emplace(opt);
        const double r = std::hypot(x[0], x[1]);
        if (r > opt.r_max) return opt.outer.rho;
        return (**oracle)(r, t).rho;
      };
      break;
    }
    case BenchmarkKind::riemann2d:
      p.domain = {0.0, 1.0, 0.0, 1.0};
      p.bc = BoundaryCondition<EulerModel>::transmissive();
      p.initial = [eos](const Point& x) { return riemann2d_initial(x, eos); };
      break;
    default:
      throw ConfigError("problem.benchmark: '" + to_string(cfg.benchmark) +
                        "' is not an Euler benchmark");
  }
  p.mesh_options.max_level = cfg.amr_enabled ? cfg.amr.max_level : 0;
  return p;
}

}  // namespace filtdg
