#pragma once

#include <functional>

#include "filtdg/errors.hpp"
#include "filtdg/mesh.hpp"

namespace filtdg {

/// Rule producing the exterior trace on boundary faces.
template <class Model>
struct BoundaryCondition {
  using State = typename Model::State;
  enum class Kind { periodic, transmissive, dirichlet, inflow_zero };

  Kind kind = Kind::transmissive;
  std::function<State(const Point&, double)> dirichlet_state;

  static BoundaryCondition periodic() { return {Kind::periodic, {}}; }
  static BoundaryCondition transmissive() { return {Kind::transmissive, {}}; }
  static BoundaryCondition inflow_zero() { return {Kind::inflow_zero, {}}; }
  static BoundaryCondition dirichlet(std::function<State(const Point&, double)> f) {
    return {Kind::dirichlet, std::move(f)};
  }
};

/// Exterior state at boundary point x with outward normal n.
template <class Model>
typename Model::State apply_boundary(const BoundaryCondition<Model>& bc,
                                     const typename Model::State& interior, const Point& x,
                                     double t, const Vec2& /*n*/, const Model& /*model*/) {
  using Kind = typename BoundaryCondition<Model>::Kind;
  switch (bc.kind) {
    case Kind::transmissive: return interior;
    case Kind::dirichlet:
      if (!bc.dirichlet_state) throw ConfigError("dirichlet boundary without a state function");
      return bc.dirichlet_state(x, t);
    case Kind::inflow_zero:
      if constexpr (Model::n_vars == 1) {
        return typename Model::State{};
      } else {
        throw ConfigError("inflow_zero boundary is only defined for scalar advection");
      }
    case Kind::periodic:
      throw ConfigError("periodic boundary rule on a boundary face: mesh is not periodic");
  }
  throw ConfigError("unknown boundary rule");
}

}  // namespace filtdg
