#pragma once

// First-order finite-volume (Q_0) substep on the leaf mesh of a nodal field.

#include <vector>

#include "filtdg/boundary.hpp"
#include "filtdg/field.hpp"
#include "filtdg/high_order_operator.hpp"

namespace filtdg {

/// Gauss-Lobatto weighted mean of every cell.
template <std::size_t NV>
CellAverageField<NV> project_to_averages(const NodalField<NV>& v) {
  CellAverageField<NV> a(v.mesh_ptr());
  const TensorBasis2D& basis = v.basis();
  for (std::size_t c = 0; c < v.n_cells(); ++c) {
    std::array<double, NV> s{};
    for (std::size_t n = 0; n < v.nodes_per_cell(); ++n) {
      const double w = 0.25 * basis.weight(n);
      for (std::size_t var = 0; var < NV; ++var) s[var] += w * v.at(c, n, var);
    }
    a[c] = s;
  }
  return a;
}

/// Every node of cell K carries a_K.
template <std::size_t NV>
NodalField<NV> broadcast_to_nodes(const CellAverageField<NV>& a, int degree) {
  NodalField<NV> out(a.mesh_ptr(), degree);
  for (std::size_t c = 0; c < a.n_cells(); ++c)
    for (std::size_t n = 0; n < out.nodes_per_cell(); ++n) out.set_state(c, n, a[c]);
  return out;
}

template <std::size_t NV>
NodalField<NV> broadcast_to_nodes(const CellAverageField<NV>& a,
                                  std::shared_ptr<const TensorBasis2D> basis) {
  NodalField<NV> out(a.mesh_ptr(), std::move(basis));
  for (std::size_t c = 0; c < a.n_cells(); ++c)
    for (std::size_t n = 0; n < out.nodes_per_cell(); ++n) out.set_state(c, n, a[c]);
  return out;
}

template <class Model>
class LowOrderOperator {
 public:
  using State = typename Model::State;
  static constexpr std::size_t NV = Model::n_vars;
  using Averages = CellAverageField<NV>;

  LowOrderOperator(Model model, BoundaryCondition<Model> bc)
      : model_(std::move(model)), bc_(std::move(bc)) {}

  const Model& model() const { return model_; }

  /// a_K - dt/|K| sum over (sub-)faces of F_hat . n |face|.
  Averages fv_substep(const Averages& a, double t, double dt) const {
    const QuadMesh& mesh = a.mesh();
    for (std::size_t c = 0; c < mesh.n_cells(); ++c) model_.check(a[c], static_cast<int>(c));
    const auto& faces = mesh.faces();
    std::vector<State> fhat(faces.size());
    for (std::size_t fi = 0; fi < faces.size(); ++fi) {
      const Face& f = faces[fi];
      const Point x = detail::face_point(f, 0.0);
      State wl = f.left >= 0 ? a[f.left] : State{};
      State wr = f.right >= 0 ? a[f.right] : State{};
      if (f.left < 0) wl = apply_boundary(bc_, wr, x, t, Vec2{-f.normal[0], -f.normal[1]}, model_);
      if (f.right < 0) wr = apply_boundary(bc_, wl, x, t, f.normal, model_);
      model_.check(wl, f.owner());
      model_.check(wr, f.owner());
      fhat[fi] = detail::rusanov_axis(wl, wr, f.axis, model_, x, t);
    }
    Averages out(a.mesh_ptr());
    for (std::size_t c = 0; c < mesh.n_cells(); ++c) {
      const Cell& cell = mesh.cell(c);
      State s = a[c];
      const double r = dt / cell.area();
      for (const CellFaceRef& ref : mesh.cell_faces(c)) {
        const Face& f = faces[ref.face];
        const double sign = (ref.side % 2 == 1) ? -1.0 : 1.0;
        for (std::size_t var = 0; var < NV; ++var)
          s[var] += sign * r * f.length * fhat[ref.face][var];
      }
      out[c] = s;
    }
    return out;
  }

  /// Projection, one FV substep, and broadcast back to the nodes of v.
  NodalField<NV> substep(const NodalField<NV>& v, double t, double dt) const {
    return broadcast_to_nodes(fv_substep(project_to_averages(v), t, dt), v.basis_ptr());
  }

 private:
  Model model_;
  BoundaryCondition<Model> bc_;
};

}  // namespace filtdg
