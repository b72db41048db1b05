#pragma once

// Nodal DG forward-Euler substep u = v + dt R(v).
//
// R is the collocated weak-form residual on Gauss-Lobatto nodes:
//   M du/dt = sum_q W_q F(u_q) . grad(phi)(x_q) - sum_faces int F_hat phi
// with a diagonal mass matrix. On a coarse/fine interface the face integral
// is split into two sub-faces, each integrated with the fine side's nodes;
// the coarse trace is interpolated to those nodes and the coarse side
// collects the same flux values, so the scheme stays conservative.

#include <array>
#include <cmath>
#include <vector>

#include "filtdg/boundary.hpp"
#include "filtdg/errors.hpp"
#include "filtdg/field.hpp"
#include "filtdg/mesh.hpp"
#include "filtdg/tensor_basis.hpp"

namespace filtdg {

/// Rusanov (local Lax-Friedrichs) flux across a face with unit normal n
/// pointing from wL to wR.
template <class Model>
typename Model::State rusanov_flux(const typename Model::State& wL,
                                   const typename Model::State& wR, const Vec2& n,
                                   const Model& model, const Point& x = {0.0, 0.0},
                                   double t = 0.0) {
  model.check(wL);
  model.check(wR);
  const auto fl = model.flux(wL, x, t);
  const auto fr = model.flux(wR, x, t);
  const double lambda =
      std::max(model.max_wave_speed(wL, n, x, t), model.max_wave_speed(wR, n, x, t));
  typename Model::State out{};
  for (std::size_t v = 0; v < Model::n_vars; ++v) {
    const double fnl = fl[0][v] * n[0] + fl[1][v] * n[1];
    const double fnr = fr[0][v] * n[0] + fr[1][v] * n[1];
    out[v] = 0.5 * (fnl + fnr) - 0.5 * lambda * (wR[v] - wL[v]);
  }
  return out;
}

namespace detail {

/// Rusanov flux along +e_axis, states assumed admissible.
template <class Model>
inline typename Model::State rusanov_axis(const typename Model::State& wL,
                                          const typename Model::State& wR, int axis,
                                          const Model& model, const Point& x, double t) {
  const auto fl = model.flux_axis(wL, axis, x, t);
  const auto fr = model.flux_axis(wR, axis, x, t);
  const double lambda = std::max(model.axis_wave_speed(wL, axis, x, t),
                                 model.axis_wave_speed(wR, axis, x, t));
  typename Model::State out;
  for (std::size_t v = 0; v < Model::n_vars; ++v)
    out[v] = 0.5 * (fl[v] + fr[v]) - 0.5 * lambda * (wR[v] - wL[v]);
  return out;
}

/// Node index of the q-th node along the face on `side` of a cell.
inline std::size_t face_node(int side, std::size_t q, std::size_t n1) {
  switch (side) {
    case x_minus: return q * n1;
    case x_plus: return (n1 - 1) + q * n1;
    case y_minus: return q;
    default: return q + (n1 - 1) * n1;
  }
}

/// Point q of a face using Gauss-Lobatto positions along the tangent.
inline Point face_point(const Face& f, double xi) {
  const double s = 0.5 * (xi + 1.0) * f.length;
  return f.axis == 0 ? Point{f.origin[0], f.origin[1] + s} : Point{f.origin[0] + s, f.origin[1]};
}

}  // namespace detail

template <class Model>
class HighOrderOperator {
 public:
  using State = typename Model::State;
  static constexpr std::size_t NV = Model::n_vars;
  using Field = NodalField<NV>;

  HighOrderOperator(Model model, BoundaryCondition<Model> bc)
      : model_(std::move(model)), bc_(std::move(bc)) {}

  const Model& model() const { return model_; }
  const BoundaryCondition<Model>& boundary() const { return bc_; }

  /// u = v + dt R(v).
  Field substep(const Field& v, double t, double dt) const {
    Field u = residual(v, t);
    auto ud = u.data();
    auto vd = v.data();
    for (std::size_t i = 0; i < ud.size(); ++i) ud[i] = vd[i] + dt * ud[i];
    return u;
  }

  /// Time derivative R(v) at every node.
  Field residual(const Field& v, double t) const {
    const QuadMesh& mesh = v.mesh();
    const TensorBasis2D& basis = v.basis();
    const int k = basis.degree();
    if (k < 1) throw std::invalid_argument("HighOrderOperator: degree must be >= 1");
    const std::size_t n1 = basis.n1d();
    const std::size_t nn = basis.n_nodes();
    const auto& xi = basis.basis1d().nodes();
    const auto& w1 = basis.basis1d().weights();
    const SmallMatrix& D = basis.basis1d().diff_matrix();
    const std::array<SmallMatrix, 2> half = {basis.basis1d().child_interpolation(0),
                                             basis.basis1d().child_interpolation(1)};

    // Node admissibility.
    for (std::size_t c = 0; c < mesh.n_cells(); ++c)
      for (std::size_t n = 0; n < nn; ++n) model_.check(v.state(c, n), static_cast<int>(c));

    // Face fluxes along +e_axis at the (fine-side) face nodes.
    const auto& faces = mesh.faces();
    std::vector<State> fhat(faces.size() * n1);
    for (std::size_t fi = 0; fi < faces.size(); ++fi) {
      const Face& f = faces[fi];
      for (std::size_t q = 0; q < n1; ++q) {
        const Point x = detail::face_point(f, xi[q]);
        State wl;
        State wr;
        if (f.left >= 0) wl = trace(v, f, f.left, 2 * f.axis + 1, f.coarse_side == 0, q, half);
        if (f.right >= 0) wr = trace(v, f, f.right, 2 * f.axis, f.coarse_side == 1, q, half);
        if (f.left < 0) wl = apply_boundary(bc_, wr, x, t, Vec2{-f.normal[0], -f.normal[1]}, model_);
        if (f.right < 0) wr = apply_boundary(bc_, wl, x, t, f.normal, model_);
        model_.check(wl, f.owner());
        model_.check(wr, f.owner());
        fhat[fi * n1 + q] = detail::rusanov_axis(wl, wr, f.axis, model_, x, t);
      }
    }

    Field r(v.mesh_ptr(), v.basis_ptr());
    std::vector<State> fx(nn);
    std::vector<State> fy(nn);
    std::vector<State> acc(nn);
    for (std::size_t c = 0; c < mesh.n_cells(); ++c) {
      const Cell& cell = mesh.cell(c);
      for (std::size_t n = 0; n < nn; ++n) {
        const auto fl = model_.flux(v.state(c, n), v.node_position(c, n), t);
        fx[n] = fl[0];
        fy[n] = fl[1];
        acc[n] = State{};
      }
      // Volume term.
      const double hx = 0.5 * cell.dy;  // (dy/2) for the x-derivative term
      const double hy = 0.5 * cell.dx;
      for (std::size_t j = 0; j < n1; ++j)
        for (std::size_t i = 0; i < n1; ++i) {
          State& a = acc[i + n1 * j];
          for (std::size_t m = 0; m < n1; ++m) {
            const double cx = w1[m] * w1[j] * hx * D(m, i);
            const double cy = w1[i] * w1[m] * hy * D(m, j);
            const State& gx = fx[m + n1 * j];
            const State& gy = fy[i + n1 * m];
            for (std::size_t var = 0; var < NV; ++var) a[var] += cx * gx[var] + cy * gy[var];
          }
        }
      // Face terms.
      for (const CellFaceRef& ref : mesh.cell_faces(c)) {
        const Face& f = faces[ref.face];
        const double sign = (ref.side % 2 == 1) ? -1.0 : 1.0;  // outward = +e on the + side
        const double scale = 0.5 * f.length;
        const bool coarse = f.hanging() && ((ref.side % 2 == 1) == (f.coarse_side == 0));
        const State* fh = fhat.data() + ref.face * n1;
        if (!coarse) {
          for (std::size_t q = 0; q < n1; ++q) {
            State& a = acc[detail::face_node(ref.side, q, n1)];
            const double s = sign * w1[q] * scale;
            for (std::size_t var = 0; var < NV; ++var) a[var] += s * fh[q][var];
          }
        } else {
          const SmallMatrix& P = half[f.sub];
          for (std::size_t j = 0; j < n1; ++j) {
            State& a = acc[detail::face_node(ref.side, j, n1)];
            for (std::size_t q = 0; q < n1; ++q) {
              const double s = sign * P(q, j) * w1[q] * scale;
              for (std::size_t var = 0; var < NV; ++var) a[var] += s * fh[q][var];
            }
          }
        }
      }
      const double jac = 0.25 * cell.dx * cell.dy;
      for (std::size_t n = 0; n < nn; ++n) {
        const double inv_mass = 1.0 / (basis.weight(n) * jac);
        State s;
        for (std::size_t var = 0; var < NV; ++var) s[var] = acc[n][var] * inv_mass;
        r.set_state(c, n, s);
      }
    }
    return r;
  }

 private:
  /// Trace of `cell` on face f at fine-side node q.
  State trace(const Field& v, const Face& f, int cell, int side, bool is_coarse, std::size_t q,
              const std::array<SmallMatrix, 2>& half) const {
    const std::size_t n1 = v.basis().n1d();
    if (!f.hanging() || !is_coarse) return v.state(cell, detail::face_node(side, q, n1));
    const SmallMatrix& P = half[f.sub];
    State s{};
    for (std::size_t j = 0; j < n1; ++j) {
      const State sj = v.state(cell, detail::face_node(side, j, n1));
      for (std::size_t var = 0; var < NV; ++var) s[var] += P(q, j) * sj[var];
    }
    return s;
  }

  Model model_;
  BoundaryCondition<Model> bc_;
};

}  // namespace filtdg
