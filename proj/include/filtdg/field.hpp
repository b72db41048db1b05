#pragma once

// Nodal Q_k fields and per-cell averages on a QuadMesh.

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "filtdg/mesh.hpp"
#include "filtdg/tensor_basis.hpp"

namespace filtdg {

/// Per-cell nodal values of NV conserved variables. Storage is cell-major,
/// then node, then variable: length n_cells * (k+1)^2 * NV.
template <std::size_t NV>
class NodalField {
 public:
  static constexpr std::size_t n_vars = NV;
  using State = std::array<double, NV>;

  NodalField() = default;
  NodalField(std::shared_ptr<const QuadMesh> mesh, int degree)
      : mesh_(std::move(mesh)), basis_(std::make_shared<const TensorBasis2D>(degree)) {
    data_.assign(mesh_->n_cells() * basis_->n_nodes() * NV, 0.0);
  }
  NodalField(std::shared_ptr<const QuadMesh> mesh, std::shared_ptr<const TensorBasis2D> basis)
      : mesh_(std::move(mesh)), basis_(std::move(basis)) {
    data_.assign(mesh_->n_cells() * basis_->n_nodes() * NV, 0.0);
  }

  /// Nodal interpolant of f(x) -> State.
  template <class F>
  static NodalField sample(std::shared_ptr<const QuadMesh> mesh, int degree, F&& f) {
    NodalField out(std::move(mesh), degree);
    out.fill(f);
    return out;
  }

  template <class F>
  void fill(F&& f) {
    for (std::size_t c = 0; c < n_cells(); ++c)
      for (std::size_t n = 0; n < nodes_per_cell(); ++n) set_state(c, n, f(node_position(c, n)));
  }

  const QuadMesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const QuadMesh>& mesh_ptr() const { return mesh_; }
  const TensorBasis2D& basis() const { return *basis_; }
  const std::shared_ptr<const TensorBasis2D>& basis_ptr() const { return basis_; }
  int degree() const { return basis_->degree(); }
  std::size_t n_cells() const { return mesh_->n_cells(); }
  std::size_t nodes_per_cell() const { return basis_->n_nodes(); }
  std::size_t n_nodes() const { return n_cells() * nodes_per_cell(); }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  double& at(std::size_t cell, std::size_t node, std::size_t var) {
    return data_[(cell * nodes_per_cell() + node) * NV + var];
  }
  double at(std::size_t cell, std::size_t node, std::size_t var) const {
    return data_[(cell * nodes_per_cell() + node) * NV + var];
  }
  State state(std::size_t cell, std::size_t node) const {
    State s;
    const double* p = data_.data() + (cell * nodes_per_cell() + node) * NV;
    std::copy(p, p + NV, s.begin());
    return s;
  }
  void set_state(std::size_t cell, std::size_t node, const State& s) {
    std::copy(s.begin(), s.end(), data_.begin() + (cell * nodes_per_cell() + node) * NV);
  }

  Point node_position(std::size_t cell, std::size_t node) const {
    const Cell& c = mesh_->cell(cell);
    const auto& x = basis_->basis1d().nodes();
    const std::size_t n1 = basis_->n1d();
    return {c.center[0] + 0.5 * c.dx * x[node % n1], c.center[1] + 0.5 * c.dy * x[node / n1]};
  }

  /// Quadrature weight (including the cell Jacobian) of a node.
  double node_weight(std::size_t cell, std::size_t node) const {
    const Cell& c = mesh_->cell(cell);
    return basis_->weight(node) * 0.25 * c.dx * c.dy;
  }

  /// Quadrature integral of each variable over the domain.
  State integral() const {
    State s{};
    for (std::size_t c = 0; c < n_cells(); ++c)
      for (std::size_t n = 0; n < nodes_per_cell(); ++n) {
        const double w = node_weight(c, n);
        for (std::size_t v = 0; v < NV; ++v) s[v] += w * at(c, n, v);
      }
    return s;
  }

  double min(std::size_t var) const {
    double m = data_.at(var);
    for (std::size_t i = var; i < data_.size(); i += NV) m = std::min(m, data_[i]);
    return m;
  }
  double max(std::size_t var) const {
    double m = data_.at(var);
    for (std::size_t i = var; i < data_.size(); i += NV) m = std::max(m, data_[i]);
    return m;
  }

  bool same_layout(const NodalField& o) const {
    if (degree() != o.degree()) return false;
    if (mesh_ == o.mesh_) return true;
    // Separately built meshes with identical leaves are congruent as well.
    if (!mesh_ || !o.mesh_ || mesh_->n_cells() != o.mesh_->n_cells()) return false;
    const Rect& d = mesh_->domain();
    const Rect& e = o.mesh_->domain();
    if (d.x_min != e.x_min || d.x_max != e.x_max || d.y_min != e.y_min || d.y_max != e.y_max ||
        mesh_->nx() != o.mesh_->nx() || mesh_->ny() != o.mesh_->ny())
      return false;
    for (std::size_t c = 0; c < mesh_->n_cells(); ++c)
      if (!(mesh_->cell(c).key == o.mesh_->cell(c).key)) return false;
    return true;
  }

  /// this = a * this + b * other.
  void combine(double a, double b, const NodalField& other) {
    if (!same_layout(other)) throw std::logic_error("NodalField: mesh mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] = a * data_[i] + b * other.data_[i];
  }

 private:
  std::shared_ptr<const QuadMesh> mesh_;
  std::shared_ptr<const TensorBasis2D> basis_;
  std::vector<double> data_;
};

/// One value per leaf per variable.
template <std::size_t NV>
class CellAverageField {
 public:
  using State = std::array<double, NV>;

  CellAverageField() = default;
  explicit CellAverageField(std::shared_ptr<const QuadMesh> mesh)
      : mesh_(std::move(mesh)), values_(mesh_->n_cells(), State{}) {}

  const QuadMesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const QuadMesh>& mesh_ptr() const { return mesh_; }
  std::size_t n_cells() const { return values_.size(); }
  State& operator[](std::size_t c) { return values_[c]; }
  const State& operator[](std::size_t c) const { return values_[c]; }

  State integral() const {
    State s{};
    for (std::size_t c = 0; c < values_.size(); ++c)
      for (std::size_t v = 0; v < NV; ++v) s[v] += values_[c][v] * mesh_->cell(c).area();
    return s;
  }

 private:
  std::shared_ptr<const QuadMesh> mesh_;
  std::vector<State> values_;
};

}  // namespace filtdg
