#pragma once

// Gradient-based refinement indicator and the adapt cycle.
//
// Refinement transfers by interpolating the parent polynomial at the child
// nodes (exact for Q_k data). Coarsening transfers by the exact L2
// projection of the four child polynomials onto the parent Q_k space, which
// preserves every cell integral.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <memory>
#include <set>
#include <stdexcept>
#include <vector>

#include "filtdg/errors.hpp"
#include "filtdg/field.hpp"
#include "filtdg/mesh.hpp"
#include "filtdg/tensor_basis.hpp"

namespace filtdg {

struct AdaptPolicy {
  double refine_fraction = 0.2;
  double coarsen_fraction = 0.05;
  int max_level = 2;
  int interval = 5;

  void validate() const {
    if (!(refine_fraction > 0.0 && refine_fraction < 1.0))
      throw ConfigError("amr: refine_fraction must lie in (0, 1)");
    if (!(coarsen_fraction > 0.0 && coarsen_fraction < refine_fraction))
      throw ConfigError("amr: coarsen_fraction must lie in (0, refine_fraction)");
    if (interval < 1) throw ConfigError("amr: interval must be >= 1");
    if (max_level < 0 || max_level > QuadMesh::max_supported_level)
      throw ConfigError("amr: max_level out of range");
  }
};

/// eta_K = max over the nodes of K of |grad u_var|.
template <std::size_t NV>
std::vector<double> compute_indicator(const NodalField<NV>& field, std::size_t var) {
  const int k = field.degree();
  if (k < 1) throw std::invalid_argument("compute_indicator: needs degree >= 1");
  if (var >= NV) throw std::out_of_range("compute_indicator: variable index");
  const std::size_t n1 = field.basis().n1d();
  const SmallMatrix& D = field.basis().basis1d().diff_matrix();
  std::vector<double> eta(field.n_cells(), 0.0);
  for (std::size_t c = 0; c < field.n_cells(); ++c) {
    const Cell& cell = field.mesh().cell(c);
    double m = 0.0;
    for (std::size_t j = 0; j < n1; ++j)
      for (std::size_t i = 0; i < n1; ++i) {
        double gx = 0.0;
        double gy = 0.0;
        for (std::size_t a = 0; a < n1; ++a) {
          gx += D(i, a) * field.at(c, a + n1 * j, var);
          gy += D(j, a) * field.at(c, i + n1 * a, var);
        }
        gx *= 2.0 / cell.dx;
        gy *= 2.0 / cell.dy;
        m = std::max(m, std::hypot(gx, gy));
      }
    eta[c] = m;
  }
  return eta;
}

/// 1D transfer operators between a parent interval and its two halves.
class TransferOperators {
 public:
  explicit TransferOperators(const LobattoBasis1D& basis) {
    const std::size_t n = basis.size();
    const int k = basis.degree();
    std::vector<double> gx;
    std::vector<double> gw;
    gauss_legendre(k + 2, gx, gw);
    Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t g = 0; g < gx.size(); ++g)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t a = 0; a < n; ++a)
          mass(i, a) += gw[g] * basis.eval(i, gx[g]) * basis.eval(a, gx[g]);
    const auto lu = mass.partialPivLu();
    for (int s = 0; s < 2; ++s) {
      prolong_[s] = basis.child_interpolation(s);
      Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
      const double shift = s == 0 ? -1.0 : 1.0;
      for (std::size_t g = 0; g < gx.size(); ++g) {
        const double xp = 0.5 * (gx[g] + shift);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t q = 0; q < n; ++q)
            b(i, q) += 0.5 * gw[g] * basis.eval(i, xp) * basis.eval(q, gx[g]);
      }
      const Eigen::MatrixXd r = lu.solve(b);
      restrict_[s] = SmallMatrix(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t q = 0; q < n; ++q) restrict_[s](i, q) = r(i, q);
    }
  }

  /// P(q, a): child-s node q from parent node a.
  const SmallMatrix& prolong(int s) const { return prolong_[s]; }
  /// R(i, q): parent coefficient i from child-s node q (L2 projection).
  const SmallMatrix& restrict_to_parent(int s) const { return restrict_[s]; }

 private:
  std::array<SmallMatrix, 2> prolong_;
  std::array<SmallMatrix, 2> restrict_;
};

/// Transfer `field` onto `mesh`, which must differ from the field's mesh by
/// at most one level per cell (refinement or coarsening).
template <std::size_t NV>
NodalField<NV> transfer(const NodalField<NV>& field, std::shared_ptr<const QuadMesh> mesh) {
  const QuadMesh& old = field.mesh();
  const std::size_t n1 = field.basis().n1d();
  const std::size_t nn = field.nodes_per_cell();
  const TransferOperators ops(field.basis().basis1d());
  NodalField<NV> out(mesh, field.basis_ptr());
  for (std::size_t c = 0; c < mesh->n_cells(); ++c) {
    const CellKey key = mesh->cell(c).key;
    const int same = old.find(key);
    if (same >= 0) {
      for (std::size_t n = 0; n < nn; ++n) out.set_state(c, n, field.state(same, n));
      continue;
    }
    const int parent = key.level > 0 ? old.find(key.parent()) : -1;
    if (parent >= 0) {
      const SmallMatrix& px = ops.prolong(static_cast<int>(key.ix & 1));
      const SmallMatrix& py = ops.prolong(static_cast<int>(key.iy & 1));
      for (std::size_t j = 0; j < n1; ++j)
        for (std::size_t i = 0; i < n1; ++i) {
          std::array<double, NV> s{};
          for (std::size_t b = 0; b < n1; ++b)
            for (std::size_t a = 0; a < n1; ++a) {
              const double w = px(i, a) * py(j, b);
              if (w == 0.0) continue;
              for (std::size_t v = 0; v < NV; ++v) s[v] += w * field.at(parent, a + n1 * b, v);
            }
          out.set_state(c, i + n1 * j, s);
        }
      continue;
    }
    std::vector<std::array<double, NV>> acc(nn, std::array<double, NV>{});
    for (int ch = 0; ch < 4; ++ch) {
      const CellKey ck = key.child(ch);
      const int id = old.find(ck);
      if (id < 0) throw std::logic_error("transfer: cell is neither kept, refined nor coarsened");
      const SmallMatrix& rx = ops.restrict_to_parent(ch & 1);
      const SmallMatrix& ry = ops.restrict_to_parent(ch >> 1);
      for (std::size_t j = 0; j < n1; ++j)
        for (std::size_t i = 0; i < n1; ++i)
          for (std::size_t r = 0; r < n1; ++r)
            for (std::size_t q = 0; q < n1; ++q) {
              const double w = rx(i, q) * ry(j, r);
              for (std::size_t v = 0; v < NV; ++v)
                acc[i + n1 * j][v] += w * field.at(id, q + n1 * r, v);
            }
    }
    for (std::size_t n = 0; n < nn; ++n) out.set_state(c, n, acc[n]);
  }
  return out;
}

struct AdaptMarks {
  std::set<int> refine;
  std::set<int> coarsen;
};

/// Refine where eta > refine_fraction * max eta, coarsen sibling quadruples
/// where all eta < coarsen_fraction * max eta.
inline AdaptMarks mark_cells(const QuadMesh& mesh, const std::vector<double>& eta,
                             const AdaptPolicy& policy) {
  AdaptMarks marks;
  const double emax = eta.empty() ? 0.0 : *std::max_element(eta.begin(), eta.end());
  if (!(emax > 0.0)) return marks;
  for (std::size_t c = 0; c < eta.size(); ++c) {
    const int level = mesh.cell(c).key.level;
    if (eta[c] > policy.refine_fraction * emax && level < policy.max_level)
      marks.refine.insert(static_cast<int>(c));
    else if (eta[c] < policy.coarsen_fraction * emax && level > 0)
      marks.coarsen.insert(static_cast<int>(c));
  }
  return marks;
}

template <std::size_t NV>
struct AdaptResult {
  NodalField<NV> field;
  std::size_t refined = 0;
  std::size_t coarsened = 0;
};

/// One adapt cycle: mark, refine (with 2:1 closure), coarsen, transfer.
template <std::size_t NV>
AdaptResult<NV> adapt(const NodalField<NV>& field, const AdaptPolicy& policy,
                      const std::vector<double>& eta) {
  policy.validate();
  const QuadMesh& mesh = field.mesh();
  if (mesh.periodic()) throw ConfigError("amr: adaptive refinement requires a non-periodic mesh");
  if (eta.size() != mesh.n_cells()) throw std::invalid_argument("adapt: indicator size mismatch");
  const AdaptMarks marks = mark_cells(mesh, eta, policy);
  AdaptResult<NV> result{field, 0, 0};
  if (marks.refine.empty() && marks.coarsen.empty()) return result;

  std::vector<CellKey> coarsen_keys;
  for (int c : marks.coarsen) coarsen_keys.push_back(mesh.cell(c).key);

  if (!marks.refine.empty()) {
    auto refined = std::make_shared<const QuadMesh>(mesh.refine(marks.refine));
    result.refined = refined->n_cells() - mesh.n_cells();
    result.field = transfer(field, refined);
  }
  if (!coarsen_keys.empty()) {
    const QuadMesh& cur = result.field.mesh();
    std::set<int> cmarks;
    for (const CellKey& k : coarsen_keys) {
      const int id = cur.find(k);
      if (id >= 0) cmarks.insert(id);
    }
    auto coarse = std::make_shared<const QuadMesh>(cur.coarsen(cmarks));
    if (coarse->n_cells() != cur.n_cells()) {
      result.coarsened = cur.n_cells() - coarse->n_cells();
      result.field = transfer(result.field, coarse);
    }
  }
  return result;
}

}  // namespace filtdg
