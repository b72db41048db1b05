#pragma once

// Error norms against exact samplers, convergence rates, and run-time
// diagnostics (extrema, conservation drift).

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "filtdg/field.hpp"

namespace filtdg {

struct ErrorReport {
  double l1_rel = 0.0;
  double l2_rel = 0.0;
  double linf_rel = 0.0;
  double max_value = 0.0;
  double min_value = 0.0;
  double mass_drift_rel = 0.0;
  /// True when the exact field has zero norm and absolute norms were returned.
  bool absolute = false;
};

/// Scalar exact solution sampled at a point.
using ScalarSampler = std::function<double(const Point&)>;

/// Quadrature-weighted relative L1/L2/Linf errors of variable `var`, with the
/// nodal extrema of the numerical field.
template <std::size_t NV>
ErrorReport error_norms(const NodalField<NV>& numeric, std::size_t var,
                        const ScalarSampler& exact) {
  if (var >= NV) throw std::out_of_range("error_norms: variable index");
  double e1 = 0.0;
  double e2 = 0.0;
  double einf = 0.0;
  double n1 = 0.0;
  double n2 = 0.0;
  double ninf = 0.0;
  ErrorReport r;
  r.max_value = -std::numeric_limits<double>::infinity();
  r.min_value = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < numeric.n_cells(); ++c)
    for (std::size_t n = 0; n < numeric.nodes_per_cell(); ++n) {
      const double w = numeric.node_weight(c, n);
      const double u = numeric.at(c, n, var);
      const double e = exact(numeric.node_position(c, n));
      const double d = std::abs(u - e);
      e1 += w * d;
      e2 += w * d * d;
      einf = std::max(einf, d);
      n1 += w * std::abs(e);
      n2 += w * e * e;
      ninf = std::max(ninf, std::abs(e));
      r.max_value = std::max(r.max_value, u);
      r.min_value = std::min(r.min_value, u);
    }
  if (ninf == 0.0) {
    r.absolute = true;
    r.l1_rel = e1;
    r.l2_rel = std::sqrt(e2);
    r.linf_rel = einf;
  } else {
    r.l1_rel = e1 / n1;
    r.l2_rel = std::sqrt(e2 / n2);
    r.linf_rel = einf / ninf;
  }
  return r;
}

/// Absolute L2 distance between two congruent fields (variable `var`).
template <std::size_t NV>
double l2_distance(const NodalField<NV>& a, const NodalField<NV>& b, std::size_t var) {
  if (!a.same_layout(b)) throw std::invalid_argument("l2_distance: fields are not congruent");
  double s = 0.0;
  for (std::size_t c = 0; c < a.n_cells(); ++c)
    for (std::size_t n = 0; n < a.nodes_per_cell(); ++n) {
      const double d = a.at(c, n, var) - b.at(c, n, var);
      s += a.node_weight(c, n) * d * d;
    }
  return std::sqrt(s);
}

/// rate_i = log(e_{i-1} / e_i) / log(factor_i), i >= 1. `factors` holds
/// either one entry per error (the first is ignored) or one per pair.
inline std::vector<double> convergence_rate(const std::vector<double>& errors,
                                            const std::vector<double>& factors) {
  if (errors.size() < 2) throw std::invalid_argument("convergence_rate: need >= 2 errors");
  for (double e : errors)
    if (!(e > 0.0)) throw std::invalid_argument("convergence_rate: errors must be > 0");
  const std::size_t pairs = errors.size() - 1;
  const std::size_t off = factors.size() == errors.size() ? 1 : 0;
  if (factors.size() != pairs && factors.size() != errors.size())
    throw std::invalid_argument("convergence_rate: factor count mismatch");
  std::vector<double> rates(pairs);
  for (std::size_t i = 0; i < pairs; ++i) {
    const double f = factors[i + off];
    if (!(f > 0.0) || f == 1.0) throw std::invalid_argument("convergence_rate: bad mesh factor");
    rates[i] = std::log(errors[i] / errors[i + 1]) / std::log(f);
  }
  return rates;
}

/// Relative change of a conserved total; absolute when the reference is 0.
/// A positive `scale` (typically the L1 norm of the initial data) bounds the
/// denominator from below, so fields with zero mean report a drift relative
/// to their magnitude instead of to round-off.
inline double relative_drift(double initial, double current, double scale = 0.0) {
  const double d = current - initial;
  const double denom = std::max(std::abs(initial), scale);
  return denom != 0.0 ? d / denom : d;
}

/// Quadrature L1 norm of one variable.
template <std::size_t NV>
double l1_norm(const NodalField<NV>& f, std::size_t var) {
  if (var >= NV) throw std::out_of_range("l1_norm: variable index");
  double s = 0.0;
  for (std::size_t c = 0; c < f.n_cells(); ++c)
    for (std::size_t n = 0; n < f.nodes_per_cell(); ++n) s += f.node_weight(c, n) * std::abs(f.at(c, n, var));
  return s;
}

/// Running extrema of one variable over all nodes and all recorded steps.
class ExtremaTracker {
 public:
  template <std::size_t NV>
  void record(const NodalField<NV>& f, std::size_t var) {
    last_max_ = f.max(var);
    last_min_ = f.min(var);
    global_max_ = std::max(global_max_, last_max_);
    global_min_ = std::min(global_min_, last_min_);
  }
  double global_max() const { return global_max_; }
  double global_min() const { return global_min_; }
  double last_max() const { return last_max_; }
  double last_min() const { return last_min_; }

 private:
  double global_max_ = -std::numeric_limits<double>::infinity();
  double global_min_ = std::numeric_limits<double>::infinity();
  double last_max_ = 0.0;
  double last_min_ = 0.0;
};

}  // namespace filtdg
