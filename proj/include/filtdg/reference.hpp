#pragma once

// Reference solutions: exact 1D Riemann solver for the ideal-gas Euler
// equations, the isentropic vortex, and a radially symmetric 1D solver with
// geometric source terms for cylindrical blast problems.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "filtdg/errors.hpp"
#include "filtdg/mesh.hpp"
#include "filtdg/models.hpp"

namespace filtdg {

/// Primitive 1D state (rho, u, p).
struct Primitive1D {
  double rho = 1.0;
  double u = 0.0;
  double p = 1.0;
};

enum class WaveKind { shock, rarefaction };

struct RiemannStarState {
  double p_star = 0.0;
  double u_star = 0.0;
  double rho_star_left = 0.0;
  double rho_star_right = 0.0;
  WaveKind left_wave = WaveKind::rarefaction;
  WaveKind right_wave = WaveKind::shock;
  /// |f(p_star)| of the pressure function at the returned root.
  double residual = 0.0;
  int iterations = 0;
};

/// Exact solution of the Riemann problem with states left | right at x = x0.
class ExactRiemannSolver {
 public:
  ExactRiemannSolver(Primitive1D left, Primitive1D right, double gamma = 1.4, double x0 = 0.0)
      : l_(left), r_(right), g_(gamma), x0_(x0) {
    cl_ = std::sqrt(g_ * l_.p / l_.rho);
    cr_ = std::sqrt(g_ * r_.p / r_.rho);
    if (2.0 / (g_ - 1.0) * (cl_ + cr_) <= r_.u - l_.u)
      throw SolverError("riemann: initial data generate vacuum");
    solve();
  }

  const RiemannStarState& star() const { return star_; }
  const Primitive1D& left() const { return l_; }
  const Primitive1D& right() const { return r_; }
  double gamma() const { return g_; }

  /// f_K(p) and its derivative for side K.
  void side_function(const Primitive1D& s, double c, double p, double& f, double& df) const {
    if (p > s.p) {
      const double a = 2.0 / ((g_ + 1.0) * s.rho);
      const double b = (g_ - 1.0) / (g_ + 1.0) * s.p;
      const double q = std::sqrt(a / (p + b));
      f = (p - s.p) * q;
      df = q * (1.0 - 0.5 * (p - s.p) / (b + p));
    } else {
      const double z = (g_ - 1.0) / (2.0 * g_);
      f = 2.0 * c / (g_ - 1.0) * (std::pow(p / s.p, z) - 1.0);
      df = 1.0 / (s.rho * c) * std::pow(p / s.p, -(g_ + 1.0) / (2.0 * g_));
    }
  }

  /// Pressure function f(p) = f_L(p) + f_R(p) + (u_R - u_L).
  double pressure_function(double p) const {
    double fl = 0.0;
    double fr = 0.0;
    double d = 0.0;
    side_function(l_, cl_, p, fl, d);
    side_function(r_, cr_, p, fr, d);
    return fl + fr + (r_.u - l_.u);
  }

  /// Sample the similarity solution at (x, t), t > 0.
  Primitive1D sample(double x, double t) const {
    if (!(t > 0.0)) return x < x0_ ? l_ : r_;
    const double s = (x - x0_) / t;
    const double ps = star_.p_star;
    const double us = star_.u_star;
    if (s <= us) {
      if (ps > l_.p) {
        const double sl = l_.u - cl_ * std::sqrt((g_ + 1.0) / (2.0 * g_) * ps / l_.p +
                                                 (g_ - 1.0) / (2.0 * g_));
        return s <= sl ? l_ : Primitive1D{star_.rho_star_left, us, ps};
      }
      const double shl = l_.u - cl_;
      if (s <= shl) return l_;
      const double cml = cl_ * std::pow(ps / l_.p, (g_ - 1.0) / (2.0 * g_));
      const double stl = us - cml;
      if (s > stl) return {star_.rho_star_left, us, ps};
      const double k = 2.0 / (g_ + 1.0) + (g_ - 1.0) / ((g_ + 1.0) * cl_) * (l_.u - s);
      return {l_.rho * std::pow(k, 2.0 / (g_ - 1.0)),
              2.0 / (g_ + 1.0) * (cl_ + (g_ - 1.0) / 2.0 * l_.u + s),
              l_.p * std::pow(k, 2.0 * g_ / (g_ - 1.0))};
    }
    if (ps > r_.p) {
      return s >= shock_speed_right() ? r_ : Primitive1D{star_.rho_star_right, us, ps};
    }
    const double shr = r_.u + cr_;
    if (s >= shr) return r_;
    const double cmr = cr_ * std::pow(ps / r_.p, (g_ - 1.0) / (2.0 * g_));
    const double str = us + cmr;
    if (s <= str) return {star_.rho_star_right, us, ps};
    const double k = 2.0 / (g_ + 1.0) - (g_ - 1.0) / ((g_ + 1.0) * cr_) * (r_.u - s);
    return {r_.rho * std::pow(k, 2.0 / (g_ - 1.0)),
            2.0 / (g_ + 1.0) * (-cr_ + (g_ - 1.0) / 2.0 * r_.u + s),
            r_.p * std::pow(k, 2.0 * g_ / (g_ - 1.0))};
  }

  /// Speed of the right shock (valid when right_wave == shock).
  double shock_speed_right() const {
    return r_.u + cr_ * std::sqrt((g_ + 1.0) / (2.0 * g_) * star_.p_star / r_.p +
                                  (g_ - 1.0) / (2.0 * g_));
  }

  /// Max-norm residual of the Rankine-Hugoniot conditions across the right
  /// shock: |F(W*R) - F(W_R) - S (U*R - U_R)|.
  double rankine_hugoniot_residual() const {
    if (star_.right_wave != WaveKind::shock) return 0.0;
    const double s = shock_speed_right();
    auto cons = [&](double rho, double u, double p) {
      return std::array<double, 3>{rho, rho * u, p / (g_ - 1.0) + 0.5 * rho * u * u};
    };
    auto flux = [&](double rho, double u, double p) {
      const double e = p / (g_ - 1.0) + 0.5 * rho * u * u;
      return std::array<double, 3>{rho * u, rho * u * u + p, (e + p) * u};
    };
    const auto us = cons(star_.rho_star_right, star_.u_star, star_.p_star);
    const auto ur = cons(r_.rho, r_.u, r_.p);
    const auto fs = flux(star_.rho_star_right, star_.u_star, star_.p_star);
    const auto fr = flux(r_.rho, r_.u, r_.p);
    double res = 0.0;
    for (int i = 0; i < 3; ++i) res = std::max(res, std::abs(fs[i] - fr[i] - s * (us[i] - ur[i])));
    return res;
  }

 private:
  void solve() {
    const double z = (g_ - 1.0) / (2.0 * g_);
    const double du = r_.u - l_.u;
    // Two-rarefaction approximation as the initial guess.
    double p = std::pow((cl_ + cr_ - 0.5 * (g_ - 1.0) * du) /
                            (cl_ / std::pow(l_.p, z) + cr_ / std::pow(r_.p, z)),
                        1.0 / z);
    p = std::max(p, 1e-12);
    int it = 0;
    bool converged = false;
    for (; it < 100; ++it) {
      double fl = 0.0;
      double fr = 0.0;
      double dl = 0.0;
      double dr = 0.0;
      side_function(l_, cl_, p, fl, dl);
      side_function(r_, cr_, p, fr, dr);
      double pn = p - (fl + fr + du) / (dl + dr);
      if (pn < 0.0) pn = 0.5 * p;
      const double change = 2.0 * std::abs(pn - p) / (pn + p);
      p = pn;
      if (change < 1e-15) {
        converged = true;
        break;
      }
    }
    if (!converged && std::abs(pressure_function(p)) > 1e-12)
      throw SolverError("riemann: Newton iteration did not converge");
    double fl = 0.0;
    double fr = 0.0;
    double d = 0.0;
    side_function(l_, cl_, p, fl, d);
    side_function(r_, cr_, p, fr, d);
    star_.p_star = p;
    star_.u_star = 0.5 * (l_.u + r_.u) + 0.5 * (fr - fl);
    star_.iterations = it + 1;
    star_.residual = std::abs(fl + fr + du);
    const double gr = (g_ - 1.0) / (g_ + 1.0);
    star_.left_wave = p > l_.p ? WaveKind::shock : WaveKind::rarefaction;
    star_.right_wave = p > r_.p ? WaveKind::shock : WaveKind::rarefaction;
    star_.rho_star_left = p > l_.p
                              ? l_.rho * (p / l_.p + gr) / (gr * p / l_.p + 1.0)
                              : l_.rho * std::pow(p / l_.p, 1.0 / g_);
    star_.rho_star_right = p > r_.p
                               ? r_.rho * (p / r_.p + gr) / (gr * p / r_.p + 1.0)
                               : r_.rho * std::pow(p / r_.p, 1.0 / g_);
  }

  Primitive1D l_;
  Primitive1D r_;
  double g_;
  double x0_;
  double cl_ = 0.0;
  double cr_ = 0.0;
  RiemannStarState star_;
};

/// Sod's shock tube: (1, 0, 1) | (0.125, 0, 0.1) at x = 0.
inline const ExactRiemannSolver& sod_solver() {
  static const ExactRiemannSolver solver({1.0, 0.0, 1.0}, {0.125, 0.0, 0.1}, 1.4, 0.0);
  return solver;
}

inline Primitive1D sod_exact(double x, double t) { return sod_solver().sample(x, t); }

struct VortexParams {
  double gamma = 1.4;
  double beta_vortex = 5.0;
  Point center{0.0, 0.0};
  Vec2 u_inf{0.0, 0.0};
  double rho_inf = 1.0;
  double p_inf = 1.0;
  Rect domain{-5.0, 5.0, -5.0, 5.0};
};

/// Isentropic vortex advected by u_inf, with periodic wrap into the domain.
inline EulerState vortex_exact(const Point& x, double t, const VortexParams& prm = {}) {
  const double lx = prm.domain.width();
  const double ly = prm.domain.height();
  double dx = x[0] - prm.center[0] - prm.u_inf[0] * t;
  double dy = x[1] - prm.center[1] - prm.u_inf[1] * t;
  dx -= lx * std::round(dx / lx);
  dy -= ly * std::round(dy / ly);
  const double r2 = dx * dx + dy * dy;
  const double g = prm.gamma;
  const double b = prm.beta_vortex;
  const double pi = std::numbers::pi;
  const double t_inf = prm.p_inf / prm.rho_inf;
  const double dT = (1.0 - g) / (8.0 * g * pi * pi) * b * b * std::exp(1.0 - r2);
  const double tt = (t_inf + dT) / t_inf;
  const double rho = prm.rho_inf * std::pow(tt, 1.0 / (g - 1.0));
  const double p = prm.p_inf * std::pow(tt, g / (g - 1.0));
  const double f = b * std::exp(0.5 * (1.0 - r2)) / (2.0 * pi);
  const double u = prm.u_inf[0] - dy * f;
  const double v = prm.u_inf[1] + dx * f;
  return euler_from_primitive(rho, u, v, p, IdealGasEos{g});
}

/// Radially symmetric Euler solve with geometric source terms
///   U_t + F(U)_r = -(alpha / r) (rho u, rho u^2, (E + p) u)
/// by MUSCL-Hancock (minmod slopes, Rusanov flux), reflective at r = 0 and
/// transmissive at r_max. Profiles are stored at evenly spaced snapshot
/// times and interpolated linearly in r and t.
class RadialReference {
 public:
  struct Options {
    int cells = 10000;
    double r_max = 1.2;
    double t_final = 0.2;
    int snapshots = 40;
    double cfl = 0.4;
    double alpha = 1.0;  // 1 = cylindrical, 2 = spherical
    double gamma = 1.4;
    double radius = 0.5;
    Primitive1D inner{1.0, 0.0, 1.0};
    Primitive1D outer{0.125, 0.0, 0.1};
  };

  explicit RadialReference(Options opt) : opt_(opt) { run(); }

  const Options& options() const { return opt_; }
  double dr() const { return opt_.r_max / opt_.cells; }
  double cell_center(int i) const { return (i + 0.5) * dr(); }

  /// (rho, u_r, p) at radius r and time t.
  Primitive1D operator()(double r, double t) const {
    if (r < 0.0 || r > opt_.r_max || t < 0.0 || t > opt_.t_final * (1.0 + 1e-12))
      throw std::out_of_range("radial_reference: query outside the precomputed table");
    const double tau = std::min(t / opt_.t_final, 1.0) * opt_.snapshots;
    const int s0 = std::min(static_cast<int>(tau), opt_.snapshots - 1);
    const double wt = tau - s0;
    const Primitive1D a = at_snapshot(s0, r);
    if (wt == 0.0) return a;
    const Primitive1D b = at_snapshot(s0 + 1, r);
    return {a.rho + wt * (b.rho - a.rho), a.u + wt * (b.u - a.u), a.p + wt * (b.p - a.p)};
  }

  /// Profile (cell values) at the final time.
  const std::vector<Primitive1D>& final_profile() const { return snaps_.back(); }

 private:
  using U = std::array<double, 3>;

  Primitive1D at_snapshot(int s, double r) const {
    const auto& prof = snaps_[s];
    const double x = r / dr() - 0.5;
    if (x <= 0.0) return prof.front();
    const int i = std::min(static_cast<int>(x), opt_.cells - 2);
    const double w = std::min(x - i, 1.0);
    const Primitive1D& a = prof[i];
    const Primitive1D& b = prof[i + 1];
    return {a.rho + w * (b.rho - a.rho), a.u + w * (b.u - a.u), a.p + w * (b.p - a.p)};
  }

  U cons(const Primitive1D& w) const {
    return {w.rho, w.rho * w.u, w.p / (opt_.gamma - 1.0) + 0.5 * w.rho * w.u * w.u};
  }
  Primitive1D prim(const U& u) const {
    const double v = u[1] / u[0];
    return {u[0], v, (opt_.gamma - 1.0) * (u[2] - 0.5 * u[0] * v * v)};
  }
  U flux(const U& u) const {
    const Primitive1D w = prim(u);
    return {u[1], u[1] * w.u + w.p, (u[2] + w.p) * w.u};
  }
  double speed(const U& u) const {
    const Primitive1D w = prim(u);
    return std::abs(w.u) + std::sqrt(opt_.gamma * w.p / w.rho);
  }
  U source(const U& u, double r) const {
    const Primitive1D w = prim(u);
    const double f = -opt_.alpha / r;
    return {f * u[1], f * u[1] * w.u, f * (u[2] + w.p) * w.u};
  }
  static double minmod(double a, double b) {
    if (a * b <= 0.0) return 0.0;
    return std::abs(a) < std::abs(b) ? a : b;
  }

  void snapshot(const std::vector<U>& u) {
    std::vector<Primitive1D> p(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) p[i] = prim(u[i]);
    snaps_.push_back(std::move(p));
  }

  void run() {
    const int n = opt_.cells;
    const double h = dr();
    std::vector<U> u(n);
    for (int i = 0; i < n; ++i)
      u[i] = cons(cell_center(i) <= opt_.radius ? opt_.inner : opt_.outer);
    snaps_.clear();
    snapshot(u);
    std::vector<U> ext(n + 4);
    std::vector<U> ul(n + 2);
    std::vector<U> ur(n + 2);
    std::vector<U> fl(n + 1);
    double t = 0.0;
    for (int s = 1; s <= opt_.snapshots; ++s) {
      const double t_stop = opt_.t_final * s / opt_.snapshots;
      while (t < t_stop - 1e-15) {
        double smax = 0.0;
        for (const U& c : u) smax = std::max(smax, speed(c));
        double dt = opt_.cfl * h / smax;
        if (t + dt > t_stop) dt = t_stop - t;
        // Two ghost cells per side: reflective at r = 0, transmissive outside.
        for (int i = 0; i < n; ++i) ext[i + 2] = u[i];
        ext[1] = {u[0][0], -u[0][1], u[0][2]};
        ext[0] = {u[1][0], -u[1][1], u[1][2]};
        ext[n + 2] = u[n - 1];
        ext[n + 3] = u[n - 1];
        // Reconstruction and half-step evolution for cells -1 .. n.
        for (int i = 0; i < n + 2; ++i) {
          const U& c = ext[i + 1];
          U a;
          U b;
          for (int v = 0; v < 3; ++v) {
            const double d = minmod(c[v] - ext[i][v], ext[i + 2][v] - c[v]);
            a[v] = c[v] - 0.5 * d;
            b[v] = c[v] + 0.5 * d;
          }
          const U fa = flux(a);
          const U fb = flux(b);
          const double r = std::abs((i - 0.5) * h);  // centre of ext cell i+1
          const U src = source(c, std::max(r, 0.5 * h));
          for (int v = 0; v < 3; ++v) {
            const double upd = 0.5 * dt / h * (fa[v] - fb[v]) + 0.5 * dt * src[v];
            a[v] += upd;
            b[v] += upd;
          }
          ul[i] = a;
          ur[i] = b;
        }
        for (int f = 0; f <= n; ++f) {
          const U& a = ur[f];
          const U& b = ul[f + 1];
          const U fa = flux(a);
          const U fb = flux(b);
          const double lam = std::max(speed(a), speed(b));
          for (int v = 0; v < 3; ++v) fl[f][v] = 0.5 * (fa[v] + fb[v]) - 0.5 * lam * (b[v] - a[v]);
        }
        for (int i = 0; i < n; ++i) {
          U half;
          for (int v = 0; v < 3; ++v) half[v] = 0.5 * (ul[i + 1][v] + ur[i + 1][v]);
          const U src = source(half, cell_center(i));
          for (int v = 0; v < 3; ++v) u[i][v] += -dt / h * (fl[i + 1][v] - fl[i][v]) + dt * src[v];
          const Primitive1D w = prim(u[i]);
          if (!(w.rho > 0.0) || !(w.p > 0.0))
            throw SolverError("radial_reference: non-physical state in oracle solve");
        }
        t += dt;
      }
      snapshot(u);
    }
  }

  Options opt_;
  std::vector<std::vector<Primitive1D>> snaps_;
};

}  // namespace filtdg
