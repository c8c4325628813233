#pragma once

// Variational convergence bound for the canonical cluster expansion with a
// K-normalised one-particle measure.
//
//   F(u)  = max_{a>0} log[1+u(1-e^{-a})] / (e^a [1+u(1-e^{-a})])
//   G(u)  = 1 / F(u)
//   g(x)  = [1 - (1-e^{-x})^2]^{-1}
//   rho*  = K e^{-beta B} F(e^{-beta B} K) / C(beta)
//
// K is admissible when K <= g(a*(e^{-beta B} K)), a* the maximiser of F.

#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace cbound {

/// Objective maximised in F(u).
inline double f_objective(double u, double a) {
  if (!(a > 0.0)) throw std::invalid_argument("a must be positive");
  if (!(u >= 0.0)) throw std::invalid_argument("u must be non-negative");
  const double s = u * -std::expm1(-a);  // u (1 - e^{-a})
  return std::log1p(s) / (std::exp(a) * (1.0 + s));
}

struct FMaximization {
  double u = 0.0;
  double value = 0.0;
  double a_star = 0.0;
  int evaluations = 0;
  /// True for u = 0, where the objective vanishes identically and a_star is
  /// the small-u limit of the maximiser.
  bool limit_value = false;
};

struct MaximizeOptions {
  double tol = 1e-10;
  int grid_points = 128;
  double a_min = 1e-6;
  double a_max = 64.0;
};

/// Coarse geometric scan over [a_min, a_max] followed by golden-section
/// refinement of the best bracket down to width `tol`.
inline FMaximization maximize_F(double u, const MaximizeOptions& opt) {
  if (!(u >= 0.0)) throw std::invalid_argument("u must be non-negative");
  if (opt.grid_points < 3) throw std::invalid_argument("grid needs at least 3 points");
  FMaximization out;
  out.u = u;
  if (u == 0.0) {
    out.value = 0.0;
    out.a_star = std::numbers::ln2;
    out.limit_value = true;
    return out;
  }

  const int n = opt.grid_points;
  const double ratio = std::pow(opt.a_max / opt.a_min, 1.0 / (n - 1));
  std::vector<double> grid(n);
  int best = 0;
  double best_val = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    grid[i] = i == n - 1 ? opt.a_max : opt.a_min * std::pow(ratio, i);
    const double v = f_objective(u, grid[i]);
    ++out.evaluations;
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }

  double lo = grid[best > 0 ? best - 1 : 0];
  double hi = grid[best < n - 1 ? best + 1 : n - 1];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f_objective(u, x1);
  double f2 = f_objective(u, x2);
  out.evaluations += 2;
  while (hi - lo > opt.tol) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f_objective(u, x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f_objective(u, x1);
    }
    ++out.evaluations;
  }
  const double a = 0.5 * (lo + hi);
  const double va = f_objective(u, a);
  ++out.evaluations;
  // the refined point never loses to the grid
  if (va >= best_val) {
    out.a_star = a;
    out.value = va;
  } else {
    out.a_star = grid[best];
    out.value = best_val;
  }
  return out;
}

inline FMaximization maximize_F(double u, double tol = 1e-10) {
  MaximizeOptions opt;
  opt.tol = tol;
  return maximize_F(u, opt);
}

/// G(u) = 1/F(u); +inf at u = 0.
inline double eval_G(double u, double tol = 1e-10) {
  if (!(u >= 0.0)) throw std::invalid_argument("u must be non-negative");
  if (u == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / maximize_F(u, tol).value;
}

inline double g_function(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("g is defined for x > 0");
  // 1 - (1 - e^{-x})^2 = e^{-x} (2 - e^{-x}), stable for large x
  const double e = std::exp(-x);
  return 1.0 / (e * (2.0 - e));
}

struct Feasibility {
  bool feasible = false;
  double u = 0.0;
  double a_star = 0.0;
  double g_of_a_star = 0.0;
};

/// Admissibility of K at (beta, B): K <= g(a*(e^{-beta B} K)).
inline Feasibility feasibility(double K, double beta, double B, double tol = 1e-10) {
  if (!(K >= 1.0)) throw std::invalid_argument("K must be >= 1");
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (!(B >= 0.0)) throw std::invalid_argument("B must be non-negative");
  Feasibility out;
  out.u = std::exp(-beta * B) * K;
  out.a_star = maximize_F(out.u, tol).a_star;
  out.g_of_a_star = g_function(out.a_star);
  out.feasible = K <= out.g_of_a_star;
  return out;
}

namespace detail {

/// Bisects a predicate that is true at lo and false at hi; returns the last
/// point known to satisfy it. Throws if the bracket is not monotone.
template <class Pred>
double bisect_boundary(Pred&& pred, double lo, double hi, double tol) {
  if (!pred(lo) || pred(hi))
    throw std::logic_error("bisection bracket is not monotone");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (pred(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace detail

/// Largest K >= 1 admissible for every beta > 0, B >= 0.
///
/// a*(u) decreases in u and g increases, so the binding case is u = K
/// (beta B = 0); the boundary is bisected on [1, 2].
inline double find_K_star(double tol = 1e-4) {
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  auto pred = [](double K) { return K <= g_function(maximize_F(K).a_star); };
  return detail::bisect_boundary(pred, 1.0, 2.0, tol);
}

/// The u at which g(a*(u)) = level, for level in (1, g(a*(0+))).
/// Points with u below the returned value satisfy g(a*(u)) >= level.
inline double g_level_crossing(double level, double tol = 1e-10) {
  auto pred = [level](double u) { return g_function(maximize_F(u).a_star) >= level; };
  double hi = 1.0;
  while (pred(hi)) {
    hi *= 2.0;
    if (hi > 1e12) throw std::invalid_argument("level is never crossed");
  }
  return detail::bisect_boundary(pred, 1e-12, hi, tol);
}

inline double rho_star(double beta, double B, double C_beta, double K) {
  if (!(C_beta > 0.0)) throw std::invalid_argument("C_beta must be positive");
  if (!(K >= 1.0)) throw std::invalid_argument("K must be >= 1");
  const double boltz = std::exp(-beta * B);
  return K * boltz / C_beta * maximize_F(boltz * K).value;
}

/// Radius obtained without the K normalisation (K = 1).
inline double rho_star_known(double beta, double B, double C_beta) {
  return rho_star(beta, B, C_beta, 1.0);
}

struct BoundsReport {
  double beta = 0.0;
  double B = 0.0;
  double C_beta = 0.0;
  double K = 1.0;
  double u = 0.0;
  double F_u = 0.0;
  double a_star = 0.0;
  double g_of_a_star = 0.0;
  bool feasible = false;
  double rho_star = 0.0;
  double rho_star_1 = 0.0;
};

inline BoundsReport bounds_report(double beta, double B, double C_beta, double K) {
  if (!(C_beta > 0.0)) throw std::invalid_argument("C_beta must be positive");
  BoundsReport r;
  r.beta = beta;
  r.B = B;
  r.C_beta = C_beta;
  r.K = K;
  const Feasibility f = feasibility(K, beta, B);
  r.u = f.u;
  const FMaximization m = maximize_F(r.u);
  r.F_u = m.value;
  r.a_star = m.a_star;
  r.g_of_a_star = f.g_of_a_star;
  r.feasible = f.feasible;
  r.rho_star = K / (std::exp(beta * B) * C_beta) * r.F_u;
  r.rho_star_1 = rho_star_known(beta, B, C_beta);
  return r;
}

/// Largest admissible K in [1, K_max]. K F(e^{-beta B} K) increases with K,
/// so this maximises rho* over the admissible range.
inline BoundsReport optimize_K(double beta, double B, double C_beta, double K_max = 4.0,
                               double tol = 1e-10) {
  if (!(K_max >= 1.0)) throw std::invalid_argument("K_max must be >= 1");
  auto pred = [&](double K) { return feasibility(K, beta, B).feasible; };
  double K = 1.0;
  if (pred(K_max)) {
    K = K_max;
  } else if (K_max > 1.0) {
    K = detail::bisect_boundary(pred, 1.0, K_max, tol);
  }
  return bounds_report(beta, B, C_beta, K);
}

struct CurveRow {
  double u = 0.0;
  double F = 0.0;
  double a_star = 0.0;
  double g_a_star = 0.0;
};

/// One row (u, F(u), a*(u), g(a*(u))) per grid point, in grid order.
inline std::vector<CurveRow> emit_curves(std::span<const double> u_grid, double tol = 1e-10) {
  for (std::size_t i = 0; i < u_grid.size(); ++i) {
    if (!(u_grid[i] > 0.0)) throw std::invalid_argument("curve grid values must be positive");
    if (i > 0 && !(u_grid[i] > u_grid[i - 1]))
      throw std::invalid_argument("curve grid must be strictly ascending");
  }
  std::vector<CurveRow> rows;
  rows.reserve(u_grid.size());
  for (double u : u_grid) {
    const FMaximization m = maximize_F(u, tol);
    rows.push_back({u, m.value, m.a_star, g_function(m.a_star)});
  }
  return rows;
}

inline std::vector<double> linear_grid(double lo, double hi, int points) {
  if (points < 1) throw std::invalid_argument("points must be >= 1");
  if (points == 1) return {lo};
  if (!(hi > lo)) throw std::invalid_argument("u-max must exceed u-min");
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i) g[i] = lo + (hi - lo) * i / (points - 1);
  g.back() = hi;
  return g;
}

}  // namespace cbound
