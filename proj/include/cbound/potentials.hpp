#pragma once

// Pair-potential catalog and the scalar quantities derived from it:
// stability constant, temperedness integral, Mayer f-function and the
// periodic (image-summed) potential.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cbound {

/// Interaction energy that may be +infinity (hard-core overlap).
///
/// Infinity is carried as a flag, never as an IEEE overflow, so that
/// Boltzmann weights of overlapping configurations are exactly zero.
class Energy {
 public:
  constexpr Energy() = default;
  constexpr explicit Energy(double value) : value_(value) {}

  static constexpr Energy infinite() {
    Energy e;
    e.infinite_ = true;
    return e;
  }

  constexpr bool is_infinite() const { return infinite_; }

  /// Finite value; +inf if the energy is infinite.
  constexpr double value() const {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
  }

  constexpr Energy& operator+=(Energy other) {
    infinite_ = infinite_ || other.infinite_;
    value_ = infinite_ ? 0.0 : value_ + other.value_;
    return *this;
  }
  friend constexpr Energy operator+(Energy a, Energy b) { return a += b; }

  friend constexpr bool operator==(Energy a, Energy b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

/// e^{-beta E}; exactly zero for infinite energy.
inline double boltzmann_factor(double beta, Energy e) {
  return e.is_infinite() ? 0.0 : std::exp(-beta * e.value());
}

enum class PotentialKind { HardCore, HardRod, SquareWell };

inline const char* to_string(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::HardCore: return "hardcore";
    case PotentialKind::HardRod: return "hardrod";
    case PotentialKind::SquareWell: return "squarewell";
  }
  return "unknown";
}

/// Closed catalog of finite-range pair potentials.
///
/// HardCore / HardRod: +inf for |x| < sigma, 0 otherwise.
/// SquareWell: +inf for |x| < sigma, -epsilon for sigma <= |x| < sigma + well_width,
/// 0 beyond.
struct PairPotential {
  PotentialKind kind = PotentialKind::HardCore;
  double sigma = 1.0;
  double epsilon = 0.0;
  double well_width = 0.0;
  int dimension = 3;

  static PairPotential hard_core(double sigma, int dimension);
  static PairPotential hard_rod(double sigma);
  static PairPotential square_well(double sigma, double epsilon, double well_width,
                                   int dimension);

  /// Finite range r_V: V(x) = 0 for |x| >= range().
  double range() const {
    return kind == PotentialKind::SquareWell ? sigma + well_width : sigma;
  }

  bool purely_repulsive() const {
    return kind != PotentialKind::SquareWell || epsilon == 0.0;
  }

  friend bool operator==(const PairPotential&, const PairPotential&) = default;
};

/// Throws std::invalid_argument naming the violated invariant.
inline void validate(const PairPotential& p) {
  if (!(p.sigma > 0.0) || !std::isfinite(p.sigma))
    throw std::invalid_argument("sigma must be positive");
  if (p.dimension < 1) throw std::invalid_argument("dimension must be >= 1");
  if (p.kind == PotentialKind::HardRod && p.dimension != 1)
    throw std::invalid_argument("hardrod requires dimension 1");
  if (p.kind == PotentialKind::SquareWell) {
    if (!(p.epsilon >= 0.0) || !std::isfinite(p.epsilon))
      throw std::invalid_argument("epsilon must be non-negative");
    if (!(p.well_width > 0.0) || !std::isfinite(p.well_width))
      throw std::invalid_argument("width must be positive");
  }
}

inline PairPotential PairPotential::hard_core(double sigma, int dimension) {
  PairPotential p{PotentialKind::HardCore, sigma, 0.0, 0.0, dimension};
  validate(p);
  return p;
}

inline PairPotential PairPotential::hard_rod(double sigma) {
  PairPotential p{PotentialKind::HardRod, sigma, 0.0, 0.0, 1};
  validate(p);
  return p;
}

inline PairPotential PairPotential::square_well(double sigma, double epsilon,
                                                double well_width, int dimension) {
  PairPotential p{PotentialKind::SquareWell, sigma, epsilon, well_width, dimension};
  validate(p);
  return p;
}

/// Inverse temperature, stability constant and temperedness integral.
struct ThermoParams {
  double beta = 1.0;
  double B = 0.0;
  double C_beta = 0.0;

  void validate() const {
    if (!(beta > 0.0) || !std::isfinite(beta))
      throw std::invalid_argument("beta must be positive");
    if (!(B >= 0.0) || !std::isfinite(B))
      throw std::invalid_argument("stability constant must be non-negative");
    if (!(C_beta >= 0.0) || !std::isfinite(C_beta))
      throw std::invalid_argument("temperedness integral must be finite and non-negative");
  }
};

/// Volume of the unit ball in R^d.
inline double unit_ball_volume(int d) {
  const double half = 0.5 * d;
  return std::pow(std::numbers::pi, half) / std::tgamma(half + 1.0);
}

inline double norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

/// V as a function of the distance |x|.
inline Energy evaluate_radial(const PairPotential& p, double r) {
  if (r < p.sigma) return Energy::infinite();
  if (p.kind == PotentialKind::SquareWell && r < p.sigma + p.well_width)
    return Energy(-p.epsilon);
  return Energy(0.0);
}

inline void check_dimension(const PairPotential& p, std::span<const double> x) {
  if (static_cast<int>(x.size()) != p.dimension)
    throw std::invalid_argument("displacement has dimension " + std::to_string(x.size()) +
                                ", potential expects " + std::to_string(p.dimension));
}

inline Energy evaluate(const PairPotential& p, std::span<const double> x) {
  check_dimension(p, x);
  return evaluate_radial(p, norm(x));
}

/// e^{-beta V} - 1 from an already-evaluated energy.
inline double mayer_f(double beta, Energy e) {
  if (e.is_infinite()) return -1.0;
  return std::expm1(-beta * e.value());
}

inline double mayer_f(const PairPotential& p, double beta, std::span<const double> x) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  return mayer_f(beta, evaluate(p, x));
}

/// C(beta) = \int (1 - e^{-beta |V(x)|}) dx, closed form for the catalog.
inline double temperedness_integral(const PairPotential& p, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  const double omega = unit_ball_volume(p.dimension);
  const int d = p.dimension;
  double c = omega * std::pow(p.sigma, d);
  if (p.kind == PotentialKind::SquareWell) {
    const double shell = omega * (std::pow(p.sigma + p.well_width, d) - std::pow(p.sigma, d));
    c += shell * -std::expm1(-beta * p.epsilon);
  }
  return c;
}

/// Upper bound on the number of particles that can sit in the attractive
/// shell [sigma, sigma + width) of a given particle while keeping mutual
/// distances >= sigma.
///
/// d = 1: exact, ceil(width / sigma) per side.
/// d >= 2: volume packing, balls of radius sigma/2 around every neighbour are
/// disjoint from each other and from the central one, and all lie inside the
/// ball of radius sigma + width + sigma/2.
inline std::int64_t well_neighbor_bound(const PairPotential& p) {
  if (p.kind != PotentialKind::SquareWell) return 0;
  if (p.dimension == 1) return 2 * static_cast<std::int64_t>(std::ceil(p.well_width / p.sigma));
  const double ratio = (2.0 * p.well_width + 3.0 * p.sigma) / p.sigma;
  return static_cast<std::int64_t>(std::floor(std::pow(ratio, p.dimension))) - 1;
}

/// Certified stability constant B with \sum_{i<j} V >= -B N.
inline double stability_constant(const PairPotential& p) {
  if (p.kind != PotentialKind::SquareWell) return 0.0;
  return p.epsilon * static_cast<double>(well_neighbor_bound(p)) / 2.0;
}

/// Wraps a coordinate into (-L/2, L/2].
inline double minimum_image(double x, double L) {
  double y = x - L * std::round(x / L);
  if (y <= -0.5 * L) y += L;
  if (y > 0.5 * L) y -= L;
  return y;
}

struct PeriodicEnergy {
  Energy energy;
  /// Set when L <= 2 r_V: more than one image can fall inside the range.
  bool images_overlap = false;
};

/// V^per(x) = sum_n V(x + nL) over the lattice of image shifts.
///
/// Exact for finite-range potentials: only shifts with |x + nL| < r_V
/// contribute. `tol` is accepted for interface stability and is unused
/// by the finite-range catalog.
inline PeriodicEnergy periodic_potential(const PairPotential& p, double L,
                                         std::span<const double> x, double tol = 1e-12) {
  (void)tol;
  check_dimension(p, x);
  if (!(L > 0.0)) throw std::invalid_argument("box side L must be positive");
  for (double xi : x) {
    if (!(xi > -0.5 * L && xi <= 0.5 * L))
      throw std::invalid_argument("displacement component outside (-L/2, L/2]");
  }
  const double r = p.range();
  const int d = p.dimension;
  const int reach = static_cast<int>(std::ceil(r / L)) + 1;
  const int width = 2 * reach + 1;

  PeriodicEnergy out;
  out.images_overlap = L <= 2.0 * r;

  std::vector<int> shift(d, -reach);
  std::vector<double> y(d);
  std::int64_t total = 1;
  for (int k = 0; k < d; ++k) total *= width;
  for (std::int64_t idx = 0; idx < total; ++idx) {
    std::int64_t rem = idx;
    double r2 = 0.0;
    for (int k = 0; k < d; ++k) {
      shift[k] = static_cast<int>(rem % width) - reach;
      rem /= width;
      y[k] = x[k] + shift[k] * L;
      r2 += y[k] * y[k];
    }
    if (r2 >= r * r) continue;
    out.energy += evaluate_radial(p, std::sqrt(r2));
    if (out.energy.is_infinite()) break;
  }
  return out;
}

}  // namespace cbound
