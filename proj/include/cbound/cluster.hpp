#pragma once

// Brute-force laboratory for the polymer representation of the canonical
// partition function with the K-normalised measure lambda(dq) = dq/(|L| K).
//
// Polymers are nonempty subsets of the particle labels {0..N-1}, stored as
// bitmasks. Two polymers are compatible when disjoint. Singletons carry
// activity 1/K - 1 (zeta) or 1/K (zeta tilde); larger polymers carry the
// connected-graph integral of Mayer bonds.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cbound/graphs.hpp"
#include "cbound/potentials.hpp"
#include "cbound/summation.hpp"

namespace cbound {

using Subset = std::uint32_t;

inline constexpr int kMaxDenseParticles = 6;

class ActivityTable {
 public:
  /// `values[mask]` is zeta of the polymer `mask`; index 0 is ignored.
  ActivityTable(int particles, double K, std::vector<double> values,
                bool translation_invariant = false)
      : n_(particles), K_(K), values_(std::move(values)), invariant_(translation_invariant) {
    if (particles < 1 || particles > kMaxDenseParticles)
      throw std::invalid_argument("activity table supports 1 <= N <= 6");
    if (!(K >= 1.0)) throw std::invalid_argument("K must be >= 1");
    if (values_.size() != (std::size_t{1} << particles))
      throw std::invalid_argument("activity table needs 2^N entries");
    values_[0] = 0.0;
  }

  /// Translation-invariant table: zeta depends only on |V|;
  /// `by_size[n-1]` is the activity of an n-element polymer.
  static ActivityTable from_cardinality(int particles, double K, std::span<const double> by_size) {
    if (static_cast<int>(by_size.size()) < particles)
      throw std::invalid_argument("need one activity per polymer size");
    std::vector<double> v(std::size_t{1} << particles, 0.0);
    for (std::size_t m = 1; m < v.size(); ++m) v[m] = by_size[std::popcount(m) - 1];
    return ActivityTable(particles, K, std::move(v), true);
  }

  int particles() const { return n_; }
  double K() const { return K_; }
  bool translation_invariant() const { return invariant_; }
  Subset full() const { return (Subset{1} << n_) - 1; }

  double zeta(Subset v) const { return values_.at(v); }
  /// zeta tilde = zeta + 1 on singletons.
  double zeta_tilde(Subset v) const { return values_.at(v) + (std::popcount(v) == 1 ? 1.0 : 0.0); }

  ActivityTable scaled(double t) const {
    std::vector<double> v = values_;
    for (double& x : v) x *= t;
    return ActivityTable(n_, K_, std::move(v), invariant_);
  }

 private:
  int n_;
  double K_;
  std::vector<double> values_;
  bool invariant_;
};

/// Ordered family of polymers and their pairwise (in)compatibility.
struct PolymerFamily {
  std::vector<Subset> polymers;

  static bool compatible(Subset a, Subset b) { return (a & b) == 0; }

  std::vector<std::vector<bool>> incompatibility_matrix() const {
    const std::size_t n = polymers.size();
    std::vector<std::vector<bool>> m(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
      if (polymers[i] == 0) throw std::invalid_argument("polymers must be nonempty");
      for (std::size_t j = 0; j < n; ++j) m[i][j] = !compatible(polymers[i], polymers[j]);
    }
    return m;
  }

  /// phi^T(V_1..V_n): signed sum over connected graphs on incompatible pairs.
  std::int64_t phi_T() const { return penrose_value(incompatibility_matrix()); }
};

// ---------------------------------------------------------------------------
// Activities from a potential (1-D, periodic box).

/// Midpoint tensor grid with `points` nodes per axis on (-L/2, L/2]. By
/// translation invariance the |V|-fold integral reduces to one free position
/// (contributing L) and displacements that are integer multiples of h = L/P.
struct DisplacementLattice {
  double L = 0.0;
  int points = 0;
  double h = 0.0;
  std::vector<Energy> energy;  // V^per(k h), k = 0..P-1 (wrapped)
  std::vector<double> bond;    // e^{-beta V^per} - 1 at the same offsets

  DisplacementLattice(const PairPotential& p, double beta, double box, int grid)
      : L(box), points(grid), h(box / grid), energy(grid), bond(grid) {
    if (p.dimension != 1) throw std::invalid_argument("lattice quadrature needs a 1-D potential");
    if (grid < 2 || (grid & (grid - 1)) != 0)
      throw std::invalid_argument("quadrature points must be a power of two >= 2");
    for (int k = 0; k < grid; ++k) {
      const double x = minimum_image(k * h, L);
      energy[k] = periodic_potential(p, L, std::span<const double>(&x, 1)).energy;
      bond[k] = mayer_f(beta, energy[k]);
    }
  }

  int offset(int from, int to) const {
    const int d = to - from;
    return d < 0 ? d + points : d;
  }
};

namespace detail {

/// L h^{n-1} sum over k_2..k_n (k_1 = 0) of `weight(k)`.
template <class Weight>
double lattice_integral(const DisplacementLattice& lat, int n, const Weight& weight) {
  std::vector<int> k(n, 0);
  CompensatedSum acc;
  const std::int64_t P = lat.points;
  std::int64_t total = 1;
  for (int i = 1; i < n; ++i) total *= P;
  for (std::int64_t idx = 0; idx < total; ++idx) {
    std::int64_t r = idx;
    for (int i = 1; i < n; ++i) {
      k[i] = static_cast<int>(r % P);
      r /= P;
    }
    acc += weight(k);
  }
  return lat.L * std::pow(lat.h, n - 1) * acc.value();
}

/// \int_{L^n} sum_{g in C_n} prod f, unnormalised.
inline double connected_bond_integral(const DisplacementLattice& lat, int n) {
  if (n == 1) return lat.L;
  std::vector<EdgeMask> graphs;
  for_each_connected(n, [&](const LabeledGraph& g) { graphs.push_back(g.edges()); });
  const int pairs = pair_count(n);
  std::vector<double> f(pairs);
  return lattice_integral(lat, n, [&](const std::vector<int>& k) {
    EdgeMask nonzero = 0;
    for (int e = 0; e < pairs; ++e) {
      const auto [i, j] = edge_endpoints(n, e);
      f[e] = lat.bond[lat.offset(k[i], k[j])];
      if (f[e] != 0.0) nonzero |= EdgeMask{1} << e;
    }
    double s = 0.0;
    for (EdgeMask g : graphs) {
      if ((g & ~nonzero) != 0) continue;
      double prod = 1.0;
      for (EdgeMask e = g; e != 0; e &= e - 1) prod *= f[std::countr_zero(e)];
      s += prod;
    }
    return s;
  });
}

inline void check_quadrature_inputs(const PairPotential& p, double beta, double L, double K) {
  validate(p);
  if (p.dimension != 1) throw std::invalid_argument("quadrature checks need a 1-D potential");
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (!(L > 0.0)) throw std::invalid_argument("box side must be positive");
  if (!(K >= 1.0)) throw std::invalid_argument("K must be >= 1");
}

}  // namespace detail

struct PotentialActivities {
  ActivityTable table;
  /// zeta_n for n = 1..N.
  std::vector<double> by_size;
  /// |zeta_n(P) - zeta_n(P/2)|, the grid-halving error estimate.
  std::vector<double> halving_delta;
  int grid = 0;
};

/// zeta(V) for a 1-D potential in a periodic box of side L, |V| <= N <= 4.
inline PotentialActivities zeta_from_potential(const PairPotential& p, double beta, double L,
                                               double K, int N, int quadrature_points) {
  detail::check_quadrature_inputs(p, beta, L, K);
  if (N < 1 || N > 4) throw std::invalid_argument("zeta_from_potential supports |V| <= 4");
  const DisplacementLattice fine(p, beta, L, quadrature_points);
  std::vector<double> by_size(N), delta(N, 0.0);
  by_size[0] = 1.0 / K - 1.0;
  if (N >= 2) {
    const DisplacementLattice coarse(p, beta, L, std::max(2, quadrature_points / 2));
    for (int n = 2; n <= N; ++n) {
      const double norm = std::pow(L * K, -n);
      by_size[n - 1] = norm * detail::connected_bond_integral(fine, n);
      delta[n - 1] =
          std::abs(by_size[n - 1] - norm * detail::connected_bond_integral(coarse, n));
    }
  }
  return {ActivityTable::from_cardinality(N, K, by_size), by_size, delta, quadrature_points};
}

// ---------------------------------------------------------------------------
// Partition function of the polymer gas.

namespace detail {

/// Sum over collections of pairwise disjoint polymers inside `remaining`.
/// Each collection is reached once by deciding the lowest undecided element:
/// either it is uncovered (if allowed) or it lies in a polymer drawn from the
/// remaining elements.
template <class Activity>
double disjoint_collections(Subset remaining, bool allow_uncovered, const Activity& act) {
  if (remaining == 0) return 1.0;
  const Subset low = remaining & (~remaining + 1);
  const Subset rest = remaining & ~low;
  double total = allow_uncovered ? disjoint_collections(rest, allow_uncovered, act) : 0.0;
  for (Subset sub = rest;; sub = (sub - 1) & rest) {
    const double z = act(sub | low);
    if (z != 0.0) total += z * disjoint_collections(rest & ~sub, allow_uncovered, act);
    if (sub == 0) break;
  }
  return total;
}

}  // namespace detail

/// Z_int as the sum over unordered collections of compatible polymers of
/// prod zeta (empty collection contributes 1).
inline double polymer_partition(const ActivityTable& t) {
  return detail::disjoint_collections(t.full(), true, [&](Subset v) { return t.zeta(v); });
}

/// Z_int as the sum over set partitions of {0..N-1} of prod zeta tilde.
inline double polymer_partition_by_partitions(const ActivityTable& t) {
  return detail::disjoint_collections(t.full(), false, [&](Subset v) { return t.zeta_tilde(v); });
}

// ---------------------------------------------------------------------------
// Cluster expansion of log Z_int.

inline constexpr int kMaxClusterOrder = 6;

namespace detail {

/// phi^T memo keyed by tuple length and an incompatibility mask in
/// colex pair order (pair (i,j), i<j, at bit j(j-1)/2 + i), which does not
/// depend on the final tuple length.
class PhiTCache {
 public:
  PhiTCache() {
    for (int n = 1; n <= kMaxClusterOrder; ++n)
      memo_[n].assign(std::size_t{1} << pair_count(n), kUnset);
  }

  std::int64_t operator()(int n, EdgeMask colex) {
    if (n < 1 || n > kMaxClusterOrder) throw std::out_of_range("phi^T cache order");
    std::int64_t& slot = memo_[n][colex];
    if (slot == kUnset) {
      EdgeMask lex = 0;
      for (EdgeMask e = colex; e != 0; e &= e - 1) {
        const int b = std::countr_zero(e);
        int j = 1;
        while (j * (j + 1) / 2 <= b) ++j;
        const int i = b - j * (j - 1) / 2;
        lex |= EdgeMask{1} << edge_index(n, i, j);
      }
      slot = connected_signed_sum(n, lex);
    }
    return slot;
  }

 private:
  static constexpr std::int64_t kUnset = std::numeric_limits<std::int64_t>::min();
  std::vector<std::int64_t> memo_[kMaxClusterOrder + 1];
};

}  // namespace detail

/// Order-by-order cluster sums: entry n-1 is
/// (1/n!) sum over ordered n-tuples of polymers of phi^T prod zeta.
inline std::vector<double> cluster_log_orders(const ActivityTable& t, int n_max) {
  if (n_max < 1 || n_max > kMaxClusterOrder)
    throw std::invalid_argument("cluster order must be in [1, 6]");
  if (t.particles() > 5) throw std::invalid_argument("cluster log supports N <= 5");
  std::vector<Subset> polys;
  std::vector<double> zetas;
  for (Subset v = 1; v <= t.full(); ++v) {
    if (t.zeta(v) != 0.0) {
      polys.push_back(v);
      zetas.push_back(t.zeta(v));
    }
  }
  detail::PhiTCache phi;
  std::vector<CompensatedSum> acc(n_max);
  std::vector<Subset> tuple(n_max);

  // depth = number of polymers already placed
  auto recurse = [&](auto&& self, int depth, EdgeMask incompat, double prod) -> void {
    for (std::size_t p = 0; p < polys.size(); ++p) {
      const Subset v = polys[p];
      EdgeMask mask = incompat;
      const int base = depth * (depth - 1) / 2;
      for (int i = 0; i < depth; ++i)
        if ((tuple[i] & v) != 0) mask |= EdgeMask{1} << (base + i);
      const double w = prod * zetas[p];
      const std::int64_t c = phi(depth + 1, mask);
      if (c != 0) acc[depth] += static_cast<double>(c) * w;
      if (depth + 1 < n_max) {
        tuple[depth] = v;
        self(self, depth + 1, mask, w);
      }
    }
  };
  recurse(recurse, 0, 0, 1.0);

  std::vector<double> out(n_max);
  double fact = 1.0;
  for (int n = 1; n <= n_max; ++n) {
    fact *= n;
    out[n - 1] = acc[n - 1].value() / fact;
  }
  return out;
}

inline double cluster_log_truncated(const ActivityTable& t, int n_max) {
  CompensatedSum s;
  for (double x : cluster_log_orders(t, n_max)) s += x;
  return s.value();
}

// ---------------------------------------------------------------------------
// Convergence conditions.

struct KPCheck {
  bool passes = false;
  /// sum_{n>=2} C(N-1, n-1) |zeta_n| e^{a n}
  double multi_lhs = 0.0;
  /// e^a - 1
  double multi_rhs = 0.0;
  /// (1 - 1/K) e^c + (e^c - 1)/e^c
  double singleton_lhs = 0.0;
  /// e^c - 1
  double singleton_rhs = 0.0;
};

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Kotecky-Preiss-type check for translation-invariant activities.
/// `zeta_abs[n-1]` bounds |zeta_n| for n = 1..N (the n = 1 entry is not used;
/// singletons enter through K). `c` is the singleton constant, usually a.
inline KPCheck kp_check(std::span<const double> zeta_abs, double a, double c, double K) {
  if (!(a > 0.0) || !(c > 0.0)) throw std::invalid_argument("a and c must be positive");
  if (!(K >= 1.0)) throw std::invalid_argument("K must be >= 1");
  const int N = static_cast<int>(zeta_abs.size());
  KPCheck r;
  for (int n = 2; n <= N; ++n)
    r.multi_lhs += binomial(N - 1, n - 1) * std::abs(zeta_abs[n - 1]) * std::exp(a * n);
  r.multi_rhs = std::expm1(a);
  r.singleton_lhs = (1.0 - 1.0 / K) * std::exp(c) - std::expm1(-c);
  r.singleton_rhs = std::expm1(c);
  r.passes = r.multi_lhs <= r.multi_rhs && r.singleton_lhs <= r.singleton_rhs;
  return r;
}

inline KPCheck kp_check(std::span<const double> zeta_abs, double a, double K) {
  return kp_check(zeta_abs, a, a, K);
}

/// Tree-graph bound on |zeta_n| e^{a n}:
/// (e^{beta B + a}/K) n^{n-2} (e^{beta B + a} C_L / (K |L|))^{n-1}.
inline double zeta_tree_bound(int n, double beta, double B, double C_Lambda, double volume,
                              double K, double a) {
  if (n < 2) throw std::invalid_argument("tree bound needs n >= 2");
  if (!(volume > 0.0) || !(K > 0.0)) throw std::invalid_argument("volume and K must be positive");
  const double e = std::exp(beta * B + a);
  return e / K * static_cast<double>(tree_count(n)) *
         std::pow(e * C_Lambda / (K * volume), n - 1);
}

// ---------------------------------------------------------------------------
// Identities used when collecting the free energy.

struct IdentityValues {
  double lhs = 0.0;
  double rhs = 0.0;
  int terms = 0;

  double residual() const { return std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)); }
};

/// sum_{m>=1} x^{m-1}/(m-1)! sum_{m_1+..+m_{n+1}=m-1} multinomial(m-1; m_i) prod m_i!
/// with x = 1 - 1/K, against K^{n+1}.
///
/// The inner sum divided by (m-1)! factorises over the last part:
/// T_k(j) = sum_{r=0}^{j} [C(j,r) r! (j-r)! / j!] T_{k-1}(j-r), T_1(j) = 1,
/// and every bracket equals one, so T_k(j) is a running prefix sum.
inline IdentityValues step1_identity(int n, double K) {
  if (n < 0 || n > 6) throw std::invalid_argument("step-I identity checked for 0 <= n <= 6");
  if (!(K >= 1.0) || !(K <= 4.0)) throw std::invalid_argument("K must be in [1, 4]");
  const double x = 1.0 - 1.0 / K;
  const int parts = n + 1;
  std::vector<double> T(parts + 1, 0.0);  // T[k] holds T_k(j) for the current j
  CompensatedSum lhs;
  double xj = 1.0;
  double prev = 0.0;
  int j = 0;
  for (; j < 100000; ++j) {
    T[1] = 1.0;
    for (int k = 2; k <= parts; ++k) T[k] = (j == 0 ? 0.0 : T[k]) + T[k - 1];
    const double term = xj * T[parts];
    lhs += term;
    if (term < 1e-14 && (term <= prev || x == 0.0)) break;
    prev = term;
    xj *= x;
  }
  return {lhs.value(), std::pow(K, n + 1), j + 1};
}

/// sum_{m=1}^{m_max} (-1)^{m-1} (1/K - 1)^m / m, which tends to -log K.
inline double free_case_log_sum(double K, int m_max) {
  if (!(K >= 1.0)) throw std::invalid_argument("K must be >= 1");
  const double s = 1.0 / K - 1.0;
  CompensatedSum acc;
  double p = 1.0;
  for (int m = 1; m <= m_max; ++m) {
    p *= s;
    acc += ((m % 2 == 1) ? 1.0 : -1.0) * p / m;
  }
  return acc.value();
}

/// P_{N,|L|}(n) = (N-1)(N-2)...(N-n) / |L|^n for n >= 1, 0 for n = 0.
inline double density_factor(double N, double volume, int n) {
  if (n < 0) throw std::invalid_argument("n must be >= 0");
  if (!(volume > 0.0)) throw std::invalid_argument("volume must be positive");
  if (n == 0) return 0.0;
  double r = 1.0;
  for (int k = 1; k <= n; ++k) r *= (N - k) / volume;
  return r;
}

// ---------------------------------------------------------------------------
// Direct partition function for a few particles.

struct DirectZCheck {
  double z_direct = 0.0;
  double z_free = 0.0;
  double z_int = 0.0;
  /// |Z_per - Z_free Z_int| / Z_per
  double residual = 0.0;
};

/// Z_per(N) = (1/N!) \int_{L^N} exp(-beta sum V^per) on the midpoint lattice,
/// compared with Z_free Z_int, Z_free = (L K)^N / N!, Z_int from the polymer
/// expansion on the same lattice.
inline DirectZCheck direct_Z_small(const PairPotential& p, double beta, double L, double K, int N,
                                   int quadrature_points) {
  detail::check_quadrature_inputs(p, beta, L, K);
  if (N < 1 || N > 3) throw std::invalid_argument("direct_Z_small supports N <= 3");
  DirectZCheck r;
  double fact = 1.0;
  for (int i = 2; i <= N; ++i) fact *= i;
  if (N == 1) {
    r.z_direct = L;
  } else {
    const DisplacementLattice lat(p, beta, L, quadrature_points);
    const double integral = detail::lattice_integral(lat, N, [&](const std::vector<int>& k) {
      Energy e;
      for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j) e += lat.energy[lat.offset(k[i], k[j])];
      return boltzmann_factor(beta, e);
    });
    r.z_direct = integral / fact;
  }
  r.z_free = std::pow(L * K, N) / fact;
  r.z_int = polymer_partition(zeta_from_potential(p, beta, L, K, N, quadrature_points).table);
  r.residual = std::abs(r.z_direct - r.z_free * r.z_int) / std::abs(r.z_direct);
  return r;
}

}  // namespace cbound
