#pragma once

// Irreducible Mayer coefficients
//
//   beta_m = (1/m!) sum_{g in B_{m+1}} \int prod_{ij in g} f(q_i - q_j) dq_2..dq_{m+1},  q_1 = 0
//
// by uniform Monte Carlo over a box that covers the integrand's support,
// and the density expansion of the free energy built from them.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "cbound/graphs.hpp"
#include "cbound/philox.hpp"
#include "cbound/potentials.hpp"

namespace cbound {

inline constexpr int kMaxMayerOrder = 4;

struct MayerEstimate {
  int m = 0;
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

/// Monte Carlo estimate of (|L|^m / m!) w*(V) on a periodic box.
struct FiniteVolumeEstimate {
  MayerEstimate estimate;
  double box = 0.0;
  /// L <= 2 m r_V: periodic images can distort the integrand's support.
  bool box_too_small = false;
};

struct MonteCarloOptions {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 0x5EED;
  /// Worker threads. Results do not depend on this value.
  unsigned shards = 1;
};

/// Samples per accumulation block. Blocks are summed sequentially and
/// combined in block order, which makes the result independent of sharding.
inline constexpr std::uint64_t kMonteCarloBlock = 4096;

namespace detail {

struct Moments {
  double sum = 0.0;
  double sum_sq = 0.0;
};

/// Runs sample_value(index) for index in [0, samples) across `shards`
/// threads and returns per-sample mean and standard error of the mean.
template <class SampleFn>
std::pair<double, double> sharded_mean(std::uint64_t samples, unsigned shards,
                                       const SampleFn& sample_value) {
  const std::uint64_t blocks = (samples + kMonteCarloBlock - 1) / kMonteCarloBlock;
  std::vector<Moments> per_block(blocks);
  auto run_blocks = [&](std::uint64_t first, std::uint64_t last) {
    for (std::uint64_t b = first; b < last; ++b) {
      Moments acc;
      const std::uint64_t end = std::min(samples, (b + 1) * kMonteCarloBlock);
      for (std::uint64_t s = b * kMonteCarloBlock; s < end; ++s) {
        const double v = sample_value(s);
        acc.sum += v;
        acc.sum_sq += v * v;
      }
      per_block[b] = acc;
    }
  };
  const unsigned workers =
      static_cast<unsigned>(std::max<std::uint64_t>(1, std::min<std::uint64_t>(shards, blocks)));
  if (workers <= 1) {
    run_blocks(0, blocks);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t first = blocks * w / workers;
      const std::uint64_t last = blocks * (w + 1) / workers;
      pool.emplace_back(run_blocks, first, last);
    }
    for (auto& t : pool) t.join();
  }
  Moments total;
  for (const Moments& m : per_block) {
    total.sum += m.sum;
    total.sum_sq += m.sum_sq;
  }
  const double n = static_cast<double>(samples);
  const double mean = total.sum / n;
  const double var = std::max(0.0, (total.sum_sq - n * mean * mean) / (n - 1.0));
  return {mean, std::sqrt(var / n)};
}

inline double factorial(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

}  // namespace detail

/// Sum over the 2-connected graphs on n vertices of the product of bond
/// weights, for one configuration.
class BiconnectedSum {
 public:
  explicit BiconnectedSum(int n) : n_(n), pairs_(pair_count(n)) {
    for_each_biconnected(n, [&](const LabeledGraph& g) { graphs_.push_back(g.edges()); });
  }

  int vertex_count() const { return n_; }
  std::size_t graph_count() const { return graphs_.size(); }

  /// `bond[k]` is f on pair k (edge_index order). Products skip graphs that
  /// use a vanishing bond.
  double operator()(std::span<const double> bond) const {
    EdgeMask nonzero = 0;
    for (int k = 0; k < pairs_; ++k)
      if (bond[k] != 0.0) nonzero |= EdgeMask{1} << k;
    double total = 0.0;
    for (EdgeMask g : graphs_) {
      if ((g & ~nonzero) != 0) continue;
      double prod = 1.0;
      for (EdgeMask e = g; e != 0; e &= e - 1) prod *= bond[std::countr_zero(e)];
      total += prod;
    }
    return total;
  }

 private:
  int n_;
  int pairs_;
  std::vector<EdgeMask> graphs_;
};

namespace detail {

inline void check_order(int m) {
  if (m < 1 || m > kMaxMayerOrder)
    throw std::invalid_argument("Mayer order m must be in [1, " +
                                std::to_string(kMaxMayerOrder) + "], got " + std::to_string(m));
}

/// Shared sampler: q_1 = 0, q_2..q_{m+1} uniform in [-half, half)^d, bonds
/// from `bond_energy(displacement)`.
template <class BondEnergy>
MayerEstimate sample_biconnected(const PairPotential& p, double beta, int m, double half,
                                 const MonteCarloOptions& opt, const BondEnergy& bond_energy) {
  const int d = p.dimension;
  const int n = m + 1;
  const BiconnectedSum biconnected(n);
  const double volume = std::pow(2.0 * half, d * m);
  const double scale = volume / factorial(m);
  auto sample_value = [&](std::uint64_t s) {
    SampleStream rng(opt.seed, static_cast<std::uint32_t>(m), s);
    std::vector<double> q(static_cast<std::size_t>(n) * d, 0.0);
    for (int i = 1; i < n; ++i)
      for (int k = 0; k < d; ++k) q[i * d + k] = rng.uniform(-half, half);
    std::array<double, pair_count(kMaxMayerOrder + 1)> bond{};
    std::vector<double> x(d);
    for (int e = 0; e < pair_count(n); ++e) {
      const auto [i, j] = edge_endpoints(n, e);
      for (int k = 0; k < d; ++k) x[k] = q[j * d + k] - q[i * d + k];
      bond[e] = mayer_f(beta, bond_energy(std::span<const double>(x)));
    }
    return scale * biconnected(std::span<const double>(bond.data(), pair_count(n)));
  };
  const auto [mean, se] = sharded_mean(opt.samples, opt.shards, sample_value);
  return {m, mean, se, opt.samples, opt.seed};
}

}  // namespace detail

/// beta_m by uniform sampling over [-m r_V, m r_V]^{d m}.
///
/// Every vertex of a 2-connected graph on m+1 vertices is within graph
/// distance m of vertex 1, so with finite-range bonds the integrand vanishes
/// outside this box.
inline MayerEstimate beta_m_monte_carlo(const PairPotential& p, double beta, int m,
                                        const MonteCarloOptions& opt) {
  detail::check_order(m);
  validate(p);
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (opt.samples < 1000) throw std::invalid_argument("need at least 1000 samples");
  const double half = m * p.range();
  return detail::sample_biconnected(
      p, beta, m, half, opt, [&](std::span<const double> x) { return evaluate(p, x); });
}

/// (|L|^m / m!) w*(V), |V| = m+1, with the periodic potential on a box of
/// side L. Tends to beta_m as L grows.
inline FiniteVolumeEstimate w_star_finite_volume(const PairPotential& p, double beta, int m,
                                                 double L, const MonteCarloOptions& opt) {
  detail::check_order(m);
  validate(p);
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (!(L > 0.0)) throw std::invalid_argument("box side must be positive");
  if (p.dimension > 8) throw std::invalid_argument("periodic sampling supports d <= 8");
  if (opt.samples < 1000) throw std::invalid_argument("need at least 1000 samples");
  FiniteVolumeEstimate out;
  out.box = L;
  out.box_too_small = L <= 2.0 * m * p.range();
  const int d = p.dimension;
  out.estimate = detail::sample_biconnected(
      p, beta, m, 0.5 * L, opt, [&](std::span<const double> x) {
        std::array<double, 8> y{};
        for (int k = 0; k < d; ++k) y[k] = minimum_image(x[k], L);
        return periodic_potential(p, L, std::span<const double>(y.data(), d)).energy;
      });
  return out;
}

/// Inverse-variance combination of two independent estimates of the same m.
inline MayerEstimate merge_estimates(const MayerEstimate& a, const MayerEstimate& b) {
  if (a.m != b.m) throw std::invalid_argument("cannot merge estimates of different order");
  if (a.std_error == 0.0 || b.std_error == 0.0) {
    return a.std_error <= b.std_error ? a : b;
  }
  const double wa = 1.0 / (a.std_error * a.std_error);
  const double wb = 1.0 / (b.std_error * b.std_error);
  MayerEstimate out;
  out.m = a.m;
  out.mean = (wa * a.mean + wb * b.mean) / (wa + wb);
  out.std_error = std::sqrt(1.0 / (wa + wb));
  out.samples = a.samples + b.samples;
  out.seed = a.seed;
  return out;
}

/// Exact hard-rod coefficient, beta_m = -((m+1)/m) sigma^m.
inline double beta_m_exact_hardrod(int m, double sigma) {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  return -(static_cast<double>(m + 1) / m) * std::pow(sigma, m);
}

struct FreeEnergySeries {
  double beta = 1.0;
  std::vector<double> coefficients;  // beta_1 .. beta_M
  int M = 0;
  double rho_max = 0.0;
};

/// (1/beta) [rho (log rho - 1) - sum_{m=1}^{M} rho^{m+1} beta_m / (m+1)].
inline double free_energy_series(double rho, double beta, std::span<const double> coefficients,
                                  int M) {
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (M < 0 || static_cast<std::size_t>(M) > coefficients.size())
    throw std::invalid_argument("truncation order exceeds available coefficients");
  double series = 0.0;
  double power = rho;
  for (int m = 1; m <= M; ++m) {
    power *= rho;
    series += power * coefficients[m - 1] / (m + 1);
  }
  return (rho * (std::log(rho) - 1.0) - series) / beta;
}

inline double free_energy_series(double rho, const FreeEnergySeries& s) {
  return free_energy_series(rho, s.beta, s.coefficients, s.M);
}

inline double ideal_free_energy(double rho, double beta) {
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");
  return rho * (std::log(rho) - 1.0) / beta;
}

/// Exact free energy density of the 1-D hard-rod (Tonks) gas,
/// (1/beta) [rho log(rho / (1 - rho sigma)) - rho], for rho sigma < 1.
inline double tonks_free_energy(double rho, double beta, double sigma) {
  if (!(rho > 0.0) || !(rho * sigma < 1.0))
    throw std::invalid_argument("Tonks gas needs 0 < rho sigma < 1");
  return (rho * std::log(rho / (1.0 - rho * sigma)) - rho) / beta;
}

/// Upper bound on the hard-rod series tail rho sum_{m>M} (rho sigma)^m / m,
/// namely rho x^{M+1} / ((M+1)(1-x)), x = rho sigma.
inline double tonks_tail_bound(double rho, double sigma, int M) {
  const double x = rho * sigma;
  if (!(x > 0.0 && x < 1.0)) throw std::invalid_argument("need 0 < rho sigma < 1");
  return rho * std::pow(x, M + 1) / ((M + 1) * (1.0 - x));
}

}  // namespace cbound
