#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "cbound/bounds.hpp"
#include "cbound/cluster.hpp"
#include "oracles.hpp"

using namespace cbound;

namespace {

// Configurational integral of N labelled hard rods on a ring of length L:
// fix one rod, order the rest, and the N gaps >= sigma fill a simplex.
double ring_integral(int N, double L, double sigma) {
  if (N == 0) return 1.0;
  return L * std::pow(L - N * sigma, N - 1);
}

// \int u_N by inverting over set partitions:
// sum_pi (-1)^{|pi|-1} (|pi|-1)! prod_B Q_{|B|}.
double ursell_integral(int N, double L, double sigma) {
  std::vector<int> block(N, 0);
  double total = 0.0;
  std::function<void(int, int)> rec = [&](int i, int blocks) {
    if (i == N) {
      std::vector<int> size(blocks, 0);
      for (int b : block) ++size[b];
      double prod = 1.0;
      for (int s : size) prod *= ring_integral(s, L, sigma);
      double fact = 1.0;
      for (int k = 2; k < blocks; ++k) fact *= k;
      total += ((blocks - 1) % 2 ? -1.0 : 1.0) * fact * prod;
      return;
    }
    for (int b = 0; b <= blocks; ++b) {
      block[i] = b;
      rec(i + 1, b == blocks ? blocks + 1 : blocks);
    }
  };
  rec(0, 0);
  return total;
}

struct Lcg {
  std::uint64_t s;
  double next() {
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<double>(s >> 11) * 0x1.0p-53;
  }
};

ActivityTable random_table(int N, std::uint64_t seed, double scale) {
  Lcg rng{seed};
  std::vector<double> v(std::size_t{1} << N, 0.0);
  for (std::size_t i = 1; i < v.size(); ++i) v[i] = scale * (2.0 * rng.next() - 1.0);
  return ActivityTable(N, 1.0, v, false);
}

// Coefficients of Z(t) = sum over collections of disjoint polymers of
// t^{#polymers} prod zeta, by plain recursion over an explicit polymer list.
std::vector<double> partition_polynomial(const ActivityTable& t) {
  std::vector<Subset> polys;
  for (Subset v = 1; v <= t.full(); ++v) polys.push_back(v);
  std::vector<double> coeff(t.particles() + 1, 0.0);
  std::function<void(std::size_t, Subset, int, double)> rec = [&](std::size_t start, Subset used,
                                                                   int count, double w) {
    coeff[count] += w;
    for (std::size_t i = start; i < polys.size(); ++i)
      if ((polys[i] & used) == 0) rec(i + 1, used | polys[i], count + 1, w * t.zeta(polys[i]));
  };
  rec(0, 0, 0, 1.0);
  return coeff;
}

// Taylor coefficients l_1..l_n of log Z(t): n l_n = n z_n - sum_{k<n} k l_k z_{n-k}.
std::vector<double> log_taylor(const std::vector<double>& z, int n_max) {
  std::vector<double> l(n_max + 1, 0.0);
  auto zc = [&](int k) { return k < static_cast<int>(z.size()) ? z[k] : 0.0; };
  for (int n = 1; n <= n_max; ++n) {
    double s = n * zc(n);
    for (int k = 1; k < n; ++k) s -= k * l[k] * zc(n - k);
    l[n] = s / n;
  }
  return l;
}

const PairPotential kRod = PairPotential::hard_rod(1.0);

}  // namespace

TEST(ActivityTable, SingletonShiftAndScaling) {
  const std::vector<double> by_size = {0.25, -0.1, 0.03};
  const auto t = ActivityTable::from_cardinality(3, 1.5, by_size);
  EXPECT_TRUE(t.translation_invariant());
  EXPECT_EQ(t.zeta(0b010), 0.25);
  EXPECT_EQ(t.zeta_tilde(0b010), 1.25);
  EXPECT_EQ(t.zeta(0b101), -0.1);
  EXPECT_EQ(t.zeta_tilde(0b101), -0.1);
  EXPECT_EQ(t.zeta(0b111), 0.03);
  EXPECT_DOUBLE_EQ(t.scaled(2.0).zeta(0b111), 0.06);
  EXPECT_EQ(t.full(), 0b111u);
}

TEST(PolymerFamily, PhiTOfOverlappingPolymers) {
  PolymerFamily fam{{0b011, 0b110, 0b100}};
  // incompatibility: 0-1 (share 1), 1-2 (share 2), 0-2 disjoint -> path
  const auto m = fam.incompatibility_matrix();
  EXPECT_TRUE(m[0][1]);
  EXPECT_FALSE(m[0][2]);
  EXPECT_EQ(fam.phi_T(), 1);
  PolymerFamily same{{0b1, 0b1, 0b1, 0b1}};
  EXPECT_EQ(same.phi_T(), -6);
}

TEST(Partition, FormsAgreeOnRandomTables) {
  for (int N = 1; N <= 6; ++N)
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto t = random_table(N, seed * 31 + N, 0.7);
      const double coll = polymer_partition(t);
      const double part = polymer_partition_by_partitions(t);
      EXPECT_NEAR(part, coll, 1e-12 * std::max(1.0, std::abs(coll))) << "N=" << N;
      double brute = 0.0;
      for (double c : partition_polynomial(t)) brute += c;
      EXPECT_NEAR(coll, brute, 1e-12 * std::max(1.0, std::abs(brute)));
    }
}

TEST(Partition, BellNumbersWhenEveryTildeIsOne) {
  // zeta tilde = 1 everywhere: the partition form counts set partitions
  const double bell[] = {1, 2, 5, 15, 52, 203};
  for (int N = 1; N <= 6; ++N) {
    std::vector<double> v(std::size_t{1} << N, 1.0);
    for (int i = 0; i < N; ++i) v[std::size_t{1} << i] = 0.0;
    const ActivityTable t(N, 1.0, v, false);
    EXPECT_EQ(polymer_partition_by_partitions(t), bell[N - 1]);
    EXPECT_EQ(polymer_partition(t), bell[N - 1]);
  }
}

TEST(ClusterLog, SinglePolymerIsTheLogSeries) {
  std::vector<double> v = {0.0, 0.3};
  const ActivityTable t(1, 1.0, v, false);
  const auto orders = cluster_log_orders(t, 6);
  for (int n = 1; n <= 6; ++n)
    EXPECT_NEAR(orders[n - 1], (n % 2 ? 1.0 : -1.0) * std::pow(0.3, n) / n, 1e-16);
}

TEST(ClusterLog, OrdersAreTaylorCoefficientsOfLogZ) {
  for (int N = 2; N <= 4; ++N)
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const auto t = random_table(N, seed * 7 + N, 0.5);
      const auto expected = log_taylor(partition_polynomial(t), 6);
      const auto orders = cluster_log_orders(t, 6);
      for (int n = 1; n <= 6; ++n)
        EXPECT_NEAR(orders[n - 1], expected[n], 1e-12 * std::max(1.0, std::abs(expected[n])))
            << "N=" << N << " n=" << n;
    }
}

TEST(ClusterLog, GeometricConvergenceForSmallActivities) {
  const auto t = random_table(4, 99, 0.02);
  const double z = polymer_partition(t);
  double prev = INFINITY;
  for (int n = 1; n <= 6; ++n) {
    const double res = std::abs(std::exp(cluster_log_truncated(t, n)) - z) / z;
    EXPECT_LT(res, 0.5 * prev + 1e-15) << n;
    prev = res;
  }
  EXPECT_LT(prev, 1e-8);
  EXPECT_THROW(cluster_log_orders(t, 7), std::invalid_argument);
}

TEST(Lattice, HardRodTwoBodyActivity) {
  // continuum: zeta_2 = (1/(L K)^2) L (-2 sigma) = -2 / (L K^2)
  for (double K : {1.0, 1.1462}) {
    const auto a = zeta_from_potential(kRod, 1.0, 10.0, K, 2, 2048);
    EXPECT_NEAR(a.by_size[0], 1.0 / K - 1.0, 1e-15);
    EXPECT_NEAR(a.by_size[1], -0.2 / (K * K), 3e-4);
    EXPECT_LE(std::abs(a.by_size[1] + 0.2 / (K * K)), 2.0 * a.halving_delta[1] + 1e-12);
  }
}

TEST(Lattice, ActivitiesMatchRingIntegrals) {
  // L = 8 keeps sigma a whole number of lattice steps, so the error is a
  // polynomial in h; two Richardson steps remove the h and h^2 terms.
  const double L = 8.0;
  for (double K : {1.0, 1.1462}) {
    const auto coarse = zeta_from_potential(kRod, 1.0, L, K, 4, 64);
    const auto mid = zeta_from_potential(kRod, 1.0, L, K, 4, 128);
    const auto fine = zeta_from_potential(kRod, 1.0, L, K, 4, 256);
    for (int n = 2; n <= 4; ++n) {
      const double exact = ursell_integral(n, L, 1.0) / std::pow(L * K, n);
      const double extrapolated =
          (8.0 * fine.by_size[n - 1] - 6.0 * mid.by_size[n - 1] + coarse.by_size[n - 1]) / 3.0;
      EXPECT_NEAR(extrapolated, exact, 1e-3 * std::abs(exact)) << "n=" << n << " K=" << K;
      EXPECT_NEAR(fine.by_size[n - 1], exact, 0.1 * std::abs(exact));
    }
  }
  // the continuum values themselves: 9 L / (L K)^3 for n = 3
  EXPECT_NEAR(ursell_integral(3, 10.0, 1.0), 90.0, 1e-9);
  EXPECT_NEAR(ursell_integral(2, 10.0, 1.0), -20.0, 1e-12);
}

TEST(Lattice, RejectsUnsupportedInput) {
  EXPECT_THROW(zeta_from_potential(PairPotential::hard_core(1.0, 2), 1.0, 10.0, 1.0, 2, 64),
               std::invalid_argument);
  EXPECT_THROW(zeta_from_potential(kRod, 1.0, 10.0, 1.0, 5, 64), std::invalid_argument);
  EXPECT_THROW(zeta_from_potential(kRod, 1.0, 10.0, 1.0, 2, 100), std::invalid_argument);
  EXPECT_THROW(zeta_from_potential(kRod, 1.0, 10.0, 0.9, 2, 64), std::invalid_argument);
}

TEST(DirectZ, FactorisesOnTheSameGrid) {
  for (double K : {1.0, 1.1462})
    for (int N = 1; N <= 3; ++N) {
      const DirectZCheck z = direct_Z_small(kRod, 1.0, 10.0, K, N, 2048);
      EXPECT_LT(z.residual, 1e-6) << "K=" << K << " N=" << N;
      // and Z_per itself is close to the continuum ring integral / N!
      double fact = 1.0;
      for (int i = 2; i <= N; ++i) fact *= i;
      EXPECT_NEAR(z.z_direct, ring_integral(N, 10.0, 1.0) / fact,
                  2e-3 * ring_integral(N, 10.0, 1.0) / fact);
    }
  const auto well = PairPotential::square_well(1.0, 0.5, 0.5, 1);
  EXPECT_LT(direct_Z_small(well, 1.0, 8.0, 1.1, 3, 512).residual, 1e-6);
  EXPECT_THROW(direct_Z_small(kRod, 1.0, 10.0, 1.0, 4, 64), std::invalid_argument);
}

TEST(DirectZ, PolymerPartitionMatchesContinuum) {
  // Z_int = Q_N / (L K)^N for hard rods
  for (double K : {1.0, 1.1462}) {
    const auto a = zeta_from_potential(kRod, 1.0, 10.0, K, 4, 128);
    EXPECT_NEAR(polymer_partition(a.table), ring_integral(4, 10.0, 1.0) / std::pow(10.0 * K, 4),
                0.02);
  }
}

TEST(KP, HandComputedCase) {
  const std::vector<double> zabs = {0.0, 0.01, 0.001};
  const KPCheck k = kp_check(zabs, 0.5, 1.05);
  EXPECT_NEAR(k.multi_lhs, 2.0 * 0.01 * std::exp(1.0) + 0.001 * std::exp(1.5), 1e-15);
  EXPECT_NEAR(k.multi_rhs, std::expm1(0.5), 1e-15);
  EXPECT_NEAR(k.singleton_lhs, (1.0 - 1.0 / 1.05) * std::exp(0.5) + 1.0 - std::exp(-0.5), 1e-15);
  EXPECT_TRUE(k.passes);
  EXPECT_FALSE(kp_check(zabs, 0.5, 3.0).passes);  // singleton term too big
  EXPECT_THROW(kp_check(zabs, 0.0, 1.0), std::invalid_argument);
}

TEST(KP, TreeBoundDominatesHardRodActivities) {
  for (double L : {6.0, 10.0, 20.0})
    for (double K : {1.0, 1.1462}) {
      const auto act = zeta_from_potential(kRod, 1.0, L, K, 3, 256);
      const double a = maximize_F(K).a_star;
      for (int n = 2; n <= 3; ++n) {
        const double bound = zeta_tree_bound(n, 1.0, 0.0, 2.0, L, K, a) * std::exp(-a * n);
        EXPECT_GE(bound, std::abs(act.by_size[n - 1]) - act.halving_delta[n - 1])
            << "L=" << L << " K=" << K << " n=" << n;
      }
    }
}

TEST(KP, DensityBelowRadiusImpliesCondition) {
  // Tree-bound activities at N / L <= rho* satisfy the KP inequalities.
  for (double K : {1.0, 1.05, 1.1462})
    for (double C : {1.0, 2.0})
      for (int N = 2; N <= 6; ++N) {
        const double rstar = rho_star(1.0, 0.0, C, K);
        const double L = N / (0.999 * rstar);
        const double a = maximize_F(K).a_star;
        std::vector<double> bounds(N, 0.0);
        for (int n = 2; n <= N; ++n)
          bounds[n - 1] = zeta_tree_bound(n, 1.0, 0.0, C, L, K, a) * std::exp(-a * n);
        EXPECT_TRUE(kp_check(bounds, a, K).passes) << "K=" << K << " C=" << C << " N=" << N;
      }
}

TEST(StepOne, ClosedFormForAllK) {
  for (int n = 0; n <= 6; ++n)
    for (double K : {1.0, 1.01, 1.1462, 1.5, 2.0, 3.0, 4.0}) {
      const IdentityValues v = step1_identity(n, K);
      EXPECT_LT(std::abs(v.lhs - v.rhs) / v.rhs, 1e-9) << "n=" << n << " K=" << K;
    }
  EXPECT_THROW(step1_identity(7, 1.5), std::invalid_argument);
  EXPECT_THROW(step1_identity(2, 0.5), std::invalid_argument);
}

TEST(StepOne, AgreesWithCompositionEnumeration) {
  for (int n = 0; n <= 4; ++n)
    for (double K : {1.01, 1.1462}) {
      const double x = 1.0 - 1.0 / K;
      double lhs = 0.0, xj = 1.0, fact = 1.0;
      for (int j = 0; j <= 20; ++j) {
        if (j > 0) fact *= j;
        lhs += xj * oracle::composition_weight_sum(j, n + 1) / fact;
        xj *= x;
      }
      EXPECT_NEAR(step1_identity(n, K).lhs, lhs, 1e-12 * lhs) << "n=" << n << " K=" << K;
    }
}

TEST(FreeCase, LogSeries) {
  for (double K : {1.0, 1.1, 1.1462, 1.3, 1.5})
    EXPECT_NEAR(free_case_log_sum(K, 40), -std::log(K), 1e-12);
  EXPECT_THROW(free_case_log_sum(0.5, 10), std::invalid_argument);
}

TEST(DensityFactor, FallingProduct) {
  EXPECT_EQ(density_factor(10, 5.0, 0), 0.0);
  EXPECT_DOUBLE_EQ(density_factor(10, 5.0, 1), 9.0 / 5.0);
  EXPECT_DOUBLE_EQ(density_factor(10, 5.0, 3), 9.0 * 8.0 * 7.0 / 125.0);
  EXPECT_EQ(density_factor(3, 5.0, 3), 0.0);
}
