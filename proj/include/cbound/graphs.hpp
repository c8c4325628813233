#pragma once

// Small labeled graphs on vertices {0, ..., n-1}, n <= 8, with the edge set
// packed into a bitmask over the n(n-1)/2 possible pairs (i<j, ordered
// lexicographically).

#include <array>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cbound {

inline constexpr int kMaxGraphVertices = 8;

constexpr int pair_count(int n) { return n * (n - 1) / 2; }

/// Bit position of the pair {i, j}, i != j, among the pairs of an n-vertex graph.
constexpr int edge_index(int n, int i, int j) {
  if (i > j) std::swap(i, j);
  // pairs (0,1)..(0,n-1), (1,2).. ; row i starts after sum_{r<i} (n-1-r)
  return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

using VertexMask = std::uint32_t;
using EdgeMask = std::uint32_t;

namespace detail {

inline void check_vertex_count(int n, int lo = 1) {
  if (n < lo || n > kMaxGraphVertices)
    throw std::invalid_argument("vertex count must be in [" + std::to_string(lo) + ", " +
                                std::to_string(kMaxGraphVertices) + "], got " +
                                std::to_string(n));
}

/// Per-n table of (i, j) for each edge bit.
struct PairTable {
  std::array<std::array<std::pair<int, int>, pair_count(kMaxGraphVertices)>,
             kMaxGraphVertices + 1>
      pairs{};
  constexpr PairTable() {
    for (int n = 0; n <= kMaxGraphVertices; ++n) {
      int k = 0;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pairs[n][k++] = {i, j};
    }
  }
};

inline constexpr PairTable kPairs{};

}  // namespace detail

inline std::pair<int, int> edge_endpoints(int n, int index) {
  return detail::kPairs.pairs[n][index];
}

using Adjacency = std::array<VertexMask, kMaxGraphVertices>;

inline Adjacency adjacency_of(int n, EdgeMask edges) {
  Adjacency adj{};
  while (edges != 0) {
    const int b = std::countr_zero(edges);
    edges &= edges - 1;
    const auto [i, j] = detail::kPairs.pairs[n][b];
    adj[i] |= VertexMask{1} << j;
    adj[j] |= VertexMask{1} << i;
  }
  return adj;
}

/// True if the subgraph induced on `vertices` is connected (empty set: true).
inline bool induced_connected(const Adjacency& adj, VertexMask vertices) {
  if (vertices == 0) return true;
  VertexMask seen = vertices & (~vertices + 1);
  VertexMask frontier = seen;
  while (frontier != 0) {
    const int v = std::countr_zero(frontier);
    frontier &= frontier - 1;
    const VertexMask fresh = adj[v] & vertices & ~seen;
    seen |= fresh;
    frontier |= fresh;
  }
  return seen == vertices;
}

inline VertexMask all_vertices(int n) { return (VertexMask{1} << n) - 1; }

class LabeledGraph {
 public:
  LabeledGraph(int n, EdgeMask edges) : n_(n), edges_(edges) {
    detail::check_vertex_count(n);
    if (pair_count(n) < 32 && (edges >> pair_count(n)) != 0)
      throw std::invalid_argument("edge mask has bits beyond C(n,2)");
  }

  static LabeledGraph from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
    detail::check_vertex_count(n);
    EdgeMask m = 0;
    for (auto [i, j] : edges) {
      if (i == j) throw std::invalid_argument("self-loops are not allowed");
      if (i < 0 || j < 0 || i >= n || j >= n) throw std::invalid_argument("vertex out of range");
      m |= EdgeMask{1} << edge_index(n, i, j);
    }
    return LabeledGraph(n, m);
  }

  static LabeledGraph complete(int n) {
    detail::check_vertex_count(n);
    const int p = pair_count(n);
    return LabeledGraph(n, p == 32 ? ~EdgeMask{0} : (EdgeMask{1} << p) - 1);
  }

  int vertex_count() const { return n_; }
  EdgeMask edges() const { return edges_; }
  int edge_count() const { return std::popcount(edges_); }
  bool has_edge(int i, int j) const { return (edges_ >> edge_index(n_, i, j)) & 1U; }
  Adjacency adjacency() const { return adjacency_of(n_, edges_); }

  friend bool operator==(const LabeledGraph&, const LabeledGraph&) = default;

 private:
  int n_;
  EdgeMask edges_;
};

inline bool is_connected(int n, EdgeMask edges) {
  return induced_connected(adjacency_of(n, edges), all_vertices(n));
}

inline bool is_connected(const LabeledGraph& g) { return is_connected(g.vertex_count(), g.edges()); }

/// Connected with no articulation vertex; the single edge on two vertices counts.
inline bool is_biconnected(int n, EdgeMask edges) {
  if (n < 2) return false;
  const Adjacency adj = adjacency_of(n, edges);
  const VertexMask all = all_vertices(n);
  if (!induced_connected(adj, all)) return false;
  if (n == 2) return true;
  for (int v = 0; v < n; ++v) {
    if (!induced_connected(adj, all & ~(VertexMask{1} << v))) return false;
  }
  return true;
}

inline bool is_biconnected(const LabeledGraph& g) {
  return is_biconnected(g.vertex_count(), g.edges());
}

/// Calls fn(LabeledGraph) for every connected graph on n vertices, in
/// ascending bitmask order. Nothing is stored.
template <class Fn>
void for_each_connected(int n, Fn&& fn) {
  detail::check_vertex_count(n, 2);
  const std::uint64_t total = std::uint64_t{1} << pair_count(n);
  for (std::uint64_t m = 0; m < total; ++m) {
    const auto mask = static_cast<EdgeMask>(m);
    if (is_connected(n, mask)) fn(LabeledGraph(n, mask));
  }
}

template <class Fn>
void for_each_biconnected(int n, Fn&& fn) {
  detail::check_vertex_count(n, 2);
  const std::uint64_t total = std::uint64_t{1} << pair_count(n);
  for (std::uint64_t m = 0; m < total; ++m) {
    const auto mask = static_cast<EdgeMask>(m);
    if (is_biconnected(n, mask)) fn(LabeledGraph(n, mask));
  }
}

inline std::vector<LabeledGraph> enumerate_connected(int n) {
  std::vector<LabeledGraph> out;
  for_each_connected(n, [&](const LabeledGraph& g) { out.push_back(g); });
  return out;
}

inline std::vector<LabeledGraph> enumerate_biconnected(int n) {
  std::vector<LabeledGraph> out;
  for_each_biconnected(n, [&](const LabeledGraph& g) { out.push_back(g); });
  return out;
}

inline std::uint64_t count_connected(int n) {
  std::uint64_t c = 0;
  for_each_connected(n, [&](const LabeledGraph&) { ++c; });
  return c;
}

inline std::uint64_t count_biconnected(int n) {
  std::uint64_t c = 0;
  for_each_biconnected(n, [&](const LabeledGraph&) { ++c; });
  return c;
}

/// Number of labeled trees on n vertices, n^{n-2} (1 for n = 1).
inline std::uint64_t tree_count(int n) {
  if (n < 1) throw std::invalid_argument("tree_count needs n >= 1");
  if (n <= 2) return 1;
  std::uint64_t r = 1;
  for (int i = 0; i < n - 2; ++i) r *= static_cast<std::uint64_t>(n);
  return r;
}

/// phi^T for n polymers whose incompatibility graph is `incompatible`:
/// sum over connected spanning subgraphs of (-1)^{#edges}, by brute force
/// over every subset of the incompatible pairs.
inline std::int64_t penrose_value(int n, EdgeMask incompatible) {
  detail::check_vertex_count(n);
  if (n == 1) return 1;
  // enumerate submasks of `incompatible`
  std::int64_t sum = 0;
  EdgeMask sub = incompatible;
  while (true) {
    if (is_connected(n, sub)) sum += (std::popcount(sub) % 2 == 0) ? 1 : -1;
    if (sub == 0) break;
    sub = (sub - 1) & incompatible;
  }
  return sum;
}

/// Matrix form: symmetric boolean matrix with a true diagonal.
inline std::int64_t penrose_value(const std::vector<std::vector<bool>>& incompatibility) {
  const int n = static_cast<int>(incompatibility.size());
  if (n > kMaxGraphVertices)
    throw std::invalid_argument("penrose_value refuses n > 8 (combinatorial explosion)");
  if (n < 1) throw std::invalid_argument("empty incompatibility matrix");
  EdgeMask mask = 0;
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(incompatibility[i].size()) != n)
      throw std::invalid_argument("incompatibility matrix must be square");
    if (!incompatibility[i][i])
      throw std::invalid_argument("incompatibility matrix needs a true diagonal");
    for (int j = i + 1; j < n; ++j) {
      if (incompatibility[i][j] != incompatibility[j][i])
        throw std::invalid_argument("incompatibility matrix must be symmetric");
      if (incompatibility[i][j]) mask |= EdgeMask{1} << edge_index(n, i, j);
    }
  }
  return penrose_value(n, mask);
}

/// Same quantity as penrose_value via inclusion-exclusion over vertex subsets:
/// c(S) = e(S) - sum_{T subset S, min(S) in T, T != S} c(T) e(S \ T), with
/// e(S) = 1 if S spans no edge of the incompatibility graph, else 0
/// (the signed sum over all subgraphs of a graph with >= 1 edge vanishes).
/// O(3^n); used where phi^T is needed for many tuples.
inline std::int64_t connected_signed_sum(int n, EdgeMask incompatible) {
  detail::check_vertex_count(n);
  const Adjacency adj = adjacency_of(n, incompatible);
  const VertexMask full = all_vertices(n);
  std::array<std::int64_t, 1U << kMaxGraphVertices> c{};
  auto empty_of_edges = [&](VertexMask s) {
    VertexMask rest = s;
    while (rest != 0) {
      const int v = std::countr_zero(rest);
      rest &= rest - 1;
      if (adj[v] & s) return 0;
    }
    return 1;
  };
  for (VertexMask s = 1; s <= full; ++s) {
    const VertexMask low = s & (~s + 1);
    std::int64_t v = empty_of_edges(s);
    // proper subsets T of s containing the lowest vertex
    const VertexMask others = s & ~low;
    for (VertexMask t = (others - 1) & others;; t = (t - 1) & others) {
      const VertexMask T = t | low;
      if (T != s) v -= c[T] * empty_of_edges(s & ~T);
      if (t == 0) break;
    }
    c[s] = v;
  }
  return c[full];
}

}  // namespace cbound
