// Graph fixtures and brute-force oracles for the test suites. Nothing here
// calls the library algorithms it is used to check.
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <vector>

#include "epinet/graph.hpp"
#include "epinet/rng.hpp"

namespace epinet::testing {

inline Graph make_graph(std::size_t n, std::vector<Edge> edges) { return Graph::from_edge_list(n, edges); }

inline Graph path(std::size_t n) {
  std::vector<Edge> e;
  for (NodeId i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return make_graph(n, e);
}

/// Centre 0, leaves 1..n-1.
inline Graph star(std::size_t n) {
  std::vector<Edge> e;
  for (NodeId i = 1; i < n; ++i) e.emplace_back(0, i);
  return make_graph(n, e);
}

inline Graph complete(std::size_t n) {
  std::vector<Edge> e;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return make_graph(n, e);
}

inline Graph cycle(std::size_t n) {
  std::vector<Edge> e;
  for (NodeId i = 0; i < n; ++i) e.emplace_back(std::min<NodeId>(i, (i + 1) % n), std::max<NodeId>(i, (i + 1) % n));
  return make_graph(n, e);
}

/// Circulant graph: i ~ i +- 1..k, (2k)-regular for n > 2k.
inline Graph circulant(std::size_t n, std::size_t k) {
  std::vector<Edge> e;
  for (NodeId i = 0; i < n; ++i)
    for (std::size_t s = 1; s <= k; ++s) {
      const auto j = static_cast<NodeId>((i + s) % n);
      e.emplace_back(std::min(i, j), std::max(i, j));
    }
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  return make_graph(n, e);
}

inline Graph hypercube(unsigned dim) {
  const std::size_t n = std::size_t{1} << dim;
  std::vector<Edge> e;
  for (NodeId i = 0; i < n; ++i)
    for (unsigned b = 0; b < dim; ++b) {
      const NodeId j = i ^ (NodeId{1} << b);
      if (i < j) e.emplace_back(i, j);
    }
  return make_graph(n, e);
}

/// Disjoint union; b's ids are shifted by a's node count.
inline Graph disjoint_union(const Graph& a, const Graph& b) {
  auto e = a.edges();
  const auto shift = static_cast<NodeId>(a.node_count());
  for (auto [u, v] : b.edges()) e.emplace_back(u + shift, v + shift);
  return make_graph(a.node_count() + b.node_count(), e);
}

inline Graph random_graph(std::size_t n, double p, Rng& rng) {
  std::vector<Edge> e;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j)
      if (rng.bernoulli(p)) e.emplace_back(i, j);
  return make_graph(n, e);
}

inline std::vector<std::vector<bool>> adjacency_matrix(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<bool>> a(n, std::vector<bool>(n, false));
  for (auto [u, v] : g.edges()) a[u][v] = a[v][u] = true;
  return a;
}

/// Reflexive-transitive closure by Warshall's algorithm.
inline std::vector<std::vector<bool>> reachability(const Graph& g) {
  auto r = adjacency_matrix(g);
  const std::size_t n = g.node_count();
  for (std::size_t i = 0; i < n; ++i) r[i][i] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (r[i][k] && r[k][j]) r[i][j] = true;
  return r;
}

inline bool connected(const Graph& g) {
  const auto r = reachability(g);
  return std::all_of(r.front().begin(), r.front().end(), [](bool b) { return b; });
}

/// All-pairs hop distances by Floyd-Warshall; -1 when unreachable.
inline std::vector<std::vector<long>> hop_distances(const Graph& g) {
  const std::size_t n = g.node_count();
  constexpr long inf = 1L << 40;
  std::vector<std::vector<long>> d(n, std::vector<long>(n, inf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (auto [u, v] : g.edges()) d[u][v] = d[v][u] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  for (auto& row : d)
    for (auto& x : row)
      if (x >= inf) x = -1;
  return d;
}

/// Betweenness by explicit enumeration of every shortest path of every
/// unordered pair: each intermediate node earns (paths through it) / (paths).
inline std::vector<double> brute_force_betweenness(const Graph& g) {
  const std::size_t n = g.node_count();
  const auto adj = adjacency_matrix(g);
  const auto dist = hop_distances(g);
  std::vector<double> score(n, 0.0);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = s + 1; t < n; ++t) {
      if (dist[s][t] < 2) continue;
      std::vector<std::vector<std::size_t>> paths;
      std::vector<std::size_t> current{s};
      std::vector<bool> used(n, false);
      used[s] = true;
      std::function<void(std::size_t)> walk = [&](std::size_t u) {
        if (static_cast<long>(current.size()) - 1 == dist[s][t]) {
          if (u == t) paths.push_back(current);
          return;
        }
        for (std::size_t v = 0; v < n; ++v)
          if (adj[u][v] && !used[v]) {
            used[v] = true;
            current.push_back(v);
            walk(v);
            current.pop_back();
            used[v] = false;
          }
      };
      walk(s);
      for (const auto& p : paths)
        for (std::size_t k = 1; k + 1 < p.size(); ++k) score[p[k]] += 1.0 / static_cast<double>(paths.size());
    }
  return score;
}

}  // namespace epinet::testing
