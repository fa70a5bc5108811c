#include "epinet/centrality.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace epinet {

std::string_view to_string(CentralityKind kind) {
  switch (kind) {
    case CentralityKind::degree: return "degree";
    case CentralityKind::betweenness: return "betweenness";
    case CentralityKind::structural: return "structural";
    case CentralityKind::community: return "community";
    case CentralityKind::neighbour: return "neighbour";
  }
  return "?";
}

CentralityKind parse_centrality_kind(std::string_view name) {
  for (auto k : {CentralityKind::degree, CentralityKind::betweenness, CentralityKind::structural,
                 CentralityKind::community, CentralityKind::neighbour})
    if (to_string(k) == name) return k;
  throw ConfigError("unknown centrality kind '" + std::string(name) +
                    "' (expected degree|betweenness|structural|community|neighbour)");
}

std::uint64_t OpCounter::total() const { return std::accumulate(reads.begin(), reads.end(), std::uint64_t{0}); }

std::uint64_t OpCounter::max() const {
  return reads.empty() ? 0 : *std::max_element(reads.begin(), reads.end());
}

double neighbour_centrality(const Graph& g, NodeId i) {
  const auto nb = g.neighbors(i);
  if (nb.empty()) return 0.0;
  std::uint64_t sum = 0;
  for (NodeId j : nb) sum += g.degree(j);
  const auto d = static_cast<double>(nb.size());
  return d * d / static_cast<double>(sum);
}

std::uint64_t neighbour_scan_reads(const Graph& g, NodeId i) {
  std::uint64_t reads = 0;
  for (NodeId j : g.neighbors(i)) reads += g.degree(j);
  return reads;
}

CentralityScores neighbour_centrality(const Graph& g, OpCounter* counter) {
  const std::size_t n = g.node_count();
  CentralityScores s{CentralityKind::neighbour, std::vector<double>(n, 0.0)};
  if (!counter) {
    for (NodeId i = 0; i < n; ++i) s.values[i] = neighbour_centrality(g, i);
    return s;
  }

  // Node-local evaluation: each node i scores every neighbour j from the
  // degrees of N_j, one read per degree.
  counter->reads.assign(n, 0);
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j : g.neighbors(i)) {
      const auto nj = g.neighbors(j);
      std::uint64_t dsum = 0;
      for (NodeId k : nj) {
        dsum += g.degree(k);
        ++counter->reads[i];
      }
      const auto dj = static_cast<double>(nj.size());
      s.values[j] = dj * dj / static_cast<double>(dsum);
    }
  }
  return s;
}

CentralityScores degree_centrality(const Graph& g) {
  CentralityScores s{CentralityKind::degree, std::vector<double>(g.node_count())};
  for (NodeId i = 0; i < g.node_count(); ++i) s.values[i] = static_cast<double>(g.degree(i));
  return s;
}

CentralityScores betweenness_centrality(const Graph& g) {
  const std::size_t n = g.node_count();
  CentralityScores s{CentralityKind::betweenness, std::vector<double>(n, 0.0)};

  std::vector<NodeId> order;
  order.reserve(n);
  std::vector<NodeId> queue(n);
  std::vector<double> sigma(n), delta(n);
  std::vector<std::int64_t> dist(n);

  // Sources in ascending id; the per-source dependencies are summed in
  // that order, which fixes the floating-point reduction.
  for (NodeId src = 0; src < n; ++src) {
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    std::fill(dist.begin(), dist.end(), -1);
    order.clear();

    sigma[src] = 1.0;
    dist[src] = 0;
    std::size_t head = 0, tail = 0;
    queue[tail++] = src;
    while (head < tail) {
      const NodeId v = queue[head++];
      order.push_back(v);
      for (NodeId w : g.neighbors(v)) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          queue[tail++] = w;
        }
        if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const NodeId w = *it;
      for (NodeId v : g.neighbors(w))
        if (dist[v] == dist[w] - 1) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      if (w != src) s.values[w] += delta[w];
    }
  }
  // Every unordered pair was visited from both ends.
  for (double& v : s.values) v *= 0.5;
  return s;
}

CentralityScores structural_centrality(const Graph& g) {
  const std::size_t n = g.node_count();
  CentralityScores s{CentralityKind::structural, std::vector<double>(n, 0.0)};
  std::vector<std::int64_t> dist(n);
  std::vector<NodeId> queue(n);
  for (NodeId src = 0; src < n; ++src) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[src] = 0;
    std::size_t head = 0, tail = 0;
    queue[tail++] = src;
    double acc = 0.0;
    while (head < tail) {
      const NodeId v = queue[head++];
      if (v != src) acc += 1.0 / static_cast<double>(dist[v]);
      for (NodeId w : g.neighbors(v))
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          queue[tail++] = w;
        }
    }
    s.values[src] = acc;
  }
  return s;
}

CentralityScores community_centrality(const Graph& g, const CommunityAssignment& communities) {
  const std::size_t n = g.node_count();
  if (communities.label.size() != n)
    throw ConfigError("community labels cover " + std::to_string(communities.label.size()) + " of " +
                      std::to_string(n) + " nodes");
  CentralityScores s{CentralityKind::community, std::vector<double>(n, 0.0)};
  for (NodeId i = 0; i < n; ++i) {
    std::size_t intra = 0;
    for (NodeId j : g.neighbors(i)) intra += communities.label[j] == communities.label[i];
    s.values[i] = static_cast<double>(intra);
  }
  return s;
}

CommunityAssignment label_propagation(const Graph& g, int max_sweeps) {
  const std::size_t n = g.node_count();
  std::vector<std::uint32_t> label(n);
  std::iota(label.begin(), label.end(), 0u);
  std::map<std::uint32_t, std::size_t> freq;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool changed = false;
    for (NodeId i = 0; i < n; ++i) {
      const auto nb = g.neighbors(i);
      if (nb.empty()) continue;
      freq.clear();
      for (NodeId j : nb) ++freq[label[j]];
      std::uint32_t best = label[i];
      std::size_t best_count = freq.count(best) ? freq[best] : 0;
      for (const auto& [l, c] : freq)
        if (c > best_count) {
          best = l;
          best_count = c;
        }
      if (best != label[i]) {
        label[i] = best;
        changed = true;
      }
    }
    if (!changed) break;
  }
  // Relabel densely in order of first appearance.
  CommunityAssignment out;
  out.label.resize(n);
  std::map<std::uint32_t, std::uint32_t> dense;
  for (NodeId i = 0; i < n; ++i) {
    auto [it, inserted] = dense.try_emplace(label[i], static_cast<std::uint32_t>(dense.size()));
    out.label[i] = it->second;
  }
  out.count = static_cast<std::uint32_t>(dense.size());
  return out;
}

CentralityScores compute_centrality(const Graph& g, CentralityKind kind, const CommunityAssignment* communities) {
  switch (kind) {
    case CentralityKind::degree: return degree_centrality(g);
    case CentralityKind::betweenness: return betweenness_centrality(g);
    case CentralityKind::structural: return structural_centrality(g);
    case CentralityKind::neighbour: return neighbour_centrality(g);
    case CentralityKind::community:
      if (communities) return community_centrality(g, *communities);
      return community_centrality(g, label_propagation(g));
  }
  throw ConfigError("unknown centrality kind");
}

std::vector<NodeId> rank(const CentralityScores& scores) {
  std::vector<NodeId> order(scores.values.size());
  std::iota(order.begin(), order.end(), NodeId{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](NodeId a, NodeId b) { return scores.values[a] > scores.values[b]; });
  return order;
}

}  // namespace epinet
