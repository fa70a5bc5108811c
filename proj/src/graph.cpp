#include "epinet/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace epinet {

namespace {

std::string pair_str(const Edge& e) {
  return "(" + std::to_string(e.first) + ", " + std::to_string(e.second) + ")";
}

}  // namespace

Graph Graph::from_edge_list(std::size_t n, std::span<const Edge> edges) {
  std::vector<std::size_t> deg(n, 0);
  for (const Edge& e : edges) {
    if (e.first >= n || e.second >= n)
      throw GraphError("edge " + pair_str(e) + " has an index outside [0, " + std::to_string(n) + ")");
    if (e.first == e.second) throw GraphError("self-loop " + pair_str(e));
    ++deg[e.first];
    ++deg[e.second];
  }

  Graph g;
  g.offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] = g.offsets_[i] + deg[i];
  g.targets_.resize(g.offsets_[n]);

  std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const Edge& e : edges) {
    g.targets_[fill[e.first]++] = e.second;
    g.targets_[fill[e.second]++] = e.first;
  }

  for (std::size_t i = 0; i < n; ++i) {
    auto first = g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i]);
    auto last = g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i + 1]);
    std::sort(first, last);
    auto dup = std::adjacent_find(first, last);
    if (dup != last) {
      NodeId a = static_cast<NodeId>(i), b = *dup;
      throw GraphError("duplicate edge " + pair_str({std::min(a, b), std::max(a, b)}));
    }
    g.max_degree_ = std::max(g.max_degree_, deg[i]);
  }
  return g;
}

std::span<const NodeId> Graph::neighbors(NodeId i) const {
  if (!valid(i)) throw GraphError("invalid node id " + std::to_string(i));
  return {targets_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (NodeId u = 0; u < node_count(); ++u)
    for (NodeId v : neighbors(u))
      if (u < v) out.emplace_back(u, v);
  return out;
}

Components connected_components(const Graph& g) {
  const std::size_t n = g.node_count();
  constexpr std::uint32_t unset = UINT32_MAX;
  Components c;
  c.label.assign(n, unset);
  std::vector<NodeId> stack;
  for (NodeId s = 0; s < n; ++s) {
    if (c.label[s] != unset) continue;
    const auto id = static_cast<std::uint32_t>(c.members.size());
    auto& members = c.members.emplace_back();
    c.label[s] = id;
    stack.push_back(s);
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      members.push_back(u);
      for (NodeId v : g.neighbors(u)) {
        if (c.label[v] == unset) {
          c.label[v] = id;
          stack.push_back(v);
        }
      }
    }
    std::sort(members.begin(), members.end());
  }
  return c;
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << g.node_count() << ' ' << g.edge_count() << '\n';
  for (const Edge& e : g.edges()) out << e.first << ' ' << e.second << '\n';
}

Graph read_edge_list(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw GraphError("edge list: missing header line");
  std::istringstream header(line);
  long long n = -1, m = -1;
  if (!(header >> n >> m) || n < 0 || m < 0) throw GraphError("edge list: bad header '" + line + "'");

  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long k = 0; k < m; ++k) {
    if (!std::getline(in, line))
      throw GraphError("edge list: expected " + std::to_string(m) + " edges, got " + std::to_string(k));
    std::istringstream row(line);
    long long u = -1, v = -1;
    if (!(row >> u >> v) || u < 0 || v < 0) throw GraphError("edge list: bad edge line '" + line + "'");
    if (u >= v) throw GraphError("edge list: expected u < v in line '" + line + "'");
    edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
  }
  return Graph::from_edge_list(static_cast<std::size_t>(n), edges);
}

void save_edge_list(const std::string& path, const Graph& g) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw GraphError("cannot open " + path + " for writing");
  write_edge_list(out, g);
}

Graph load_edge_list(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GraphError("cannot open " + path);
  return read_edge_list(in);
}

}  // namespace epinet
