#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "epinet/error.hpp"

namespace epinet {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

/// Immutable undirected simple graph in compressed adjacency form.
///
/// Neighbour lists are sorted ascending; every iteration order in the
/// library derives from that order. Immunization never edits the graph,
/// it lives in the simulation state.
class Graph {
 public:
  Graph() = default;

  /// Builds from an edge list. Throws GraphError naming the offending pair
  /// on an out-of-range index, a self-loop, or a duplicate edge.
  static Graph from_edge_list(std::size_t n, std::span<const Edge> edges);

  std::size_t node_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const noexcept { return targets_.size() / 2; }

  bool valid(NodeId i) const noexcept { return i < node_count(); }

  /// Neighbours of i in ascending id order. Throws GraphError for invalid i.
  std::span<const NodeId> neighbors(NodeId i) const;

  std::size_t degree(NodeId i) const { return neighbors(i).size(); }

  /// Largest degree (the c of the O(c^2) cost bound); 0 for an empty graph.
  std::size_t max_degree() const noexcept { return max_degree_; }

  bool has_edge(NodeId u, NodeId v) const;

  /// All edges as (u, v) with u < v, sorted lexicographically.
  std::vector<Edge> edges() const;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> targets_;
  std::size_t max_degree_ = 0;
};

/// Component label per node and the member lists, components ordered by
/// their smallest node id.
struct Components {
  std::vector<std::uint32_t> label;
  std::vector<std::vector<NodeId>> members;

  std::size_t count() const noexcept { return members.size(); }
};

Components connected_components(const Graph& g);

/// Edge-list text: "n m" header, then m lines "u v" with u < v.
void write_edge_list(std::ostream& out, const Graph& g);
Graph read_edge_list(std::istream& in);

void save_edge_list(const std::string& path, const Graph& g);
Graph load_edge_list(const std::string& path);

}  // namespace epinet
