#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "epinet/graph.hpp"
#include "epinet/netgen.hpp"

namespace epinet {

enum class CentralityKind { degree, betweenness, structural, community, neighbour };

std::string_view to_string(CentralityKind kind);
/// Throws ConfigError on an unknown name.
CentralityKind parse_centrality_kind(std::string_view name);

struct CentralityScores {
  CentralityKind kind = CentralityKind::degree;
  std::vector<double> values;
};

/// Neighbour-degree reads made while computing neighbour centrality.
struct OpCounter {
  std::vector<std::uint64_t> reads;  // per node
  std::uint64_t total() const;
  std::uint64_t max() const;
};

/// NC(i) = d_i / (mean neighbour degree) = d_i^2 / sum of neighbour
/// degrees. Isolated nodes score 0.
double neighbour_centrality(const Graph& g, NodeId i);

/// NC for every node, optionally counting the neighbour-degree reads the
/// per-node evaluation performs. The per-node cost follows the local
/// protocol: node i evaluates NC(j) for each neighbour j, reading every
/// degree in N_j.
CentralityScores neighbour_centrality(const Graph& g, OpCounter* counter = nullptr);

/// Reads node i performs to score all of its neighbours: sum of d_j over
/// j in N_i, bounded by d_i * c <= c^2.
std::uint64_t neighbour_scan_reads(const Graph& g, NodeId i);

CentralityScores degree_centrality(const Graph& g);

/// Brandes accumulation, unnormalized, each unordered pair counted once.
CentralityScores betweenness_centrality(const Graph& g);

/// Harmonic closeness: sum over j != i of 1 / dist(i, j), unreachable
/// pairs contribute 0.
CentralityScores structural_centrality(const Graph& g);

/// Intra-community degree under the given labels.
CentralityScores community_centrality(const Graph& g, const CommunityAssignment& communities);

/// Label propagation for graphs without ground-truth labels. Nodes adopt
/// the most frequent neighbour label (ties to the smallest label), swept
/// in ascending id until stable or `max_sweeps` is reached.
CommunityAssignment label_propagation(const Graph& g, int max_sweeps = 100);

/// Dispatch by kind. `communities` is required for the community kind.
CentralityScores compute_centrality(const Graph& g, CentralityKind kind,
                                    const CommunityAssignment* communities = nullptr);

/// Node ids by descending score, ties by ascending id.
std::vector<NodeId> rank(const CentralityScores& scores);

}  // namespace epinet
