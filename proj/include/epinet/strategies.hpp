#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "epinet/centrality.hpp"
#include "epinet/epidemic.hpp"
#include "epinet/graph.hpp"

namespace epinet {

enum class StrategyKind {
  none,
  local_nc,
  global_degree,
  global_betweenness,
  global_structural,
  global_community,
};

std::string_view to_string(StrategyKind kind);
StrategyKind parse_strategy_kind(std::string_view name);
bool is_global(StrategyKind kind);
/// Centrality ranked by a global strategy.
CentralityKind ranking_centrality(StrategyKind kind);

struct StrategySpec {
  StrategyKind kind = StrategyKind::none;
  /// nullopt means unlimited, which only the local strategy accepts.
  std::optional<double> budget_f;
  /// Fire the one-shot global removal before the first spread step instead
  /// of in round 1's immunization step.
  bool global_at_start = false;

  void validate() const;
  /// Node budget for a graph of n nodes; nullopt when unlimited.
  std::optional<std::size_t> budget_nodes(std::size_t n) const;
};

/// "unlimited" or a real in [0, 1].
std::optional<double> parse_budget(std::string_view text);
std::string budget_to_string(const std::optional<double>& budget);

/// Per-node NC scores plus each node's highest-scoring neighbour (ties to
/// the lowest id), both fixed by the static topology.
struct LocalStrategyState {
  static constexpr NodeId no_target = UINT32_MAX;

  std::vector<double> nc;
  std::vector<NodeId> target;

  static LocalStrategyState build(const Graph& g);
  /// Same selection rule over arbitrary per-node scores.
  static LocalStrategyState from_scores(const Graph& g, std::vector<double> scores);
};

/// Removes the top ceil(f n) nodes of `scores` once. Ranked nodes that are
/// already resistant keep their compartment but use up their slot.
/// Throws SimulationError if the removal already happened.
void global_immunize_once(const Graph& g, SimState& st, const StrategySpec& spec, const CentralityScores& scores);

/// One sweep of the local protocol. Each active, non-immunized node i
/// looks at its top-NC neighbour t; an infected t is immunized, and t with
/// all of its neighbours stop initiating.
void local_immunize_step(const Graph& g, SimState& st, const StrategySpec& spec, const LocalStrategyState& local);

/// Inputs the immunization step needs, computed once per network.
struct StrategyCaches {
  std::optional<CentralityScores> global_scores;
  std::optional<LocalStrategyState> local;
};

/// Builds what `spec` needs on `g`; `communities` feeds global_community.
StrategyCaches build_caches(const Graph& g, const StrategySpec& spec, const CommunityAssignment* communities);

/// The round's third step. round_index is 1-based.
void third_step(const Graph& g, SimState& st, const StrategySpec& spec, std::uint32_t round_index,
                const StrategyCaches& caches);

}  // namespace epinet
