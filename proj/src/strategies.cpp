#include "epinet/strategies.hpp"

#include "epinet/error.hpp"
#include "epinet/text.hpp"

#include <cstdlib>

namespace epinet {

namespace {

constexpr StrategyKind kAllKinds[] = {
    StrategyKind::none,          StrategyKind::local_nc,           StrategyKind::global_degree,
    StrategyKind::global_betweenness, StrategyKind::global_structural, StrategyKind::global_community,
};

}  // namespace

std::string_view to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::none: return "none";
    case StrategyKind::local_nc: return "local_nc";
    case StrategyKind::global_degree: return "global_degree";
    case StrategyKind::global_betweenness: return "global_betweenness";
    case StrategyKind::global_structural: return "global_structural";
    case StrategyKind::global_community: return "global_community";
  }
  return "?";
}

StrategyKind parse_strategy_kind(std::string_view name) {
  for (auto k : kAllKinds)
    if (to_string(k) == name) return k;
  throw ConfigError("unknown strategy '" + std::string(name) +
                    "' (expected none|local_nc|global_degree|global_betweenness|global_structural|global_community)");
}

bool is_global(StrategyKind kind) {
  return kind != StrategyKind::none && kind != StrategyKind::local_nc;
}

CentralityKind ranking_centrality(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::global_degree: return CentralityKind::degree;
    case StrategyKind::global_betweenness: return CentralityKind::betweenness;
    case StrategyKind::global_structural: return CentralityKind::structural;
    case StrategyKind::global_community: return CentralityKind::community;
    default: throw ConfigError("strategy " + std::string(to_string(kind)) + " does not rank by a centrality");
  }
}

void StrategySpec::validate() const {
  if (!budget_f) {
    if (is_global(kind)) throw ConfigError("global strategies need a finite budget_f");
    return;
  }
  if (!(*budget_f >= 0.0 && *budget_f <= 1.0))
    throw ConfigError("budget_f must lie in [0, 1] or be 'unlimited', got " + exact(*budget_f));
}

std::optional<std::size_t> StrategySpec::budget_nodes(std::size_t n) const {
  if (!budget_f) return std::nullopt;
  return fraction_count(*budget_f, n);
}

std::optional<double> parse_budget(std::string_view text) {
  if (text == "unlimited") return std::nullopt;
  const std::string s(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw ConfigError("budget_f must be a real in [0, 1] or 'unlimited', got '" + s + "'");
  if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("budget_f must lie in [0, 1], got " + s);
  return v;
}

std::string budget_to_string(const std::optional<double>& budget) {
  return budget ? exact(*budget) : "unlimited";
}

LocalStrategyState LocalStrategyState::build(const Graph& g) {
  return from_scores(g, neighbour_centrality(g).values);
}

LocalStrategyState LocalStrategyState::from_scores(const Graph& g, std::vector<double> scores) {
  LocalStrategyState s;
  s.nc = std::move(scores);
  s.target.assign(g.node_count(), no_target);
  for (NodeId i = 0; i < g.node_count(); ++i) {
    for (NodeId j : g.neighbors(i))  // ascending, so the first maximum is the lowest id
      if (s.target[i] == no_target || s.nc[j] > s.nc[s.target[i]]) s.target[i] = j;
  }
  return s;
}

void global_immunize_once(const Graph& g, SimState& st, const StrategySpec& spec, const CentralityScores& scores) {
  if (st.global_fired) throw SimulationError("global removal may happen only once per run");
  st.global_fired = true;
  const std::size_t budget = spec.budget_nodes(g.node_count()).value_or(0);
  const auto order = rank(scores);
  for (std::size_t k = 0; k < budget && k < order.size(); ++k) {
    const NodeId i = order[k];
    if (st.state[i] == Compartment::S || st.state[i] == Compartment::I) st.immunize(i);
  }
}

void local_immunize_step(const Graph& g, SimState& st, const StrategySpec& spec, const LocalStrategyState& local) {
  const auto budget = spec.budget_nodes(g.node_count());
  for (NodeId i = 0; i < g.node_count(); ++i) {
    if (!st.active[i] || st.state[i] == Compartment::M) continue;
    const NodeId t = local.target[i];
    if (t == LocalStrategyState::no_target || st.state[t] != Compartment::I) continue;
    if (budget && st.immunized_count >= *budget) return;
    st.immunize(t);
    st.active[t] = 0;
    for (NodeId k : g.neighbors(t)) st.active[k] = 0;
  }
}

StrategyCaches build_caches(const Graph& g, const StrategySpec& spec, const CommunityAssignment* communities) {
  StrategyCaches c;
  if (spec.kind == StrategyKind::local_nc) c.local = LocalStrategyState::build(g);
  if (is_global(spec.kind)) c.global_scores = compute_centrality(g, ranking_centrality(spec.kind), communities);
  return c;
}

void third_step(const Graph& g, SimState& st, const StrategySpec& spec, std::uint32_t round_index,
                const StrategyCaches& caches) {
  switch (spec.kind) {
    case StrategyKind::none: return;
    case StrategyKind::local_nc:
      if (!caches.local) throw SimulationError("local strategy state missing");
      local_immunize_step(g, st, spec, *caches.local);
      return;
    case StrategyKind::global_degree:
    case StrategyKind::global_betweenness:
    case StrategyKind::global_structural:
    case StrategyKind::global_community:
      if (spec.global_at_start || round_index != 1) return;
      if (!caches.global_scores) throw SimulationError("global centrality scores missing");
      global_immunize_once(g, st, spec, *caches.global_scores);
      return;
  }
  throw ConfigError("unknown strategy kind");
}

}  // namespace epinet
