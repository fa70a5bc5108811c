#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "epinet/epidemic.hpp"
#include "epinet/netgen.hpp"
#include "epinet/strategies.hpp"

namespace epinet {

struct SimOptions {
  /// Per-step conservation, transition and locality checks; a violation
  /// throws SimulationError.
  bool check_invariants = true;
  std::uint32_t round_cap = 10000;
};

struct RoundStats {
  std::uint32_t round = 0;
  std::size_t S = 0, I = 0, R = 0, M = 0;
  std::size_t new_infections = 0;
  std::size_t immunized_this_round = 0;
};

struct RunResult {
  std::size_t n = 0;
  std::size_t seed_count = 0;
  std::size_t total_infected = 0;
  std::uint32_t extinction_round = 0;
  std::size_t immunized_total = 0;
  /// Round 0 is the seeded state; round r is the state after round r.
  std::vector<RoundStats> per_round;
};

/// Runs spread, recovery and immunization rounds until no node is infected.
RunResult simulate(const Graph& g, const EpidemicParams& params, const StrategySpec& spec,
                   const StrategyCaches& caches, std::uint64_t seed, const SimOptions& options = {});

struct ExperimentConfig {
  NetGenConfig netgen;
  EpidemicParams epidemic;
  StrategySpec strategy{StrategyKind::local_nc, std::nullopt};
  std::vector<StrategyKind> strategies{StrategyKind::local_nc, StrategyKind::global_degree,
                                       StrategyKind::global_betweenness, StrategyKind::global_structural,
                                       StrategyKind::global_community};
  std::vector<double> budget_grid = default_budget_grid();
  std::vector<double> mu_values{0.3, 0.5, 0.7};
  std::size_t replicates = 10;
  std::uint64_t seed_base = 1;
  unsigned jobs = 1;
  /// Budget of the global strategies in a time-evolution run.
  double evolve_f = 0.04;
  /// Budget of the local strategy in a time-evolution run; unlimited by
  /// default, so its immunized share is an outcome.
  std::optional<double> evolve_local_budget;
  bool global_at_start = false;
  SimOptions sim;

  void validate() const;
  /// 0.01, 0.02, ..., 0.40.
  static std::vector<double> default_budget_grid();
};

/// Network configuration of one replicate: cfg.netgen with a seed derived
/// from (seed_base, replicate). The seed does not depend on mu, strategy
/// or budget, so comparisons within a replicate are paired.
NetGenConfig replicate_network_config(const ExperimentConfig& cfg, std::size_t replicate);
std::uint64_t replicate_epidemic_seed(const ExperimentConfig& cfg, std::size_t replicate);

/// One network, one epidemic, the configured single strategy.
RunResult run_single(const ExperimentConfig& cfg, std::size_t replicate);

struct RawRow {
  StrategyKind strategy = StrategyKind::none;
  double mu = 0.0;
  std::optional<double> f;  // nullopt: unlimited
  std::size_t replicate = 0;
  std::size_t total_infected = 0;
  std::uint32_t extinction_round = 0;
  std::size_t immunized_total = 0;
};

struct Summary {
  double mean = 0.0;
  double sd = 0.0;
  double min = 0.0;
  double max = 0.0;
};

/// Sample mean / standard deviation (n - 1 denominator, 0 for one value).
Summary summarize(const std::vector<double>& values);

struct AggregateRow {
  StrategyKind strategy = StrategyKind::none;
  double mu = 0.0;
  std::optional<double> f;
  std::size_t replicates = 0;
  Summary total_infected;
  Summary extinction_round;
  Summary immunized_total;
};

struct SweepResult {
  std::vector<RawRow> raw;
  std::vector<AggregateRow> aggregate;
};

/// Budgets run by a strategy in a sweep: the grid for global strategies,
/// the grid plus "unlimited" for the local strategy, a single 0 for none.
std::vector<std::optional<double>> sweep_budgets(StrategyKind kind, const std::vector<double>& grid);

/// Cross product strategy x budget x replicate for each mu.
SweepResult sweep(const ExperimentConfig& cfg);

/// Raw rows grouped by (strategy, mu, f) in first-appearance order.
std::vector<AggregateRow> aggregate(const std::vector<RawRow>& raw);

struct SeriesRow {
  StrategyKind strategy = StrategyKind::none;
  std::uint32_t round = 0;
  double infected_mean = 0.0;
};

struct EvolutionResult {
  std::vector<RawRow> raw;
  std::vector<SeriesRow> series;
  /// Infected count per round for each (strategy, replicate), in raw order.
  std::vector<std::vector<std::size_t>> infected;
};

/// Per-round infected counts per strategy (globals at evolve_f, local at
/// evolve_local_budget), mean over replicates; a finished run contributes
/// 0 to later rounds.
EvolutionResult time_evolution(const ExperimentConfig& cfg);

struct CostRow {
  std::size_t replicate = 0;
  std::size_t n = 0;
  std::size_t edges = 0;
  std::size_t max_degree = 0;
  std::uint64_t c_squared = 0;
  std::uint64_t nc_max_reads = 0;
  std::uint64_t nc_total_reads = 0;
  std::uint64_t degree_reads = 0;
  bool bound_ok = false;
};

struct TimingRow {
  std::size_t replicate = 0;
  CentralityKind kind = CentralityKind::degree;
  double seconds = 0.0;
};

struct CostResult {
  std::vector<CostRow> rows;
  std::vector<TimingRow> timing;
};

/// Operation counts of the neighbour centrality per generated network,
/// checked against c^2, plus wall-clock per centrality when `timing`.
CostResult cost_report(const ExperimentConfig& cfg, bool timing = false);
CostRow cost_of(const Graph& g, std::size_t replicate = 0);

/// Runs job(i) for i in [0, count) on `jobs` threads. Rethrows the
/// exception of the lowest failing index.
void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& job);

void write_raw_csv(std::ostream& out, const std::vector<RawRow>& rows);
void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows);
void write_series_csv(std::ostream& out, const std::vector<SeriesRow>& rows);
void write_rounds_csv(std::ostream& out, const RunResult& run);
void write_cost_csv(std::ostream& out, const std::vector<CostRow>& rows);
void write_timing_csv(std::ostream& out, const std::vector<TimingRow>& rows);

}  // namespace epinet
