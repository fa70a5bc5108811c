#include "epinet/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <map>
#include <ostream>
#include <thread>

#include "epinet/error.hpp"
#include "epinet/text.hpp"

namespace epinet {

namespace {

// Checks one step against its pre-step snapshot.
class StepAudit {
 public:
  StepAudit(const SimState& st) : state_(st.state), age_(st.age), ever_(st.ever_infected_count) {}

  void after_spread(const Graph& g, const SimState& st, std::uint32_t window) const {
    for (NodeId i = 0; i < st.node_count(); ++i) {
      if (state_[i] == Compartment::S && st.state[i] == Compartment::I) {
        bool source = false;
        for (NodeId j : g.neighbors(i))
          if (state_[j] == Compartment::I && age_[j] < window) {
            source = true;
            break;
          }
        if (!source)
          throw SimulationError("round " + std::to_string(st.round) + ": node " + std::to_string(i) +
                                " infected without an infectious neighbour");
      }
    }
    check(st);
  }

  void check(const SimState& st) const {
    const std::size_t n = st.node_count();
    const auto counts = st.counts();
    if (counts.total() != n) throw SimulationError("compartment counts do not sum to n");
    for (NodeId i = 0; i < n; ++i) {
      const auto from = state_[i], to = st.state[i];
      const bool legal = from == to || (from == Compartment::S && to == Compartment::I) ||
                         (from == Compartment::I && to == Compartment::R) ||
                         ((from == Compartment::S || from == Compartment::I) && to == Compartment::M);
      if (!legal)
        throw SimulationError("round " + std::to_string(st.round) + ": illegal transition at node " +
                              std::to_string(i));
    }
    if (st.ever_infected_count < ever_) throw SimulationError("ever-infected count decreased");
    if (counts[Compartment::M] != st.immunized_count) throw SimulationError("immunized count out of sync");
  }

 private:
  std::vector<Compartment> state_;
  std::vector<std::uint32_t> age_;
  std::size_t ever_;
};

RoundStats snapshot(const SimState& st) {
  const auto c = st.counts();
  return {st.round, c[Compartment::S], c[Compartment::I], c[Compartment::R], c[Compartment::M],
          st.new_infections, st.immunized_this_round};
}

// Everything a replicate needs for one mu: the network and the
// centralities of every strategy that will run on it.
struct Prepared {
  GeneratedNetwork net;
  std::map<StrategyKind, StrategyCaches> caches;
};

Prepared prepare(const ExperimentConfig& cfg, std::size_t replicate, double mu,
                 const std::vector<StrategyKind>& kinds) {
  Prepared p;
  auto netcfg = replicate_network_config(cfg, replicate);
  netcfg.mu = mu;
  p.net = generate(netcfg);
  for (auto kind : kinds)
    if (!p.caches.contains(kind))
      p.caches.emplace(kind, build_caches(p.net.graph, StrategySpec{kind, 0.0}, &p.net.communities));
  return p;
}

RawRow raw_row(StrategyKind kind, double mu, std::optional<double> f, std::size_t replicate, const RunResult& r) {
  return {kind, mu, f, replicate, r.total_infected, r.extinction_round, r.immunized_total};
}

std::string f_field(const std::optional<double>& f) { return f ? fixed(*f, 4) : "unlimited"; }

}  // namespace

RunResult simulate(const Graph& g, const EpidemicParams& params, const StrategySpec& spec,
                   const StrategyCaches& caches, std::uint64_t seed, const SimOptions& options) {
  spec.validate();
  Rng seeding(seed, "epidemic.seeding");
  Rng dynamics(seed, "epidemic.dynamics");
  SimState st = seed_infection(g, params, seeding);

  RunResult result;
  result.n = g.node_count();
  result.seed_count = st.ever_infected_count;

  if (spec.global_at_start && is_global(spec.kind)) {
    if (!caches.global_scores) throw SimulationError("global centrality scores missing");
    global_immunize_once(g, st, spec, *caches.global_scores);
  }
  result.per_round.push_back(snapshot(st));

  while (!is_extinct(st)) {
    if (st.round >= options.round_cap)
      throw SimulationError("epidemic still active after the round cap of " + std::to_string(options.round_cap));
    ++st.round;
    st.immunized_this_round = 0;

    std::optional<StepAudit> audit;
    if (options.check_invariants) audit.emplace(st);
    spread_step(g, st, params, dynamics);
    if (audit) {
      audit->after_spread(g, st, params.window);
      audit.emplace(st);
    }
    recovery_step(st, params, dynamics);
    if (audit) {
      audit->check(st);
      audit.emplace(st);
    }
    third_step(g, st, spec, st.round, caches);
    if (audit) audit->check(st);

    result.per_round.push_back(snapshot(st));
  }

  result.total_infected = st.ever_infected_count;
  result.extinction_round = st.round;
  result.immunized_total = st.immunized_count;

  if (options.check_invariants) {
    std::size_t untouched = 0, immunized_clean = 0;
    for (NodeId i = 0; i < st.node_count(); ++i) {
      if (st.ever_infected[i]) continue;
      if (st.state[i] == Compartment::S) ++untouched;
      else if (st.state[i] == Compartment::M) ++immunized_clean;
      else throw SimulationError("node " + std::to_string(i) + " left S without being infected or immunized");
    }
    if (result.total_infected + untouched + immunized_clean != result.n)
      throw SimulationError("final accounting does not cover every node");
  }
  return result;
}

std::vector<double> ExperimentConfig::default_budget_grid() {
  std::vector<double> grid;
  for (int k = 1; k <= 40; ++k) grid.push_back(k / 100.0);
  return grid;
}

void ExperimentConfig::validate() const {
  netgen.validate();
  epidemic.validate();
  strategy.validate();
  if (replicates < 1) throw ConfigError("replicates must be at least 1");
  for (double f : budget_grid)
    if (!(f >= 0.0 && f <= 1.0)) throw ConfigError("budget grid values must lie in [0, 1], got " + exact(f));
  for (double mu : mu_values)
    if (!(mu >= 0.0 && mu <= 1.0)) throw ConfigError("mu must lie in [0, 1], got " + exact(mu));
  if (!(evolve_f >= 0.0 && evolve_f <= 1.0)) throw ConfigError("evolve_f must lie in [0, 1]");
  if (evolve_local_budget && !(*evolve_local_budget >= 0.0 && *evolve_local_budget <= 1.0))
    throw ConfigError("local budget must lie in [0, 1] or be unlimited");
  if (jobs < 1) throw ConfigError("jobs must be at least 1");
}

NetGenConfig replicate_network_config(const ExperimentConfig& cfg, std::size_t replicate) {
  NetGenConfig net = cfg.netgen;
  net.seed = derive_seed(cfg.seed_base, "experiment.network", replicate);
  return net;
}

std::uint64_t replicate_epidemic_seed(const ExperimentConfig& cfg, std::size_t replicate) {
  return derive_seed(cfg.seed_base, "experiment.epidemic", replicate);
}

RunResult run_single(const ExperimentConfig& cfg, std::size_t replicate) {
  cfg.validate();
  const auto net = generate(replicate_network_config(cfg, replicate));
  StrategySpec spec = cfg.strategy;
  spec.global_at_start = spec.global_at_start || cfg.global_at_start;
  const auto caches = build_caches(net.graph, spec, &net.communities);
  return simulate(net.graph, cfg.epidemic, spec, caches, replicate_epidemic_seed(cfg, replicate), cfg.sim);
}

Summary summarize(const std::vector<double>& values) {
  Summary s;
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.sd = values.size() > 1 ? std::sqrt(ss / static_cast<double>(values.size() - 1)) : 0.0;
  s.min = *std::min_element(values.begin(), values.end());
  s.max = *std::max_element(values.begin(), values.end());
  return s;
}

std::vector<std::optional<double>> sweep_budgets(StrategyKind kind, const std::vector<double>& grid) {
  std::vector<std::optional<double>> out;
  if (kind == StrategyKind::none) return {0.0};
  if (kind == StrategyKind::local_nc) out.push_back(std::nullopt);
  out.insert(out.end(), grid.begin(), grid.end());
  return out;
}

SweepResult sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.budget_grid.empty()) throw ConfigError("budget grid must not be empty");
  const auto mus = cfg.mu_values.empty() ? std::vector<double>{cfg.netgen.mu} : cfg.mu_values;

  // One job per (mu, replicate); each generates its network once and runs
  // every strategy and budget on it.
  const std::size_t jobs = mus.size() * cfg.replicates;
  std::vector<std::vector<RawRow>> slots(jobs);
  parallel_for(jobs, cfg.jobs, [&](std::size_t job) {
    const double mu = mus[job / cfg.replicates];
    const std::size_t rep = job % cfg.replicates;
    const auto prepared = prepare(cfg, rep, mu, cfg.strategies);
    const auto seed = replicate_epidemic_seed(cfg, rep);
    for (auto kind : cfg.strategies) {
      for (const auto& f : sweep_budgets(kind, cfg.budget_grid)) {
        const StrategySpec spec{kind, f, cfg.global_at_start};
        const auto run = simulate(prepared.net.graph, cfg.epidemic, spec, prepared.caches.at(kind), seed, cfg.sim);
        slots[job].push_back(raw_row(kind, mu, f, rep, run));
      }
    }
  });

  // Deterministic order: mu, strategy, budget, replicate.
  SweepResult result;
  for (std::size_t m = 0; m < mus.size(); ++m)
    for (std::size_t s = 0; s < cfg.strategies.size(); ++s) {
      const auto budgets = sweep_budgets(cfg.strategies[s], cfg.budget_grid);
      std::size_t offset = 0;
      for (std::size_t prior = 0; prior < s; ++prior)
        offset += sweep_budgets(cfg.strategies[prior], cfg.budget_grid).size();
      for (std::size_t b = 0; b < budgets.size(); ++b)
        for (std::size_t rep = 0; rep < cfg.replicates; ++rep)
          result.raw.push_back(slots[m * cfg.replicates + rep][offset + b]);
    }
  result.aggregate = aggregate(result.raw);
  return result;
}

std::vector<AggregateRow> aggregate(const std::vector<RawRow>& raw) {
  struct Group {
    AggregateRow row;
    std::vector<double> total, extinction, immunized;
  };
  std::vector<Group> groups;
  for (const auto& r : raw) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) {
      return g.row.strategy == r.strategy && g.row.mu == r.mu && g.row.f == r.f;
    });
    if (it == groups.end()) {
      groups.push_back({});
      it = groups.end() - 1;
      it->row.strategy = r.strategy;
      it->row.mu = r.mu;
      it->row.f = r.f;
    }
    it->total.push_back(static_cast<double>(r.total_infected));
    it->extinction.push_back(static_cast<double>(r.extinction_round));
    it->immunized.push_back(static_cast<double>(r.immunized_total));
  }
  std::vector<AggregateRow> out;
  for (auto& g : groups) {
    g.row.replicates = g.total.size();
    g.row.total_infected = summarize(g.total);
    g.row.extinction_round = summarize(g.extinction);
    g.row.immunized_total = summarize(g.immunized);
    out.push_back(g.row);
  }
  return out;
}

EvolutionResult time_evolution(const ExperimentConfig& cfg) {
  cfg.validate();
  struct Slot {
    std::vector<RawRow> raw;
    std::vector<std::vector<std::size_t>> infected;
  };
  std::vector<Slot> slots(cfg.replicates);
  const double mu = cfg.netgen.mu;
  parallel_for(cfg.replicates, cfg.jobs, [&](std::size_t rep) {
    const auto prepared = prepare(cfg, rep, mu, cfg.strategies);
    const auto seed = replicate_epidemic_seed(cfg, rep);
    for (auto kind : cfg.strategies) {
      std::optional<double> f = cfg.evolve_f;
      if (kind == StrategyKind::none) f = 0.0;
      if (kind == StrategyKind::local_nc) f = cfg.evolve_local_budget;
      const StrategySpec spec{kind, f, cfg.global_at_start};
      const auto run = simulate(prepared.net.graph, cfg.epidemic, spec, prepared.caches.at(kind), seed, cfg.sim);
      slots[rep].raw.push_back(raw_row(kind, mu, spec.budget_f, rep, run));
      auto& series = slots[rep].infected.emplace_back();
      for (const auto& r : run.per_round) series.push_back(r.I);
    }
  });

  EvolutionResult result;
  for (std::size_t s = 0; s < cfg.strategies.size(); ++s) {
    std::size_t longest = 0;
    for (std::size_t rep = 0; rep < cfg.replicates; ++rep) {
      result.raw.push_back(slots[rep].raw[s]);
      result.infected.push_back(slots[rep].infected[s]);
      longest = std::max(longest, slots[rep].infected[s].size());
    }
    for (std::size_t round = 0; round < longest; ++round) {
      double sum = 0.0;
      for (std::size_t rep = 0; rep < cfg.replicates; ++rep) {
        const auto& series = slots[rep].infected[s];
        if (round < series.size()) sum += static_cast<double>(series[round]);
      }
      result.series.push_back(
          {cfg.strategies[s], static_cast<std::uint32_t>(round), sum / static_cast<double>(cfg.replicates)});
    }
  }
  return result;
}

CostRow cost_of(const Graph& g, std::size_t replicate) {
  CostRow row;
  row.replicate = replicate;
  row.n = g.node_count();
  row.edges = g.edge_count();
  row.max_degree = g.max_degree();
  row.c_squared = static_cast<std::uint64_t>(row.max_degree) * row.max_degree;
  OpCounter counter;
  neighbour_centrality(g, &counter);
  row.nc_max_reads = counter.max();
  row.nc_total_reads = counter.total();
  row.degree_reads = g.node_count();  // one degree lookup per node
  row.bound_ok = row.nc_max_reads <= row.c_squared;
  return row;
}

CostResult cost_report(const ExperimentConfig& cfg, bool timing) {
  cfg.validate();
  CostResult result;
  result.rows.resize(cfg.replicates);
  std::vector<std::vector<TimingRow>> timings(cfg.replicates);
  parallel_for(cfg.replicates, cfg.jobs, [&](std::size_t rep) {
    const auto net = generate(replicate_network_config(cfg, rep));
    result.rows[rep] = cost_of(net.graph, rep);
    if (!timing) return;
    for (auto kind : {CentralityKind::neighbour, CentralityKind::degree, CentralityKind::community,
                      CentralityKind::structural, CentralityKind::betweenness}) {
      const auto start = std::chrono::steady_clock::now();
      compute_centrality(net.graph, kind, &net.communities);
      const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
      timings[rep].push_back({rep, kind, took.count()});
    }
  });
  for (auto& t : timings) result.timing.insert(result.timing.end(), t.begin(), t.end());
  return result;
}

void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& job) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        job(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned width = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(count)));
  if (width <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < width; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

void write_raw_csv(std::ostream& out, const std::vector<RawRow>& rows) {
  out << "strategy,mu,f,replicate,total_infected,extinction_round,immunized_total\n";
  for (const auto& r : rows)
    out << to_string(r.strategy) << ',' << fixed(r.mu, 4) << ',' << f_field(r.f) << ',' << r.replicate << ','
        << r.total_infected << ',' << r.extinction_round << ',' << r.immunized_total << '\n';
}

void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows) {
  out << "strategy,mu,f,replicates,total_infected_mean,total_infected_sd,extinction_round_mean,"
         "extinction_round_sd,immunized_total_mean,immunized_total_sd\n";
  for (const auto& r : rows)
    out << to_string(r.strategy) << ',' << fixed(r.mu, 4) << ',' << f_field(r.f) << ',' << r.replicates << ','
        << fixed(r.total_infected.mean) << ',' << fixed(r.total_infected.sd) << ','
        << fixed(r.extinction_round.mean) << ',' << fixed(r.extinction_round.sd) << ','
        << fixed(r.immunized_total.mean) << ',' << fixed(r.immunized_total.sd) << '\n';
}

void write_series_csv(std::ostream& out, const std::vector<SeriesRow>& rows) {
  out << "strategy,round,infected_mean\n";
  for (const auto& r : rows) out << to_string(r.strategy) << ',' << r.round << ',' << fixed(r.infected_mean) << '\n';
}

void write_rounds_csv(std::ostream& out, const RunResult& run) {
  out << "round,S,I,R,M,new_infections,immunized_this_round\n";
  for (const auto& r : run.per_round)
    out << r.round << ',' << r.S << ',' << r.I << ',' << r.R << ',' << r.M << ',' << r.new_infections << ','
        << r.immunized_this_round << '\n';
}

void write_cost_csv(std::ostream& out, const std::vector<CostRow>& rows) {
  out << "replicate,n,edges,max_degree,c_squared,nc_max_reads_per_node,nc_total_reads,degree_reads,bound_ok\n";
  for (const auto& r : rows)
    out << r.replicate << ',' << r.n << ',' << r.edges << ',' << r.max_degree << ',' << r.c_squared << ','
        << r.nc_max_reads << ',' << r.nc_total_reads << ',' << r.degree_reads << ',' << (r.bound_ok ? 1 : 0)
        << '\n';
}

void write_timing_csv(std::ostream& out, const std::vector<TimingRow>& rows) {
  out << "replicate,centrality,seconds\n";
  for (const auto& r : rows) out << r.replicate << ',' << to_string(r.kind) << ',' << fixed(r.seconds) << '\n';
}

}  // namespace epinet
