// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Reference-scale parts take a few minutes on one core.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "epinet/centrality.hpp"
#include "epinet/cli.hpp"
#include "epinet/experiment.hpp"
#include "epinet/netgen.hpp"
#include "epinet/strategies.hpp"
#include "support.hpp"

using namespace epinet;
using namespace epinet::testing;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

unsigned worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

// Reference-scale sweep shared by criteria 5, 6 and 7.
ExperimentConfig reference_config() {
  ExperimentConfig cfg;
  cfg.jobs = worker_count();
  cfg.sim.check_invariants = true;
  return cfg;
}

const SweepResult& reference_sweep() {
  static const SweepResult result = sweep(reference_config());
  return result;
}

const AggregateRow* find_row(const SweepResult& r, StrategyKind k, double mu, std::optional<double> f) {
  for (const auto& a : r.aggregate)
    if (a.strategy == k && std::abs(a.mu - mu) < 1e-12 && a.f.has_value() == f.has_value() &&
        (!f || std::abs(*a.f - *f) < 1e-12))
      return &a;
  return nullptr;
}

Outcome criterion_nc_identity() {
  std::size_t graphs = 0, nodes = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    NetGenConfig cfg;
    cfg.n = 200;
    cfg.k_max = 40;
    cfg.communities_min = 2;
    cfg.communities_max = 8;
    cfg.seed = seed;
    const auto g = generate(cfg).graph;
    const auto nc = neighbour_centrality(g).values;
    for (NodeId i = 0; i < g.node_count(); ++i) {
      if (g.degree(i) == 0) continue;
      double sum = 0;
      for (NodeId j : g.neighbors(i)) sum += static_cast<double>(g.degree(j));
      const double d2 = static_cast<double>(g.degree(i) * g.degree(i));
      worst = std::max(worst, std::abs(nc[i] * sum - d2) / d2);
      ++nodes;
    }
    ++graphs;
  }
  double regular_worst = 0.0;
  for (const auto& g : {complete(2), complete(25), cycle(17), circulant(200, 4), circulant(101, 10), hypercube(7)})
    for (double v : neighbour_centrality(g).values) regular_worst = std::max(regular_worst, std::abs(v - 1.0));
  return {worst <= 1e-12 && regular_worst == 0.0,
          std::to_string(graphs) + " graphs, " + std::to_string(nodes) + " nodes, max rel err " + sci(worst) +
              "; regular graphs max |NC-1| " + sci(regular_worst)};
}

Outcome criterion_star_separation() {
  const auto g = disjoint_union(complete(20), star(20));
  const NodeId centre = 20, clique_node = 5;
  const auto local = LocalStrategyState::build(g);
  const NodeId top = rank({CentralityKind::neighbour, local.nc}).front();

  SimState st;
  st.state.assign(g.node_count(), Compartment::S);
  st.age.assign(g.node_count(), 0);
  st.active.assign(g.node_count(), 1);
  st.ever_infected.assign(g.node_count(), 0);
  for (NodeId i : {clique_node, centre}) {
    st.state[i] = Compartment::I;
    st.ever_infected[i] = 1;
  }
  local_immunize_step(g, st, {StrategyKind::local_nc, std::nullopt}, local);
  const bool immunized = st.state[centre] == Compartment::M;
  return {top == centre && immunized, "argmax NC = node " + std::to_string(top) + " (NC " + num(local.nc[top]) +
                                          "), centre after first local step: " +
                                          (immunized ? "immunized" : "not immunized")};
}

Outcome criterion_betweenness_oracle() {
  Rng rng(2024);
  int graphs = 0;
  double worst = 0;
  while (graphs < 200) {
    const std::size_t n = 2 + rng.below(7);
    const auto g = random_graph(n, 0.2 + 0.6 * rng.uniform(), rng);
    if (!connected(g)) continue;
    const auto want = brute_force_betweenness(g);
    const auto got = betweenness_centrality(g).values;
    for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(want[i] - got[i]));
    ++graphs;
  }
  return {worst <= 1e-9, std::to_string(graphs) + " connected graphs, max |error| " + sci(worst)};
}

Outcome criterion_generator() {
  const auto base = reference_config();
  bool ok = true;
  std::ostringstream detail;
  double prev = -1;
  for (double mu : {0.3, 0.5, 0.7}) {
    double mu_sum = 0, worst_mean_gap = 0, worst_mu_gap = 0;
    std::size_t max_degree = 0;
    for (std::size_t rep = 0; rep < 10; ++rep) {
      auto cfg = replicate_network_config(base, rep);
      cfg.mu = mu;
      const auto r = generate(cfg).report;
      ok = ok && r.realized_avg_degree >= 7.2 && r.realized_avg_degree <= 8.8;
      ok = ok && r.realized_max_degree <= 120;
      ok = ok && std::abs(r.realized_mu - mu) <= 0.05;
      worst_mean_gap = std::max(worst_mean_gap, std::abs(r.realized_avg_degree - 8.0));
      worst_mu_gap = std::max(worst_mu_gap, std::abs(r.realized_mu - mu));
      max_degree = std::max(max_degree, r.realized_max_degree);
      mu_sum += r.realized_mu;
    }
    ok = ok && mu_sum / 10 > prev;
    prev = mu_sum / 10;
    detail << "mu " << num(mu, 1) << ": mean realized_mu " << num(mu_sum / 10) << ", max |<k>-8| "
           << num(worst_mean_gap) << ", max |mu gap| " << num(worst_mu_gap) << ", max degree " << max_degree << "; ";
  }
  return {ok, detail.str()};
}

Outcome criterion_conservation() {
  // The sweep runs with per-step audits on: any conservation, transition
  // or locality breach throws. An independent replay follows.
  std::size_t runs = 0;
  try {
    runs = reference_sweep().raw.size();
  } catch (const std::exception& e) {
    return {false, std::string("sweep raised: ") + e.what()};
  }

  const auto cfg = reference_config();
  std::size_t rounds = 0;
  for (std::size_t rep = 0; rep < 3; ++rep) {
    const auto net = generate(replicate_network_config(cfg, rep));
    const auto& g = net.graph;
    Rng seeding(replicate_epidemic_seed(cfg, rep), "epidemic.seeding");
    Rng dynamics(replicate_epidemic_seed(cfg, rep), "epidemic.dynamics");
    auto st = seed_infection(g, cfg.epidemic, seeding);
    const auto local = LocalStrategyState::build(g);
    while (!is_extinct(st)) {
      ++st.round;
      const auto before = st.state;
      const auto ages = st.age;
      spread_step(g, st, cfg.epidemic, dynamics);
      for (NodeId j = 0; j < g.node_count(); ++j)
        if (before[j] == Compartment::S && st.state[j] == Compartment::I) {
          bool source = false;
          for (NodeId k : g.neighbors(j)) source = source || (before[k] == Compartment::I && ages[k] < 5);
          if (!source) return {false, "replay: unexplained infection at node " + std::to_string(j)};
        }
      recovery_step(st, cfg.epidemic, dynamics);
      local_immunize_step(g, st, {StrategyKind::local_nc, std::nullopt}, local);
      if (st.counts().total() != g.node_count()) return {false, "replay: counts do not sum to n"};
      ++rounds;
    }
  }
  return {true, std::to_string(runs) + " audited sweep runs; replay of " + std::to_string(rounds) +
                    " rounds conserved and local"};
}

Outcome criterion_four_percent() {
  const auto* row = find_row(reference_sweep(), StrategyKind::local_nc, 0.3, std::nullopt);
  if (!row) return {false, "no local_nc unlimited row at mu 0.3"};
  const double share = row->immunized_total.mean / 5000.0;
  return {share <= 0.08, "mean immunized_total/n = " + num(share) + " (band <= 0.08), mean extinction round " +
                             num(row->extinction_round.mean, 1)};
}

Outcome criterion_baseline_inefficiency() {
  const auto* local = find_row(reference_sweep(), StrategyKind::local_nc, 0.3, std::nullopt);
  const auto* degree = find_row(reference_sweep(), StrategyKind::global_degree, 0.3, 0.04);
  if (!local || !degree) return {false, "missing rows"};
  const double share = local->immunized_total.mean / 5000.0;
  const double ratio = degree->total_infected.mean / local->total_infected.mean;
  return {share <= 0.08 && ratio >= 3.0,
          "global_degree@0.04 mean total " + num(degree->total_infected.mean, 1) + ", local_nc mean total " +
              num(local->total_infected.mean, 1) + " at budget share " + num(share) + "; ratio " + num(ratio, 3) +
              " (need >= 3)"};
}

Outcome criterion_time_evolution() {
  auto cfg = reference_config();
  cfg.netgen.mu = 0.3;
  cfg.strategies = {StrategyKind::local_nc, StrategyKind::global_degree};
  const auto ev = time_evolution(cfg);
  double local_sum = 0, degree_sum = 0;
  int wins = 0;
  for (std::size_t rep = 0; rep < cfg.replicates; ++rep) {
    const auto& l = ev.raw[rep];
    const auto& d = ev.raw[cfg.replicates + rep];
    local_sum += l.extinction_round;
    degree_sum += d.extinction_round;
    if (l.extinction_round < d.extinction_round) ++wins;
  }
  const double local_mean = local_sum / cfg.replicates, degree_mean = degree_sum / cfg.replicates;
  return {local_mean <= 50 && wins >= 8,
          "local_nc mean extinction " + num(local_mean, 1) + " (need <= 50), global_degree@0.04 " +
              num(degree_mean, 1) + "; local earlier on " + std::to_string(wins) + "/10 replicates (need >= 8)"};
}

Outcome criterion_cost_bound() {
  bool ok = true;
  std::size_t networks = 0;
  std::uint64_t worst_reads = 0, worst_c2 = 0;
  for (double mu : {0.3, 0.5, 0.7}) {
    auto cfg = reference_config();
    cfg.netgen.mu = mu;
    for (const auto& row : cost_report(cfg).rows) {
      ok = ok && row.bound_ok && row.nc_max_reads <= row.c_squared;
      if (row.nc_max_reads * worst_c2 >= worst_reads * row.c_squared) {
        worst_reads = row.nc_max_reads;
        worst_c2 = row.c_squared;
      }
      ++networks;
    }
  }
  bool exact = true;
  for (std::size_t n = 2; n <= 40; ++n) {
    const auto g = complete(n);
    OpCounter counter;
    neighbour_centrality(g, &counter);
    const std::uint64_t c2 = (n - 1) * (n - 1);
    for (auto r : counter.reads) exact = exact && r == c2;
  }
  return {ok && exact, std::to_string(networks) + " generated networks within c^2 (tightest " +
                           std::to_string(worst_reads) + " of " + std::to_string(worst_c2) + "); K_2..K_40 " +
                           (exact ? "equal c^2 at every node" : "NOT equal to c^2")};
}

std::map<std::string, std::string> directory_bytes(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    files[fs::relative(e.path(), dir).string()] = s.str();
  }
  return files;
}

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "epinet");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  return cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
}

Outcome criterion_determinism() {
  const auto root = fs::temp_directory_path() / "epinet_acceptance_determinism";
  fs::remove_all(root);
  const std::vector<std::string> small{"--n", "400", "--k-max", "40", "--communities-min", "2",
                                        "--communities-max", "5", "--seed", "3"};
  const std::vector<std::pair<std::string, std::vector<std::string>>> commands = {
      {"generate", {}},
      {"centrality", {"--graph", (root / "graph" / "network.edges").string(), "--kind", "betweenness"}},
      {"simulate", {"--strategy", "local_nc", "--dump-rounds"}},
      {"sweep", {"--replicates", "2", "--mu", "0.3,0.6", "--budgets", "0.02,0.05", "--jobs", "2"}},
      {"evolve", {"--replicates", "2"}},
      {"cost", {"--replicates", "2"}},
      {"plot", {"--in", (root / "sweep").string()}},
  };
  // Shared input for the centrality command.
  std::vector<std::string> gen{"generate", "--out", (root / "graph").string()};
  gen.insert(gen.end(), small.begin(), small.end());
  if (run_cli(gen) != 0) return {false, "could not generate the input graph"};

  std::vector<std::string> checked;
  for (const auto& [name, extra] : commands) {
    // Same --out both times, so the resolved configs are identical.
    std::map<std::string, std::string> snapshots[2];
    const auto dir = root / name;
    for (int pass = 0; pass < 2; ++pass) {
      fs::remove_all(dir);
      std::vector<std::string> args{name, "--out", dir.string()};
      if (name != "plot" && name != "centrality") args.insert(args.end(), small.begin(), small.end());
      args.insert(args.end(), extra.begin(), extra.end());
      if (run_cli(args) != 0) return {false, name + " exited nonzero"};
      snapshots[pass] = directory_bytes(dir);
    }
    if (snapshots[0] != snapshots[1]) return {false, name + " outputs differ between identical invocations"};
    checked.push_back(name + ":" + std::to_string(snapshots[0].size()));
  }
  fs::remove_all(root);
  std::string list;
  for (const auto& c : checked) list += (list.empty() ? "" : " ") + c;
  return {true, "byte-identical file sets (command:files) " + list};
}

}  // namespace

// Arguments, if any, select criteria by number.
int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"NC identity", criterion_nc_identity},
      {"star/clique separation", criterion_star_separation},
      {"betweenness oracle", criterion_betweenness_oracle},
      {"generator statistics", criterion_generator},
      {"conservation and locality", criterion_conservation},
      {"4% sufficiency", criterion_four_percent},
      {"baseline inefficiency", criterion_baseline_inefficiency},
      {"time evolution", criterion_time_evolution},
      {"O(c^2) read bound", criterion_cost_bound},
      {"determinism", criterion_determinism},
  };
  std::vector<bool> selected(criteria.size(), argc < 2);
  for (int a = 1; a < argc; ++a) {
    const auto k = static_cast<std::size_t>(std::atoi(argv[a]));
    if (k >= 1 && k <= criteria.size()) selected[k - 1] = true;
  }
  int failures = 0, ran = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    if (!selected[k]) continue;
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
    if (!o.pass) ++failures;
    std::printf("criterion %zu [%s]: %s - %s (%.1fs)\n", k + 1, criteria[k].first.c_str(), o.pass ? "PASS" : "FAIL",
                o.detail.c_str(), took.count());
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria failed\n", failures, ran);
  return failures ? 1 : 0;
}
