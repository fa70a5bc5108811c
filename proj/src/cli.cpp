#include "epinet/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "epinet/centrality.hpp"
#include "epinet/error.hpp"
#include "epinet/experiment.hpp"
#include "epinet/netgen.hpp"
#include "epinet/plot.hpp"
#include "epinet/strategies.hpp"
#include "epinet/text.hpp"

namespace epinet::cli {

namespace fs = std::filesystem;

namespace {

struct KeySpec {
  const char* name;
  const char* fallback;
  const char* help;
  bool flag = false;
};

std::string default_budgets() {
  std::string s;
  for (double f : ExperimentConfig::default_budget_grid()) s += (s.empty() ? "" : ",") + fixed(f, 2);
  return s;
}

const std::vector<KeySpec>& key_table() {
  static const std::vector<KeySpec> table = {
      {"seed", "1", "base seed (network seed for generate)"},
      {"out", "out", "output directory"},
      {"jobs", "1", "worker threads"},
      {"verbose", "false", "echo the resolved configuration to stderr", true},
      {"n", "5000", "node count"},
      {"k_avg", "8", "target mean degree"},
      {"k_min", "0", "minimum degree, 0 = tuned to k_avg"},
      {"k_max", "120", "maximum degree"},
      {"gamma", "3", "degree exponent in (1, 3]"},
      {"mu", "0.3", "mixing parameter (comma list for sweep)"},
      {"communities_min", "10", "smallest community count"},
      {"communities_max", "50", "largest community count"},
      {"community_size_ratio", "10", "largest/smallest community size before rescaling"},
      {"rewire_passes", "100", "collision repair passes"},
      {"lambda", "0.1", "spreading rate"},
      {"sigma", "0.1", "recovery rate"},
      {"window", "5", "spreading rounds per infected node"},
      {"init_fraction", "0.01", "initially infected share"},
      {"strategy", "local_nc", "none|local_nc|global_degree|global_betweenness|global_structural|global_community"},
      {"budget_f", "unlimited", "immunization budget fraction or 'unlimited' (local only)"},
      {"global_at_start", "false", "fire global removal before the first spread step", true},
      {"strategies", "local_nc,global_degree,global_betweenness,global_structural,global_community",
       "comma list of strategies"},
      {"budgets", "", "comma list of budget fractions, or lo:hi:step"},
      {"replicates", "10", "networks per cell"},
      {"replicate", "0", "replicate index"},
      {"evolve_f", "0.04", "budget of the global strategies"},
      {"local_budget", "unlimited", "budget of the local strategy"},
      {"check_invariants", "true", "assert conservation and locality every step"},
      {"kind", "neighbour", "degree|betweenness|structural|community|neighbour"},
      {"graph", "", "edge-list file (empty: generate)"},
      {"communities", "", "community csv node,community (empty: generator labels or label propagation)"},
      {"dump_rounds", "false", "write per-round state counts", true},
      {"timing", "false", "also write wall-clock per centrality", true},
      {"in", "", "directory holding aggregate.csv and/or timeseries.csv"},
  };
  return table;
}

const KeySpec& key_spec(const std::string& key) {
  for (const auto& k : key_table())
    if (key == k.name) return k;
  throw ConfigError("unknown key '" + key + "'");
}

const std::vector<std::string> kNetgenKeys = {"n", "k_avg", "k_min", "k_max", "gamma", "mu",
                                              "communities_min", "communities_max", "community_size_ratio",
                                              "rewire_passes"};
const std::vector<std::string> kEpidemicKeys = {"lambda", "sigma", "window", "init_fraction"};

std::vector<std::string> join(std::initializer_list<std::vector<std::string>> parts) {
  std::vector<std::string> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

std::string dashed(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

std::string canonical(std::string key) {
  std::replace(key.begin(), key.end(), '-', '_');
  return key;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_real(const std::string& key, const std::string& text) {
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(v))
    throw ConfigError("invalid value for " + key + ": '" + text + "' (expected a real number)");
  return v;
}

std::uint64_t to_uint(const std::string& key, const std::string& text) {
  char* end = nullptr;
  errno = 0;
  if (text.empty() || text.front() == '-')
    throw ConfigError("invalid value for " + key + ": '" + text + "' (expected a non-negative integer)");
  const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
  if (end != text.c_str() + text.size() || errno == ERANGE)
    throw ConfigError("invalid value for " + key + ": '" + text + "' (expected a non-negative integer)");
  return v;
}

std::uint32_t to_u32(const std::string& key, const std::string& text) {
  const auto v = to_uint(key, text);
  if (v > UINT32_MAX) throw ConfigError("value for " + key + " is too large: " + text);
  return static_cast<std::uint32_t>(v);
}

bool to_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("invalid value for " + key + ": '" + text + "' (expected true or false)");
}

std::vector<double> to_real_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::istringstream in(text);
    std::string a, b, c;
    std::getline(in, a, ':');
    std::getline(in, b, ':');
    std::getline(in, c, ':');
    const double lo = to_real(key, trim(a)), hi = to_real(key, trim(b)), step = to_real(key, trim(c));
    if (!(step > 0) || hi < lo) throw ConfigError("invalid range for " + key + ": '" + text + "'");
    const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    for (long k = 0; k <= count; ++k) out.push_back(lo + static_cast<double>(k) * step);
    return out;
  }
  for (const auto& item : split_list(text)) out.push_back(to_real(key, item));
  if (out.empty()) throw ConfigError(key + " must list at least one value");
  return out;
}

NetGenConfig netgen_from(const Settings& s, double mu) {
  NetGenConfig c;
  c.n = to_uint("n", s.get("n"));
  c.k_avg = to_real("k_avg", s.get("k_avg"));
  c.k_min = to_u32("k_min", s.get("k_min"));
  c.k_max = to_u32("k_max", s.get("k_max"));
  c.gamma = to_real("gamma", s.get("gamma"));
  c.mu = mu;
  c.communities_min = to_u32("communities_min", s.get("communities_min"));
  c.communities_max = to_u32("communities_max", s.get("communities_max"));
  c.community_size_ratio = to_real("community_size_ratio", s.get("community_size_ratio"));
  c.rewire_passes = to_u32("rewire_passes", s.get("rewire_passes"));
  c.seed = to_uint("seed", s.get("seed"));
  c.validate();
  return c;
}

double single_mu(const Settings& s) {
  const auto mus = to_real_list("mu", s.get("mu"));
  if (mus.size() != 1) throw ConfigError("mu takes a single value for " + s.command);
  return mus.front();
}

EpidemicParams epidemic_from(const Settings& s) {
  EpidemicParams p;
  p.lambda = to_real("lambda", s.get("lambda"));
  p.sigma = to_real("sigma", s.get("sigma"));
  p.window = to_u32("window", s.get("window"));
  p.init_fraction = to_real("init_fraction", s.get("init_fraction"));
  p.validate();
  return p;
}

ExperimentConfig experiment_from(const Settings& s, double mu) {
  ExperimentConfig c;
  c.netgen = netgen_from(s, mu);
  if (s.has("lambda")) c.epidemic = epidemic_from(s);
  c.seed_base = to_uint("seed", s.get("seed"));
  if (s.has("jobs")) c.jobs = to_u32("jobs", s.get("jobs"));
  if (s.has("replicates")) c.replicates = to_uint("replicates", s.get("replicates"));
  if (s.has("global_at_start")) c.global_at_start = to_bool("global_at_start", s.get("global_at_start"));
  if (s.has("check_invariants")) c.sim.check_invariants = to_bool("check_invariants", s.get("check_invariants"));
  if (s.has("strategies")) {
    c.strategies.clear();
    for (const auto& name : split_list(s.get("strategies"))) c.strategies.push_back(parse_strategy_kind(name));
    if (c.strategies.empty()) throw ConfigError("strategies must list at least one strategy");
  }
  if (s.has("budgets")) c.budget_grid = to_real_list("budgets", s.get("budgets"));
  if (s.has("evolve_f")) c.evolve_f = to_real("evolve_f", s.get("evolve_f"));
  if (s.has("local_budget")) c.evolve_local_budget = parse_budget(s.get("local_budget"));
  if (s.has("strategy")) {
    c.strategy.kind = parse_strategy_kind(s.get("strategy"));
    c.strategy.budget_f = parse_budget(s.get("budget_f"));
    c.strategy.global_at_start = c.global_at_start;
  }
  c.mu_values = {mu};
  c.validate();
  return c;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  return f;
}

CommunityAssignment read_communities(const std::string& path, std::size_t n) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  const auto rows = read_csv(in);
  CommunityAssignment c;
  c.label.assign(n, UINT32_MAX);
  for (const auto& row : rows) {
    const auto node = to_uint("node", row.at("node"));
    if (node >= n) throw ConfigError("community file names node " + std::to_string(node) + " outside the graph");
    c.label[node] = to_u32("community", row.at("community"));
    c.count = std::max(c.count, c.label[node] + 1);
  }
  for (std::size_t i = 0; i < n; ++i)
    if (c.label[i] == UINT32_MAX) throw ConfigError("community file has no label for node " + std::to_string(i));
  return c;
}

void write_communities(std::ostream& out, const CommunityAssignment& c) {
  out << "node,community\n";
  for (std::size_t i = 0; i < c.label.size(); ++i) out << i << ',' << c.label[i] << '\n';
}

// ---- subcommands -----------------------------------------------------

void cmd_generate(const Settings& s, const fs::path& out) {
  const auto cfg = netgen_from(s, single_mu(s));
  const auto net = generate(cfg);
  save_edge_list((out / "network.edges").string(), net.graph);
  auto meta = open_out(out / "network.meta");
  write_metadata(meta, cfg, net.report);
  auto comm = open_out(out / "communities.csv");
  write_communities(comm, net.communities);
}

void cmd_centrality(const Settings& s, const fs::path& out) {
  const auto kind = parse_centrality_kind(s.get("kind"));
  if (s.get("graph").empty()) throw ConfigError("centrality needs --graph");
  const auto g = load_edge_list(s.get("graph"));
  std::optional<CommunityAssignment> labels;
  if (!s.get("communities").empty()) labels = read_communities(s.get("communities"), g.node_count());
  const auto scores = compute_centrality(g, kind, labels ? &*labels : nullptr);
  auto f = open_out(out / "centrality.csv");
  f << "node,score\n";
  for (std::size_t i = 0; i < scores.values.size(); ++i) f << i << ',' << fixed(scores.values[i], 9) << '\n';
}

void cmd_simulate(const Settings& s, const fs::path& out) {
  const double mu = single_mu(s);
  const auto cfg = experiment_from(s, mu);
  const auto replicate = to_uint("replicate", s.get("replicate"));
  RunResult run;
  if (s.get("graph").empty()) {
    run = run_single(cfg, replicate);
  } else {
    const auto g = load_edge_list(s.get("graph"));
    std::optional<CommunityAssignment> labels;
    if (!s.get("communities").empty()) labels = read_communities(s.get("communities"), g.node_count());
    const auto caches = build_caches(g, cfg.strategy, labels ? &*labels : nullptr);
    run = simulate(g, cfg.epidemic, cfg.strategy, caches, replicate_epidemic_seed(cfg, replicate), cfg.sim);
  }
  auto f = open_out(out / "run.csv");
  write_raw_csv(f, {RawRow{cfg.strategy.kind, mu, cfg.strategy.budget_f, replicate, run.total_infected,
                           run.extinction_round, run.immunized_total}});
  if (to_bool("dump_rounds", s.get("dump_rounds"))) {
    auto r = open_out(out / "rounds.csv");
    write_rounds_csv(r, run);
  }
}

void cmd_sweep(const Settings& s, const fs::path& out) {
  const auto mus = to_real_list("mu", s.get("mu"));
  auto cfg = experiment_from(s, mus.front());
  cfg.mu_values = mus;
  const auto result = sweep(cfg);
  auto raw = open_out(out / "raw.csv");
  write_raw_csv(raw, result.raw);
  auto agg = open_out(out / "aggregate.csv");
  write_aggregate_csv(agg, result.aggregate);
}

void cmd_evolve(const Settings& s, const fs::path& out) {
  const auto cfg = experiment_from(s, single_mu(s));
  const auto result = time_evolution(cfg);
  auto series = open_out(out / "timeseries.csv");
  write_series_csv(series, result.series);
  auto raw = open_out(out / "raw.csv");
  write_raw_csv(raw, result.raw);
}

void cmd_cost(const Settings& s, const fs::path& out) {
  const auto cfg = experiment_from(s, single_mu(s));
  const bool timing = to_bool("timing", s.get("timing"));
  const auto result = cost_report(cfg, timing);
  auto f = open_out(out / "cost.csv");
  write_cost_csv(f, result.rows);
  if (timing) {
    auto t = open_out(out / "timing.csv");
    write_timing_csv(t, result.timing);
  }
  for (const auto& row : result.rows)
    if (!row.bound_ok)
      throw Error("replicate " + std::to_string(row.replicate) + ": neighbour centrality read " +
                  std::to_string(row.nc_max_reads) + " degrees at one node, above c^2 = " +
                  std::to_string(row.c_squared));
}

void cmd_plot(const Settings& s, const fs::path& out) {
  if (s.get("in").empty()) throw ConfigError("plot needs --in");
  const fs::path in = s.get("in");
  bool wrote = false;
  if (std::ifstream agg{in / "aggregate.csv", std::ios::binary}) {
    const auto rows = read_csv(agg);
    std::vector<std::string> mus;
    for (const auto& row : rows)
      if (std::find(mus.begin(), mus.end(), row.at("mu")) == mus.end()) mus.push_back(row.at("mu"));
    for (const auto& mu : mus) {
      auto f = open_out(out / ("budget_mu" + mu + ".svg"));
      f << render_line_chart(budget_series(rows, mu),
                             {"Total infected vs nodes removed, mu = " + mu, "nodes removed (%)", "total infected"});
      wrote = true;
    }
  }
  if (std::ifstream ts{in / "timeseries.csv", std::ios::binary}) {
    auto f = open_out(out / "evolution.svg");
    f << render_line_chart(evolution_series(read_csv(ts)), {"Infected per round", "round", "infected"});
    wrote = true;
  }
  if (!wrote) throw Error("no aggregate.csv or timeseries.csv under " + in.string());
}

struct Command {
  const char* name;
  const char* description;
  std::vector<std::string> keys;
  void (*action)(const Settings&, const fs::path&);
};

const std::vector<Command>& commands() {
  static const std::vector<Command> table = {
      {"generate", "generate an LFR-style network", join({{"seed", "out", "verbose"}, kNetgenKeys}), cmd_generate},
      {"centrality", "score every node of an edge-list graph",
       {"kind", "graph", "communities", "out", "verbose"}, cmd_centrality},
      {"simulate", "one epidemic run",
       join({{"seed", "out", "verbose", "replicate", "strategy", "budget_f", "global_at_start", "graph", "communities",
              "dump_rounds", "check_invariants"},
             kNetgenKeys, kEpidemicKeys}),
       cmd_simulate},
      {"sweep", "total infected against immunization budget",
       join({{"seed", "out", "jobs", "verbose", "strategies", "budgets", "replicates", "global_at_start",
              "check_invariants"},
             kNetgenKeys, kEpidemicKeys}),
       cmd_sweep},
      {"evolve", "infected per round at a fixed budget",
       join({{"seed", "out", "jobs", "verbose", "strategies", "evolve_f", "local_budget", "replicates",
              "global_at_start", "check_invariants"},
             kNetgenKeys, kEpidemicKeys}),
       cmd_evolve},
      {"cost", "neighbour centrality operation counts",
       join({{"seed", "out", "jobs", "verbose", "replicates", "timing"}, kNetgenKeys}), cmd_cost},
      {"plot", "render SVG charts from sweep/evolve CSVs", {"in", "out", "verbose"}, cmd_plot},
  };
  return table;
}

const Command* find_command(const std::string& name) {
  for (const auto& c : commands())
    if (name == c.name) return &c;
  return nullptr;
}

}  // namespace

const std::string& Settings::get(const std::string& key) const {
  for (const auto& [k, v] : values)
    if (k == key) return v;
  throw ConfigError("setting '" + key + "' is not available for " + command);
}

bool Settings::has(const std::string& key) const {
  return std::any_of(values.begin(), values.end(), [&](const auto& kv) { return kv.first == key; });
}

void Settings::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : values)
    if (k == key) {
      v = value;
      return;
    }
  throw ConfigError("unknown key '" + key + "' for " + command);
}

std::vector<std::string> keys_for(const std::string& command) {
  const auto* c = find_command(command);
  return c ? c->keys : std::vector<std::string>{};
}

Settings defaults_for(const std::string& command) {
  Settings s;
  s.command = command;
  for (const auto& key : keys_for(command)) {
    std::string value = key_spec(key).fallback;
    if (key == "budgets") value = default_budgets();
    if (key == "mu" && command == "sweep") value = "0.3,0.5,0.7";
    s.values.emplace_back(key, value);
  }
  return s;
}

std::vector<std::pair<std::string, std::string>> parse_config_text(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  for (int number = 1; std::getline(in, line); ++number) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(number) + ": expected key=value, got '" + line + "'");
    const auto key = canonical(trim(line.substr(0, eq)));
    if (key.empty()) throw ConfigError("config line " + std::to_string(number) + ": empty key");
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    out.emplace_back(key, value);
  }
  return out;
}

void apply_config(Settings& settings, const std::vector<std::pair<std::string, std::string>>& entries) {
  for (const auto& [key, value] : entries) {
    if (key == "command") {
      if (value != settings.command)
        throw ConfigError("config file is for '" + value + "', not '" + settings.command + "'");
      continue;
    }
    if (!settings.has(key)) throw ConfigError("unknown key '" + key + "' for " + settings.command);
    settings.set(key, value);
  }
}

std::string render_resolved(const Settings& settings) {
  std::string out = "command=" + settings.command + "\n";
  for (const auto& [k, v] : settings.values) out += k + "=" + v + "\n";
  return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Epidemic immunization experiments on LFR-style networks", "epinet"};
  app.require_subcommand(0, 1);

  std::map<std::string, std::string> flags;
  std::map<std::string, std::string> config_path;
  for (const auto& cmd : commands()) {
    auto* sub = app.add_subcommand(cmd.name, cmd.description);
    sub->add_option_function<std::string>(
        "--config", [&, name = std::string(cmd.name)](const std::string& v) { config_path[name] = v; },
        "key=value configuration file");
    for (const auto& key : cmd.keys) {
      const auto& spec = key_spec(key);
      if (spec.flag) {
        sub->add_flag_function(
            "--" + dashed(key), [&flags, key](std::int64_t) { flags[key] = "true"; }, spec.help);
      } else {
        sub->add_option_function<std::string>(
            "--" + dashed(key), [&flags, key](const std::string& v) { flags[key] = v; }, spec.help);
      }
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "epinet: error: " << e.what() << '\n';
    return 2;
  }

  const auto fired = app.get_subcommands();
  if (fired.empty()) {
    err << app.help();
    return 1;
  }
  const auto& name = fired.front()->get_name();
  const auto* cmd = find_command(name);

  try {
    Settings settings = defaults_for(name);
    if (auto it = config_path.find(name); it != config_path.end()) {
      std::ifstream in(it->second, std::ios::binary);
      if (!in) throw ConfigError("cannot open config file " + it->second);
      apply_config(settings, parse_config_text(in));
    }
    for (const auto& [k, v] : flags) settings.set(k, v);

    const fs::path outdir = settings.get("out");
    fs::create_directories(outdir);
    const auto resolved = render_resolved(settings);
    {
      auto f = open_out(outdir / "config.resolved");
      f << resolved;
    }
    if (to_bool("verbose", settings.get("verbose"))) err << resolved;
    cmd->action(settings, outdir);
  } catch (const ConfigError& e) {
    err << "epinet: error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "epinet: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace epinet::cli
