#include "epinet/epidemic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "epinet/error.hpp"
#include "epinet/text.hpp"

namespace epinet {

void EpidemicParams::validate() const {
  auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!unit(lambda)) throw ConfigError("lambda must lie in [0, 1], got " + exact(lambda));
  if (!unit(sigma)) throw ConfigError("sigma must lie in [0, 1], got " + exact(sigma));
  if (!unit(init_fraction)) throw ConfigError("init_fraction must lie in [0, 1], got " + exact(init_fraction));
  if (window < 1) throw ConfigError("window must be at least 1");
}

CompartmentCounts SimState::counts() const {
  CompartmentCounts c;
  for (auto s : state) ++c.by[static_cast<std::size_t>(s)];
  return c;
}

void SimState::immunize(NodeId i) {
  if (state[i] != Compartment::S && state[i] != Compartment::I)
    throw SimulationError("node " + std::to_string(i) + " cannot be immunized from its compartment");
  state[i] = Compartment::M;
  age[i] = 0;
  ++immunized_count;
  ++immunized_this_round;
}

std::size_t fraction_count(double fraction, std::size_t n) {
  const double want = fraction * static_cast<double>(n);
  return static_cast<std::size_t>(std::ceil(want - 1e-9 * std::max(1.0, want)));
}

SimState seed_infection(const Graph& g, const EpidemicParams& params, Rng& rng) {
  params.validate();
  const std::size_t n = g.node_count();
  const std::size_t seeds = fraction_count(params.init_fraction, n);
  if (seeds >= n && n > 0)
    throw ConfigError("init_fraction selects " + std::to_string(seeds) + " of " + std::to_string(n) +
                      " nodes; at least one must start susceptible");

  SimState st;
  st.state.assign(n, Compartment::S);
  st.age.assign(n, 0);
  st.active.assign(n, 1);
  st.ever_infected.assign(n, 0);

  // Partial Fisher-Yates over the id range.
  std::vector<NodeId> pool(n);
  std::iota(pool.begin(), pool.end(), NodeId{0});
  for (std::size_t k = 0; k < seeds; ++k) {
    const std::size_t j = k + static_cast<std::size_t>(rng.below(n - k));
    std::swap(pool[k], pool[j]);
    const NodeId i = pool[k];
    st.state[i] = Compartment::I;
    st.ever_infected[i] = 1;
  }
  st.ever_infected_count = seeds;
  return st;
}

void spread_step(const Graph& g, SimState& st, const EpidemicParams& params, Rng& rng) {
  const std::size_t n = st.node_count();
  const std::vector<Compartment> before = st.state;
  st.new_infections = 0;
  for (NodeId i = 0; i < n; ++i) {
    if (before[i] != Compartment::I || st.age[i] >= params.window) continue;
    for (NodeId j : g.neighbors(i)) {
      if (before[j] != Compartment::S) continue;
      if (!rng.bernoulli(params.lambda)) continue;
      if (st.state[j] != Compartment::S) continue;  // already caught this step
      st.state[j] = Compartment::I;
      st.age[j] = 0;
      st.ever_infected[j] = 1;
      ++st.ever_infected_count;
      ++st.new_infections;
    }
  }
}

void recovery_step(SimState& st, const EpidemicParams& params, Rng& rng) {
  for (NodeId i = 0; i < st.node_count(); ++i) {
    if (st.state[i] != Compartment::I) continue;
    if (rng.bernoulli(params.sigma)) {
      st.state[i] = Compartment::R;
      st.age[i] = 0;
    } else {
      ++st.age[i];
    }
  }
}

bool is_extinct(const SimState& st) {
  return std::none_of(st.state.begin(), st.state.end(), [](Compartment c) { return c == Compartment::I; });
}

}  // namespace epinet
