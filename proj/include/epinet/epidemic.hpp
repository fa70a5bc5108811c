#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "epinet/graph.hpp"
#include "epinet/rng.hpp"

namespace epinet {

struct EpidemicParams {
  double lambda = 0.1;  // per contact, per round
  double sigma = 0.1;   // per round
  std::uint32_t window = 5;
  double init_fraction = 0.01;

  void validate() const;
};

enum class Compartment : std::uint8_t { S = 0, I = 1, R = 2, M = 3 };

struct CompartmentCounts {
  std::array<std::size_t, 4> by{};  // indexed by Compartment

  std::size_t operator[](Compartment c) const { return by[static_cast<std::size_t>(c)]; }
  std::size_t total() const { return by[0] + by[1] + by[2] + by[3]; }
};

/// Per-run mutable state. `age` counts spreading rounds elapsed and is
/// meaningful only for I nodes; `active` is the V flag of the local
/// immunization protocol.
struct SimState {
  std::vector<Compartment> state;
  std::vector<std::uint32_t> age;
  std::vector<std::uint8_t> active;
  std::vector<std::uint8_t> ever_infected;
  std::uint32_t round = 0;
  std::size_t ever_infected_count = 0;
  std::size_t immunized_count = 0;
  std::size_t new_infections = 0;        // during the last spread step
  std::size_t immunized_this_round = 0;
  bool global_fired = false;

  std::size_t node_count() const { return state.size(); }
  CompartmentCounts counts() const;

  /// Moves node i to M. Only S and I nodes may be immunized.
  void immunize(NodeId i);
};

/// Number of nodes a fraction selects: ceil(fraction * n), tolerant of
/// representation error in the product.
std::size_t fraction_count(double fraction, std::size_t n);

/// Initially infected nodes are drawn uniformly without replacement.
/// Throws ConfigError when the seed count reaches n.
SimState seed_infection(const Graph& g, const EpidemicParams& params, Rng& rng);

/// Infected nodes aged below the window try each neighbour that was
/// susceptible in the pre-step snapshot, in ascending id.
void spread_step(const Graph& g, SimState& st, const EpidemicParams& params, Rng& rng);

/// Each I node recovers with probability sigma; survivors age by one.
void recovery_step(SimState& st, const EpidemicParams& params, Rng& rng);

bool is_extinct(const SimState& st);

}  // namespace epinet
