#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "epinet/graph.hpp"
#include "epinet/rng.hpp"

namespace epinet {

/// Parameters of the LFR-style generator. Defaults are the reference
/// experiment network (n=5000, <k>=8, k_max=120, gamma=3).
struct NetGenConfig {
  std::size_t n = 5000;
  double k_avg = 8.0;
  /// 0 selects the lower cutoff automatically so that the degree law has
  /// mean k_avg. A positive value fixes an integer cutoff.
  std::uint32_t k_min = 0;
  std::uint32_t k_max = 120;
  double gamma = 3.0;
  double mu = 0.3;
  std::uint32_t communities_min = 10;
  std::uint32_t communities_max = 50;
  /// Ratio between the largest and smallest community size before
  /// rescaling. Sizes are log-uniform, i.e. a power law with exponent 1.
  double community_size_ratio = 10.0;
  std::uint32_t rewire_passes = 100;
  std::uint64_t seed = 1;

  /// Throws ConfigError naming the first parameter outside its domain.
  void validate() const;
};

struct CommunityAssignment {
  std::vector<std::uint32_t> label;
  std::uint32_t count = 0;

  std::vector<std::size_t> sizes() const;
};

struct GenReport {
  double realized_avg_degree = 0.0;
  std::size_t realized_max_degree = 0;
  double realized_mu = 0.0;
  double tail_slope_estimate = 0.0;
  std::size_t discarded_stubs = 0;
  /// Largest |target degree - realized degree| over all nodes.
  std::size_t max_degree_deficit = 0;
  /// Lower degree cutoff actually used (real-valued when auto-tuned).
  double k_min_used = 0.0;
};

struct GeneratedNetwork {
  Graph graph;
  CommunityAssignment communities;
  std::vector<std::uint32_t> target_degrees;
  GenReport report;
};

/// Expected mean of the degree law with real cutoff x: a continuous power
/// law on [x, k_max + 1) floored to integers.
double powerlaw_floor_mean(double x, std::uint32_t k_max, double gamma);

/// Degree sequence with P(d) proportional to d^-gamma on [k_min, k_max],
/// sample mean within 5% of k_avg and an even sum.
std::vector<std::uint32_t> sample_powerlaw_degrees(const NetGenConfig& cfg, Rng& rng);

/// Community sizes summing to n, drawn log-uniformly then rescaled.
std::vector<std::size_t> draw_community_sizes(const NetGenConfig& cfg, Rng& rng);

/// Places every node into a community of the given sizes such that its
/// intra-community need fits (need <= size - 1). Throws GenerationError.
CommunityAssignment assign_to_sizes(std::span<const std::size_t> sizes,
                                    std::span<const std::uint32_t> intra_need, Rng& rng);

/// Upper bound on intra-community stubs of a node of degree d.
std::uint32_t intra_need(std::uint32_t degree, double mu);

CommunityAssignment assign_communities(const NetGenConfig& cfg,
                                       std::span<const std::uint32_t> degrees, Rng& rng);

struct WireResult {
  Graph graph;
  std::size_t discarded_stubs = 0;
};

/// Configuration-model matching with separate intra and inter stub pools.
WireResult wire(const NetGenConfig& cfg, std::span<const std::uint32_t> degrees,
                const CommunityAssignment& communities, Rng& rng);

/// Realized statistics. realized_mu is the mean over nodes with degree > 0
/// of the fraction of their edges that leave their community.
GenReport measure(const Graph& g, const CommunityAssignment& communities);

/// Full pipeline; each stage draws from its own stream derived from cfg.seed.
GeneratedNetwork generate(const NetGenConfig& cfg);

/// key=value sidecar: every config field followed by realized statistics.
void write_metadata(std::ostream& out, const NetGenConfig& cfg, const GenReport& report);

}  // namespace epinet
