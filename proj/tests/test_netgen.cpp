#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "epinet/netgen.hpp"
#include "support.hpp"

using namespace epinet;
using namespace epinet::testing;

namespace {

NetGenConfig small(std::size_t n, std::uint64_t seed) {
  NetGenConfig cfg;
  cfg.n = n;
  cfg.seed = seed;
  // Fewer, larger communities so the hubs fit at this size.
  cfg.communities_min = n >= 5000 ? 10 : 3;
  cfg.communities_max = n >= 5000 ? 50 : 8;
  return cfg;
}

double mean_of(const std::vector<std::uint32_t>& d) {
  return std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size());
}

// Share of a node's edges leaving its community, averaged over nodes with
// at least one edge. Counted straight from the edge list.
double mixing_by_edges(const Graph& g, const std::vector<std::uint32_t>& label) {
  std::vector<double> out(g.node_count(), 0), all(g.node_count(), 0);
  for (auto [u, v] : g.edges()) {
    all[u] += 1;
    all[v] += 1;
    if (label[u] != label[v]) {
      out[u] += 1;
      out[v] += 1;
    }
  }
  double sum = 0;
  std::size_t k = 0;
  for (std::size_t i = 0; i < g.node_count(); ++i)
    if (all[i] > 0) {
      sum += out[i] / all[i];
      ++k;
    }
  return k ? sum / static_cast<double>(k) : 0.0;
}

}  // namespace

TEST_CASE("config validation") {
  NetGenConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.gamma = 5;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("(1, 3]"), ConfigError);
  cfg = {};
  cfg.mu = 1.5;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.k_max = 6000;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.communities_min = 60;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("degree sequence at n=1000 seed 42") {
  auto cfg = small(1000, 42);
  Rng rng(cfg.seed);
  const auto d = sample_powerlaw_degrees(cfg, rng);
  REQUIRE(d.size() == 1000);
  CHECK(mean_of(d) >= 7.6);
  CHECK(mean_of(d) <= 8.4);
  CHECK(*std::max_element(d.begin(), d.end()) <= 120);
  CHECK(std::accumulate(d.begin(), d.end(), std::uint64_t{0}) % 2 == 0);
}

TEST_CASE("degenerate degree law") {
  auto cfg = small(1000, 3);
  cfg.k_avg = 4;
  cfg.k_min = 4;
  cfg.k_max = 4;
  Rng rng(cfg.seed);
  const auto d = sample_powerlaw_degrees(cfg, rng);
  CHECK(std::all_of(d.begin(), d.end(), [](std::uint32_t x) { return x == 4; }));
}

TEST_CASE("infeasible fixed cutoff") {
  auto cfg = small(1000, 3);
  cfg.k_min = 20;  // mean far above 8
  Rng rng(cfg.seed);
  CHECK_THROWS_AS(sample_powerlaw_degrees(cfg, rng), ConfigError);
}

TEST_CASE("degree sequence is deterministic") {
  auto cfg = small(1000, 42);
  Rng a(cfg.seed), b(cfg.seed);
  CHECK(sample_powerlaw_degrees(cfg, a) == sample_powerlaw_degrees(cfg, b));
}

TEST_CASE("auto cutoff matches the mean") {
  NetGenConfig cfg;
  const double lo = powerlaw_floor_mean(1.0, cfg.k_max, cfg.gamma);
  const double hi = powerlaw_floor_mean(10.0, cfg.k_max, cfg.gamma);
  CHECK(lo < cfg.k_avg);
  CHECK(hi > cfg.k_avg);
  const auto net = generate(small(2000, 5));
  CHECK(powerlaw_floor_mean(net.report.k_min_used, cfg.k_max, cfg.gamma) == doctest::Approx(8.0).epsilon(1e-6));
}

TEST_CASE("two forced communities partition the nodes") {
  auto cfg = small(100, 9);
  cfg.communities_min = cfg.communities_max = 2;
  cfg.k_max = 12;
  cfg.community_size_ratio = 1.5;
  const auto net = generate(cfg);
  CHECK(net.communities.count == 2);
  const auto sizes = net.communities.sizes();
  REQUIRE(sizes.size() == 2);
  CHECK(sizes[0] > 0);
  CHECK(sizes[1] > 0);
  CHECK(sizes[0] + sizes[1] == 100);
  for (auto l : net.communities.label) CHECK(l < 2);
}

TEST_CASE("pigeonhole: a node cannot fit any community") {
  const std::vector<std::size_t> sizes{20, 20, 20, 20, 20};
  std::vector<std::uint32_t> need(100, 2);
  need[17] = intra_need(50, 0.0);
  Rng rng(1);
  CHECK_THROWS_WITH_AS(assign_to_sizes(sizes, need, rng), doctest::Contains("larger communities"), GenerationError);
}

TEST_CASE("single community with mu=0 is a configuration model") {
  const std::vector<std::size_t> sizes{300};
  std::vector<std::uint32_t> need(300, 10);
  Rng rng(1);
  const auto c = assign_to_sizes(sizes, need, rng);
  CHECK(c.count == 1);

  NetGenConfig cfg = small(300, 4);
  cfg.mu = 0;
  cfg.k_max = 40;
  Rng drng(11);
  const auto degrees = sample_powerlaw_degrees(cfg, drng);
  Rng wrng(12);
  const auto w = wire(cfg, degrees, c, wrng);
  CHECK(measure(w.graph, c).realized_mu == 0.0);
}

TEST_CASE("measure on hand-made graphs") {
  CommunityAssignment one{{0, 0, 0, 0}, 1};
  CHECK(measure(complete(4), one).realized_mu == 0.0);

  const auto k22 = make_graph(4, {{0, 2}, {0, 3}, {1, 2}, {1, 3}});
  CommunityAssignment sides{{0, 0, 1, 1}, 2};
  CHECK(measure(k22, sides).realized_mu == 1.0);

  const auto c4 = cycle(4);
  CommunityAssignment halves{{0, 0, 1, 1}, 2};
  CHECK(measure(c4, halves).realized_mu == 0.5);
}

TEST_CASE("generated networks: simple graph, degree targets, mixing") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto cfg = small(2000, seed);
    const auto net = generate(cfg);
    const auto& g = net.graph;
    CHECK(g.node_count() == 2000);
    for (NodeId i = 0; i < g.node_count(); ++i) {
      const auto want = static_cast<long>(net.target_degrees[i]);
      const auto got = static_cast<long>(g.degree(i));
      CHECK(std::abs(want - got) <= 2);
    }
    CHECK(net.report.realized_mu == doctest::Approx(mixing_by_edges(g, net.communities.label)));
    CHECK(std::abs(net.report.realized_mu - 0.3) <= 0.05);
    CHECK(g.max_degree() <= 120);
  }
}

TEST_CASE("realized mixing tracks mu and increases with it") {
  double prev = -1;
  for (double mu : {0.1, 0.3, 0.5, 0.7}) {
    double sum = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      auto cfg = small(1000, seed);
      cfg.mu = mu;
      const auto r = generate(cfg).report;
      CHECK(std::abs(r.realized_mu - mu) <= 0.05);
      sum += r.realized_mu;
    }
    CHECK(sum / 10 > prev);
    prev = sum / 10;
  }
}

TEST_CASE("tail slope estimate lies near -gamma") {
  const auto net = generate(small(5000, 2));
  CHECK(net.report.tail_slope_estimate < -2.0);
  CHECK(net.report.tail_slope_estimate > -4.0);
}

TEST_CASE("generation is byte-deterministic") {
  auto cfg = small(1500, 77);
  std::ostringstream a, b, ma, mb;
  const auto n1 = generate(cfg), n2 = generate(cfg);
  write_edge_list(a, n1.graph);
  write_edge_list(b, n2.graph);
  write_metadata(ma, cfg, n1.report);
  write_metadata(mb, cfg, n2.report);
  CHECK(a.str() == b.str());
  CHECK(ma.str() == mb.str());
  CHECK(n1.communities.label == n2.communities.label);

  cfg.seed = 78;
  std::ostringstream c;
  write_edge_list(c, generate(cfg).graph);
  CHECK(c.str() != a.str());
}
