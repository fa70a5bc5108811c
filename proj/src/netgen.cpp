#include "epinet/netgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <unordered_set>

#include "epinet/text.hpp"

namespace epinet {

namespace {

constexpr double kMeanTolerance = 0.05;
constexpr int kDegreeResamples = 100;
constexpr int kSwapAttempts = 20;
constexpr std::size_t kDegreeTolerance = 2;

double mean_of(std::span<const std::uint32_t> v) {
  if (v.empty()) return 0.0;
  return static_cast<double>(std::accumulate(v.begin(), v.end(), std::uint64_t{0})) /
         static_cast<double>(v.size());
}

bool within_tolerance(double mean, double target) {
  return std::abs(mean - target) <= kMeanTolerance * target;
}

// Discrete law P(d) ~ d^-gamma on [lo, hi] as a cumulative table.
std::vector<double> discrete_cdf(std::uint32_t lo, std::uint32_t hi, double gamma) {
  std::vector<double> cdf;
  cdf.reserve(hi - lo + 1);
  double acc = 0.0;
  for (std::uint32_t d = lo; d <= hi; ++d) {
    acc += std::pow(static_cast<double>(d), -gamma);
    cdf.push_back(acc);
  }
  for (double& c : cdf) c /= acc;
  return cdf;
}

double discrete_mean(std::uint32_t lo, std::uint32_t hi, double gamma) {
  double num = 0.0, den = 0.0;
  for (std::uint32_t d = lo; d <= hi; ++d) {
    const double w = std::pow(static_cast<double>(d), -gamma);
    num += d * w;
    den += w;
  }
  return num / den;
}

// Solves powerlaw_floor_mean(x) = target for x in [1, k_max].
double solve_cutoff(double target, std::uint32_t k_max, double gamma) {
  double lo = 1.0, hi = static_cast<double>(k_max);
  const double m_lo = powerlaw_floor_mean(lo, k_max, gamma);
  const double m_hi = powerlaw_floor_mean(hi, k_max, gamma);
  if (target < m_lo || target > m_hi)
    throw ConfigError("no lower degree cutoff gives mean degree " + exact(target) + " (reachable range [" +
                      exact(m_lo) + ", " + exact(m_hi) + "])");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (powerlaw_floor_mean(mid, k_max, gamma) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::uint64_t edge_key(NodeId u, NodeId v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

}  // namespace

void NetGenConfig::validate() const {
  if (n < 2) throw ConfigError("n must be at least 2, got " + std::to_string(n));
  if (!(gamma > 1.0 && gamma <= 3.0)) throw ConfigError("gamma must lie in (1, 3], got " + exact(gamma));
  if (!(mu >= 0.0 && mu <= 1.0)) throw ConfigError("mu must lie in [0, 1], got " + exact(mu));
  if (k_max < 1 || k_max >= n)
    throw ConfigError("k_max must lie in [1, n), got " + std::to_string(k_max));
  if (!(k_avg >= 1.0 && k_avg <= k_max))
    throw ConfigError("k_avg must lie in [1, k_max], got " + exact(k_avg));
  if (k_min != 0 && k_min > k_avg)
    throw ConfigError("k_min must not exceed k_avg, got " + std::to_string(k_min));
  if (communities_min < 1 || communities_min > communities_max || communities_max > n)
    throw ConfigError("community count range must satisfy 1 <= min <= max <= n, got (" +
                      std::to_string(communities_min) + ", " + std::to_string(communities_max) + ")");
  if (!(community_size_ratio >= 1.0))
    throw ConfigError("community_size_ratio must be >= 1, got " + exact(community_size_ratio));
}

std::vector<std::size_t> CommunityAssignment::sizes() const {
  std::vector<std::size_t> s(count, 0);
  for (auto l : label) ++s[l];
  return s;
}

double powerlaw_floor_mean(double x, std::uint32_t k_max, double gamma) {
  const double e = 1.0 - gamma;
  const double top = static_cast<double>(k_max) + 1.0;
  const double z = std::pow(x, e) - std::pow(top, e);
  double mean = 0.0;
  for (auto d = static_cast<std::uint32_t>(std::floor(x)); d <= k_max; ++d) {
    const double lo = std::max(static_cast<double>(d), x);
    const double hi = static_cast<double>(d) + 1.0;
    mean += d * (std::pow(lo, e) - std::pow(hi, e)) / z;
  }
  return mean;
}

std::vector<std::uint32_t> sample_powerlaw_degrees(const NetGenConfig& cfg, Rng& rng) {
  cfg.validate();
  const std::size_t n = cfg.n;
  std::vector<std::uint32_t> deg(n);

  if (cfg.k_min != 0) {
    const double expected = discrete_mean(cfg.k_min, cfg.k_max, cfg.gamma);
    if (!within_tolerance(expected, cfg.k_avg))
      throw ConfigError("k_min=" + std::to_string(cfg.k_min) + " gives mean degree " + exact(expected) +
                        ", not within 5% of k_avg=" + exact(cfg.k_avg));
  }
  const double cutoff = cfg.k_min != 0 ? 0.0 : solve_cutoff(cfg.k_avg, cfg.k_max, cfg.gamma);
  const auto cdf = cfg.k_min != 0 ? discrete_cdf(cfg.k_min, cfg.k_max, cfg.gamma) : std::vector<double>{};

  const double e = 1.0 - cfg.gamma;
  const double a = std::pow(cutoff, e);
  const double b = std::pow(static_cast<double>(cfg.k_max) + 1.0, e);

  bool ok = false;
  for (int attempt = 0; attempt < kDegreeResamples && !ok; ++attempt) {
    for (auto& d : deg) {
      const double u = rng.uniform();
      if (cfg.k_min != 0) {
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        d = cfg.k_min + static_cast<std::uint32_t>(std::min<std::ptrdiff_t>(
                            it - cdf.begin(), static_cast<std::ptrdiff_t>(cdf.size()) - 1));
      } else {
        const double t = std::pow(a - u * (a - b), 1.0 / e);
        d = std::min(cfg.k_max, static_cast<std::uint32_t>(std::floor(t)));
      }
    }
    ok = within_tolerance(mean_of(deg), cfg.k_avg);
  }
  if (!ok) throw GenerationError("degree sequence mean stayed outside 5% of k_avg after resampling");

  const std::uint64_t sum = std::accumulate(deg.begin(), deg.end(), std::uint64_t{0});
  if (sum % 2 == 1) {
    const auto lo_bound = cfg.k_min != 0 ? cfg.k_min : static_cast<std::uint32_t>(std::floor(cutoff));
    auto& d = deg[rng.below(n)];
    if (d < cfg.k_max)
      ++d;
    else if (d > lo_bound)
      --d;
    else
      throw ConfigError("k_min == k_max with an odd degree sum: no simple graph exists");
  }
  return deg;
}

std::uint32_t intra_need(std::uint32_t degree, double mu) {
  return static_cast<std::uint32_t>(std::ceil((1.0 - mu) * degree - 1e-12));
}

std::vector<std::size_t> draw_community_sizes(const NetGenConfig& cfg, Rng& rng) {
  cfg.validate();
  const auto k = static_cast<std::size_t>(rng.between(cfg.communities_min, cfg.communities_max));
  std::vector<double> raw(k);
  for (auto& r : raw) r = std::pow(cfg.community_size_ratio, rng.uniform());
  const double total = std::accumulate(raw.begin(), raw.end(), 0.0);

  // Largest-remainder rounding to an exact total of n, each size >= 1.
  std::vector<std::size_t> sizes(k);
  std::vector<std::pair<double, std::size_t>> rem(k);
  std::size_t assigned = 0;
  for (std::size_t j = 0; j < k; ++j) {
    const double exact_size = raw[j] / total * static_cast<double>(cfg.n);
    sizes[j] = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(exact_size)));
    rem[j] = {exact_size - std::floor(exact_size), j};
    assigned += sizes[j];
  }
  std::sort(rem.begin(), rem.end(), [](const auto& x, const auto& y) {
    return x.first != y.first ? x.first > y.first : x.second < y.second;
  });
  for (std::size_t r = 0; assigned < cfg.n; r = (r + 1) % k, ++assigned) ++sizes[rem[r].second];
  while (assigned > cfg.n) {
    const std::size_t idx = static_cast<std::size_t>(
        std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
    --sizes[idx];
    --assigned;
  }
  return sizes;
}

CommunityAssignment assign_to_sizes(std::span<const std::size_t> sizes,
                                    std::span<const std::uint32_t> need, Rng& rng) {
  const std::size_t n = need.size();
  if (std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}) != n)
    throw GenerationError("community sizes do not sum to the node count");
  const std::size_t largest = sizes.empty() ? 0 : *std::max_element(sizes.begin(), sizes.end());

  for (std::size_t i = 0; i < n; ++i)
    if (need[i] + 1 > largest)
      throw GenerationError("node " + std::to_string(i) + " needs " + std::to_string(need[i]) +
                            " intra-community neighbours but the largest community has " +
                            std::to_string(largest) + " members; use larger communities");

  constexpr std::uint32_t unset = UINT32_MAX;
  CommunityAssignment out;
  out.count = static_cast<std::uint32_t>(sizes.size());
  out.label.assign(n, unset);

  std::vector<std::vector<NodeId>> members(sizes.size());
  // Highest need first; ties by id.
  std::vector<NodeId> queue(n);
  std::iota(queue.begin(), queue.end(), NodeId{0});
  std::stable_sort(queue.begin(), queue.end(), [&](NodeId a, NodeId b) { return need[a] > need[b]; });
  std::reverse(queue.begin(), queue.end());  // used as a stack: back is next

  std::vector<std::uint32_t> open, fits;
  const std::size_t budget = 20 * n + 100;
  for (std::size_t step = 0; !queue.empty(); ++step) {
    if (step > budget)
      throw GenerationError("could not place all nodes into communities; use larger communities");
    const NodeId i = queue.back();
    queue.pop_back();
    open.clear();
    fits.clear();
    for (std::uint32_t c = 0; c < sizes.size(); ++c) {
      if (sizes[c] < need[i] + 1) continue;
      fits.push_back(c);
      if (members[c].size() < sizes[c]) open.push_back(c);
    }
    if (!open.empty()) {
      const auto c = open[rng.below(open.size())];
      members[c].push_back(i);
      out.label[i] = c;
      continue;
    }
    // All fitting communities are full: displace a random member.
    const auto c = fits[rng.below(fits.size())];
    const std::size_t slot = rng.below(members[c].size());
    const NodeId evicted = members[c][slot];
    members[c][slot] = i;
    out.label[i] = c;
    out.label[evicted] = unset;
    queue.push_back(evicted);
  }
  return out;
}

CommunityAssignment assign_communities(const NetGenConfig& cfg, std::span<const std::uint32_t> degrees,
                                       Rng& rng) {
  std::vector<std::uint32_t> need(degrees.size());
  for (std::size_t i = 0; i < degrees.size(); ++i) need[i] = intra_need(degrees[i], cfg.mu);
  const auto sizes = draw_community_sizes(cfg, rng);
  return assign_to_sizes(sizes, need, rng);
}

namespace {

// One configuration-model pool: stubs matched uniformly, then collisions
// repaired by degree-preserving swaps against accepted edges.
class StubPool {
 public:
  StubPool(std::vector<NodeId> stubs, std::span<const std::uint32_t> label, bool intra,
           std::unordered_set<std::uint64_t>& taken)
      : stubs_(std::move(stubs)), label_(label), intra_(intra), taken_(taken) {}

  void match(Rng& rng, std::uint32_t passes) {
    rng.shuffle(stubs_);
    for (std::size_t s = 0; s + 1 < stubs_.size(); s += 2) offer(stubs_[s], stubs_[s + 1]);

    for (std::uint32_t pass = 0; pass < passes && !bad_.empty(); ++pass) {
      std::vector<Edge> retry;
      retry.swap(bad_);
      for (const Edge& e : retry)
        if (!repair(e, rng)) bad_.push_back(e);
    }
  }

  /// Endpoints of pairs that could not be repaired, one entry per stub.
  std::vector<NodeId> leftover() const {
    std::vector<NodeId> out;
    for (const Edge& e : bad_) {
      out.push_back(e.first);
      out.push_back(e.second);
    }
    if (stubs_.size() % 2 == 1) out.push_back(stubs_.back());
    return out;
  }

  std::span<const Edge> accepted() const { return accepted_; }

  // Swaps the bad pair (u, v) with an accepted (a, b) into (u, x), (v, y).
  // A few random candidates first, then a full scan from a random offset.
  bool repair(const Edge& e, Rng& rng) {
    if (accepted_.empty()) return false;
    for (int attempt = 0; attempt < kSwapAttempts; ++attempt)
      if (try_swap(e, rng.below(accepted_.size()), rng.bernoulli(0.5))) return true;
    const std::size_t start = rng.below(accepted_.size());
    for (std::size_t k = 0; k < accepted_.size(); ++k) {
      const std::size_t slot = (start + k) % accepted_.size();
      if (try_swap(e, slot, false) || try_swap(e, slot, true)) return true;
    }
    return false;
  }

  bool try_swap(const Edge& e, std::size_t slot, bool flip) {
    const auto [a, b] = accepted_[slot];
    const NodeId x = flip ? b : a, y = flip ? a : b;
    if (!allowed(e.first, x) || !allowed(e.second, y) || edge_key(e.first, x) == edge_key(e.second, y))
      return false;
    taken_.erase(edge_key(a, b));
    accepted_[slot] = {e.first, x};
    taken_.insert(edge_key(e.first, x));
    accept(e.second, y);
    return true;
  }


 private:
  bool allowed(NodeId u, NodeId v) const {
    if (u == v) return false;
    if ((label_[u] == label_[v]) != intra_) return false;
    return !taken_.contains(edge_key(u, v));
  }

  void accept(NodeId u, NodeId v) {
    accepted_.emplace_back(u, v);
    taken_.insert(edge_key(u, v));
  }

  void offer(NodeId u, NodeId v) {
    if (allowed(u, v))
      accept(u, v);
    else
      bad_.emplace_back(u, v);
  }

  std::vector<NodeId> stubs_;
  std::span<const std::uint32_t> label_;
  bool intra_;
  std::unordered_set<std::uint64_t>& taken_;
  std::vector<Edge> accepted_;
  std::vector<Edge> bad_;
};

}  // namespace

WireResult wire(const NetGenConfig& cfg, std::span<const std::uint32_t> degrees,
                const CommunityAssignment& communities, Rng& rng) {
  const std::size_t n = degrees.size();
  if (communities.label.size() != n) throw GenerationError("community labels do not cover every node");

  // Intra stub count: (1 - mu) * d rounded stochastically so that the
  // expected mixing fraction is exactly mu.
  std::vector<std::uint32_t> intra(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double want = (1.0 - cfg.mu) * degrees[i];
    const double base = std::floor(want);
    intra[i] = static_cast<std::uint32_t>(base) + (rng.bernoulli(want - base) ? 1u : 0u);
    intra[i] = std::min(intra[i], degrees[i]);
  }

  // Each community's intra stubs must pair up; move one stub to the
  // inter pool where the count is odd.
  std::vector<std::vector<NodeId>> by_comm(communities.count);
  for (NodeId i = 0; i < n; ++i) by_comm[communities.label[i]].push_back(i);
  for (const auto& members : by_comm) {
    std::uint64_t total = 0;
    for (NodeId i : members) total += intra[i];
    if (total % 2 == 0) continue;
    std::vector<NodeId> holders;
    for (NodeId i : members)
      if (intra[i] > 0) holders.push_back(i);
    --intra[holders[rng.below(holders.size())]];
  }

  std::unordered_set<std::uint64_t> taken;
  taken.reserve(std::accumulate(degrees.begin(), degrees.end(), std::size_t{0}));
  std::vector<Edge> edges;

  // Intra stubs that cannot be placed (a hub filling its community) move
  // to the inter pool, keeping the degree at the cost of a little mixing.
  std::vector<NodeId> inter_stubs;
  for (NodeId i = 0; i < n; ++i) inter_stubs.insert(inter_stubs.end(), degrees[i] - intra[i], i);
  for (const auto& members : by_comm) {
    std::vector<NodeId> stubs;
    for (NodeId i : members) stubs.insert(stubs.end(), intra[i], i);
    StubPool pool(std::move(stubs), communities.label, true, taken);
    pool.match(rng, cfg.rewire_passes);
    edges.insert(edges.end(), pool.accepted().begin(), pool.accepted().end());
    const auto rest = pool.leftover();
    inter_stubs.insert(inter_stubs.end(), rest.begin(), rest.end());
  }

  StubPool inter(std::move(inter_stubs), communities.label, false, taken);
  inter.match(rng, cfg.rewire_passes);
  edges.insert(edges.end(), inter.accepted().begin(), inter.accepted().end());

  // With few communities the inter stubs can be lopsided (one side holds
  // most of them). Whatever is left pairs up inside its own community.
  std::size_t discarded = 0;
  std::vector<std::vector<NodeId>> rest_by_comm(communities.count);
  for (NodeId i : inter.leftover()) rest_by_comm[communities.label[i]].push_back(i);
  for (auto& stubs : rest_by_comm) {
    if (stubs.empty()) continue;
    StubPool pool(std::move(stubs), communities.label, true, taken);
    pool.match(rng, cfg.rewire_passes);
    edges.insert(edges.end(), pool.accepted().begin(), pool.accepted().end());
    discarded += pool.leftover().size();
  }

  for (auto& e : edges)
    if (e.first > e.second) std::swap(e.first, e.second);
  std::sort(edges.begin(), edges.end());
  return {Graph::from_edge_list(n, edges), discarded};
}

GenReport measure(const Graph& g, const CommunityAssignment& communities) {
  GenReport r;
  const std::size_t n = g.node_count();
  if (communities.label.size() != n) throw GenerationError("community labels do not cover every node");
  r.realized_max_degree = g.max_degree();
  r.realized_avg_degree = n == 0 ? 0.0 : 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(n);

  double mix = 0.0;
  std::size_t counted = 0;
  std::vector<std::size_t> hist(g.max_degree() + 1, 0);
  for (NodeId i = 0; i < n; ++i) {
    const auto nb = g.neighbors(i);
    ++hist[nb.size()];
    if (nb.empty()) continue;
    std::size_t out = 0;
    for (NodeId j : nb) out += communities.label[j] != communities.label[i];
    mix += static_cast<double>(out) / static_cast<double>(nb.size());
    ++counted;
  }
  r.realized_mu = counted == 0 ? 0.0 : mix / static_cast<double>(counted);

  // Density exponent from a log-binned histogram: least squares of
  // log(count / bin width) on log(bin centre).
  std::size_t dmin = 1;
  while (dmin < hist.size() && hist[dmin] == 0) ++dmin;
  std::vector<double> xs, ys;
  for (double lo = static_cast<double>(dmin); lo <= static_cast<double>(g.max_degree());) {
    const double hi = std::max(lo + 1.0, std::floor(lo * 1.5));
    std::size_t count = 0;
    for (auto d = static_cast<std::size_t>(lo); d < static_cast<std::size_t>(hi) && d < hist.size(); ++d)
      count += hist[d];
    if (count > 0) {
      xs.push_back(std::log(std::sqrt(lo * (hi - 1.0))));
      ys.push_back(std::log(static_cast<double>(count) / (hi - lo)));
    }
    lo = hi;
  }
  if (xs.size() >= 2) {
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      sxy += (xs[k] - mx) * (ys[k] - my);
      sxx += (xs[k] - mx) * (xs[k] - mx);
    }
    r.tail_slope_estimate = sxy / sxx;
  }
  return r;
}

GeneratedNetwork generate(const NetGenConfig& cfg) {
  cfg.validate();
  GeneratedNetwork net;
  Rng degree_rng(cfg.seed, "netgen.degrees");
  Rng community_rng(cfg.seed, "netgen.communities");
  Rng wire_rng(cfg.seed, "netgen.wire");

  net.target_degrees = sample_powerlaw_degrees(cfg, degree_rng);
  net.communities = assign_communities(cfg, net.target_degrees, community_rng);
  auto wired = wire(cfg, net.target_degrees, net.communities, wire_rng);
  net.graph = std::move(wired.graph);
  net.report = measure(net.graph, net.communities);
  net.report.discarded_stubs = wired.discarded_stubs;
  net.report.k_min_used =
      cfg.k_min != 0 ? static_cast<double>(cfg.k_min) : solve_cutoff(cfg.k_avg, cfg.k_max, cfg.gamma);
  for (NodeId i = 0; i < cfg.n; ++i) {
    const auto target = static_cast<std::size_t>(net.target_degrees[i]);
    const auto got = net.graph.degree(i);
    net.report.max_degree_deficit = std::max(net.report.max_degree_deficit, target > got ? target - got : got - target);
  }
  if (net.report.max_degree_deficit > kDegreeTolerance)
    throw GenerationError("stub matching left a node " + std::to_string(net.report.max_degree_deficit) +
                          " edges away from its target degree (tolerance " + std::to_string(kDegreeTolerance) + ")");
  return net;
}

void write_metadata(std::ostream& out, const NetGenConfig& cfg, const GenReport& r) {
  out << "n=" << cfg.n << '\n'
      << "k_avg=" << exact(cfg.k_avg) << '\n'
      << "k_min=" << cfg.k_min << '\n'
      << "k_max=" << cfg.k_max << '\n'
      << "gamma=" << exact(cfg.gamma) << '\n'
      << "mu=" << exact(cfg.mu) << '\n'
      << "communities_min=" << cfg.communities_min << '\n'
      << "communities_max=" << cfg.communities_max << '\n'
      << "community_size_ratio=" << exact(cfg.community_size_ratio) << '\n'
      << "rewire_passes=" << cfg.rewire_passes << '\n'
      << "seed=" << cfg.seed << '\n'
      << "k_min_used=" << fixed(r.k_min_used) << '\n'
      << "realized_avg_degree=" << fixed(r.realized_avg_degree) << '\n'
      << "realized_max_degree=" << r.realized_max_degree << '\n'
      << "realized_mu=" << fixed(r.realized_mu) << '\n'
      << "tail_slope_estimate=" << fixed(r.tail_slope_estimate) << '\n'
      << "discarded_stubs=" << r.discarded_stubs << '\n'
      << "max_degree_deficit=" << r.max_degree_deficit << '\n';
}

}  // namespace epinet
