// Serial reference versions of the parallel kernels, kept for testing and
// benchmarking. They follow the defining formulas directly.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "gibbsent/kernels.hpp"

namespace gibbsent::reference {

std::vector<double> log_weights(const GibbsStructure& G, unsigned long long budget) {
  const std::size_t total = table_size(G.radices(), budget);
  std::vector<int> domain(static_cast<std::size_t>(G.num_vertices()));
  for (std::size_t v = 0; v < domain.size(); ++v) domain[v] = static_cast<int>(v);
  ProbTable shape = ProbTable::from_weights(domain, G.radices(), std::vector<double>(total, 1.0));
  std::vector<double> out(total);
  Configuration omega(domain.size());
  for (std::size_t idx = 0; idx < total; ++idx) {
    shape.digits(idx, omega);
    out[idx] = -energy(G, omega);
  }
  return out;
}

PartitionSummary partition_summary(const GibbsStructure& G, unsigned long long budget) {
  const std::vector<double> lw = log_weights(G, budget);
  const double mx = *std::max_element(lw.begin(), lw.end());
  double s = 0.0, su = 0.0;
  for (double x : lw) {
    const double w = std::exp(x - mx);
    s += w;
    su += w * -x;
  }
  return {mx + std::log(s), su / s};
}

double good_fraction(const SoficMap& sigma, const FiniteWindow& S) {
  long long count = 0;
  for (int v = 0; v < sigma.n(); ++v) count += is_good(sigma, S, v) ? 1 : 0;
  return static_cast<double>(count) / sigma.n();
}

std::vector<long long> pullback_counts(const SoficMap& sigma, const FiniteWindow& F,
                                       const Configuration& tau, int alphabet_size) {
  std::map<std::vector<int>, long long> seen;
  for (int v = 0; v < sigma.n(); ++v) ++seen[pullback(sigma, v, F, tau)];
  std::vector<int> radices(F.size(), alphabet_size);
  std::vector<int> domain(F.size());
  for (std::size_t i = 0; i < F.size(); ++i) domain[i] = static_cast<int>(i);
  ProbTable shape = ProbTable::uniform(domain, radices);
  std::vector<long long> counts(shape.size(), 0);
  for (const auto& [cfg, c] : seen) counts[shape.index(cfg)] = c;
  return counts;
}

// b_{v,u} as the supremum over full configurations of V \ {v} that differ
// only at u. Exponential in |V|.
std::vector<std::vector<DobrushinEntry>> dobrushin_rows(const GibbsStructure& G,
                                                        unsigned long long budget) {
  const int n = G.num_vertices();
  const std::size_t total = table_size(G.radices(), budget);
  std::vector<int> domain(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) domain[static_cast<std::size_t>(v)] = v;
  ProbTable shape = ProbTable::uniform(domain, G.radices());
  std::vector<std::vector<DobrushinEntry>> rows(static_cast<std::size_t>(n));
  Configuration w1(static_cast<std::size_t>(n)), w2(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    const int single[] = {v};
    std::vector<double> b(static_cast<std::size_t>(n), 0.0);
    for (std::size_t idx = 0; idx < total; ++idx) {
      shape.digits(idx, w1);
      if (w1[static_cast<std::size_t>(v)] != 0) continue;
      const ProbTable k1 = local_kernel(G, single, w1);
      for (int u = 0; u < n; ++u) {
        if (u == v) continue;
        for (int a = 0; a < G.radix(u); ++a) {
          if (a == w1[static_cast<std::size_t>(u)]) continue;
          w2 = w1;
          w2[static_cast<std::size_t>(u)] = a;
          b[static_cast<std::size_t>(u)] = std::max(b[static_cast<std::size_t>(u)], total_variation(k1, local_kernel(G, single, w2)));
        }
      }
    }
    for (int u : G.boundary(single)) rows[static_cast<std::size_t>(v)].push_back({u, b[static_cast<std::size_t>(u)]});
  }
  return rows;
}

TiBatchMeans ti_batch_means(const GibbsStructure& G, const TiParams& p, std::uint64_t seed) {
  p.validate();
  const GlauberSampler sampler(G);
  TiBatchMeans out(static_cast<std::size_t>(p.replicas));
  const int per_batch = p.sweeps / p.batches;
  for (int r = 0; r < p.replicas; ++r) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(r)}));
    Configuration omega = sampler.random_configuration(rng);
    auto& res = out[static_cast<std::size_t>(r)];
    res.assign(static_cast<std::size_t>(p.grid * p.batches), 0.0);
    for (int j = 1; j < p.grid; ++j) {
      const double s = static_cast<double>(j) / (p.grid - 1);
      for (int b = 0; b < p.burn_in; ++b) sampler.sweep(omega, rng, s);
      for (int b = 0; b < p.batches; ++b) {
        double acc = 0.0;
        for (int t = 0; t < per_batch; ++t) {
          sampler.sweep(omega, rng, s);
          acc += energy(G, omega);
        }
        res[static_cast<std::size_t>(j * p.batches + b)] = acc / per_batch;
      }
    }
  }
  return out;
}

std::vector<SewardSample> seward_samples(const MarkovTreeSpec& spec, const FiniteWindow& F,
                                         int samples, std::uint64_t seed) {
  const FiniteWindow W = seward_window(F);
  const FiniteWindow B = seward_boundary(F, spec.m());
  const int e = W.index_of(GroupWord{});
  std::vector<SewardSample> out;
  for (int i = 0; i < samples; ++i) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(i)}));
    std::vector<int> order(W.size());
    for (std::size_t j = 0; j < order.size(); ++j) order[j] = static_cast<int>(j);
    rng.shuffle(order);
    std::vector<GroupWord> past;
    for (int j : order) {
      if (j == e) break;
      past.push_back(W[static_cast<std::size_t>(j)]);
    }
    SewardSample s;
    s.past = FiniteWindow(std::move(past));
    s.term = root_conditional_entropy(spec, set_union(s.past, B));
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace gibbsent::reference
