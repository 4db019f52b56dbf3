#include "gibbsent/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include <omp.h>

namespace gibbsent::kernels {

namespace {

constexpr std::size_t kChunks = 256;

struct FlatTerms {
  std::vector<std::size_t> offset;   // into vertex/stride arrays, size terms+1
  std::vector<int> vertex;
  std::vector<std::size_t> stride;
};

FlatTerms flatten(const GibbsStructure& G) {
  FlatTerms f;
  f.offset.push_back(0);
  for (const auto& term : G.terms()) {
    std::size_t acc = 1;
    std::vector<std::size_t> s(term.support.size());
    for (std::size_t i = term.support.size(); i-- > 0;) {
      s[i] = acc;
      acc *= static_cast<std::size_t>(G.radix(term.support[i]));
    }
    for (std::size_t i = 0; i < term.support.size(); ++i) {
      f.vertex.push_back(term.support[i]);
      f.stride.push_back(s[i]);
    }
    f.offset.push_back(f.vertex.size());
  }
  return f;
}

// Visits configurations [begin, end) in row-major order with their energy.
template <class Visit>
void for_each_energy(const GibbsStructure& G, const FlatTerms& f, std::size_t begin, std::size_t end,
                     Visit&& visit) {
  const int n = G.num_vertices();
  std::vector<int> radix = G.radices();
  std::vector<int> dig(static_cast<std::size_t>(n));
  std::size_t rem = begin;
  for (int v = n; v-- > 0;) {
    dig[static_cast<std::size_t>(v)] = static_cast<int>(rem % static_cast<std::size_t>(radix[static_cast<std::size_t>(v)]));
    rem /= static_cast<std::size_t>(radix[static_cast<std::size_t>(v)]);
  }
  const auto& terms = G.terms();
  for (std::size_t idx = begin; idx < end; ++idx) {
    double u = 0.0;
    for (std::size_t t = 0; t < terms.size(); ++t) {
      std::size_t local = 0;
      for (std::size_t j = f.offset[t]; j < f.offset[t + 1]; ++j)
        local += f.stride[j] * static_cast<std::size_t>(dig[static_cast<std::size_t>(f.vertex[j])]);
      u += terms[t].table[local];
    }
    visit(idx, u);
    for (int v = n; v-- > 0;) {
      if (++dig[static_cast<std::size_t>(v)] < radix[static_cast<std::size_t>(v)]) break;
      dig[static_cast<std::size_t>(v)] = 0;
    }
  }
}

}  // namespace

std::vector<double> log_weights(const GibbsStructure& G, unsigned long long budget) {
  const std::size_t total = table_size(G.radices(), budget);
  const FlatTerms f = flatten(G);
  std::vector<double> out(total);
  const std::size_t chunks = std::min(kChunks, total);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t begin = total * c / chunks, end = total * (c + 1) / chunks;
    for_each_energy(G, f, begin, end, [&](std::size_t idx, double u) { out[idx] = -u; });
  }
  return out;
}

PartitionSummary partition_summary(const GibbsStructure& G, unsigned long long budget) {
  const std::size_t total = table_size(G.radices(), budget);
  const FlatTerms f = flatten(G);
  const std::size_t chunks = std::min(kChunks, total);
  std::vector<double> lo(chunks), weight(chunks), weighted_u(chunks);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t begin = total * c / chunks, end = total * (c + 1) / chunks;
    double m = std::numeric_limits<double>::infinity();
    for_each_energy(G, f, begin, end, [&](std::size_t, double u) { m = std::min(m, u); });
    double s = 0.0, su = 0.0;
    for_each_energy(G, f, begin, end, [&](std::size_t, double u) {
      const double w = std::exp(-(u - m));
      s += w;
      su += w * u;
    });
    lo[c] = m;
    weight[c] = s;
    weighted_u[c] = su;
  }
  const double umin = *std::min_element(lo.begin(), lo.end());
  double s = 0.0, su = 0.0;
  for (std::size_t c = 0; c < chunks; ++c) {
    const double scale = std::exp(-(lo[c] - umin));
    s += weight[c] * scale;
    su += weighted_u[c] * scale;
  }
  return {-umin + std::log(s), su / s};
}

double good_fraction(const SoficMap& sigma, const FiniteWindow& S) {
  // Conditions (2)-(4) of S-goodness hold at every vertex because act() is
  // a homomorphism from the free group; only injectivity on S is checked.
  const int n = sigma.n();
  std::vector<char> good(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static)
  for (int v = 0; v < n; ++v) {
    std::vector<int> image;
    image.reserve(S.size());
    for (const auto& g : S) image.push_back(act(sigma, g, v));
    std::sort(image.begin(), image.end());
    good[static_cast<std::size_t>(v)] = std::adjacent_find(image.begin(), image.end()) == image.end();
  }
  long long count = 0;
  for (char g : good) count += g;
  return static_cast<double>(count) / n;
}

std::vector<long long> pullback_counts(const SoficMap& sigma, const FiniteWindow& F,
                                       const Configuration& tau, int alphabet_size) {
  std::vector<int> radices(F.size(), alphabet_size);
  const std::size_t cells = table_size(radices, kDefaultBudget);
  const int n = sigma.n();
  std::vector<std::size_t> cell(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static)
  for (int v = 0; v < n; ++v) {
    std::size_t idx = 0;
    for (const auto& g : F)
      idx = idx * static_cast<std::size_t>(alphabet_size) + static_cast<std::size_t>(tau[static_cast<std::size_t>(act(sigma, g, v))]);
    cell[static_cast<std::size_t>(v)] = idx;
  }
  std::vector<long long> counts(cells, 0);
  for (std::size_t c : cell) ++counts[c];
  return counts;
}

std::vector<DobrushinEntry> dobrushin_row(const GibbsStructure& G, int v, unsigned long long budget) {
  const int single[] = {v};
  const std::vector<int> nb = G.boundary(single);
  std::vector<int> radices;
  for (int u : nb) radices.push_back(G.radix(u));
  const std::size_t count = table_size(radices, budget);
  // Row-major strides over the boundary.
  std::vector<std::size_t> stride(nb.size());
  std::size_t acc = 1;
  for (std::size_t i = nb.size(); i-- > 0;) {
    stride[i] = acc;
    acc *= static_cast<std::size_t>(radices[i]);
  }
  std::vector<std::vector<double>> kern(count);
  Configuration omega(static_cast<std::size_t>(G.num_vertices()), kUnassigned);
  std::vector<int> dig(nb.size(), 0);
  for (std::size_t c = 0; c < count; ++c) {
    for (std::size_t i = 0; i < nb.size(); ++i) omega[static_cast<std::size_t>(nb[i])] = dig[i];
    kern[c] = local_kernel(G, single, omega).probs();
    for (std::size_t i = nb.size(); i-- > 0;) {
      if (++dig[i] < radices[i]) break;
      dig[i] = 0;
    }
  }
  std::vector<DobrushinEntry> row;
  for (std::size_t j = 0; j < nb.size(); ++j) {
    double best = 0.0;
    for (std::size_t c = 0; c < count; ++c) {
      const int x = static_cast<int>((c / stride[j]) % static_cast<std::size_t>(radices[j]));
      for (int a = x + 1; a < radices[j]; ++a) {
        const std::size_t c2 = c + static_cast<std::size_t>(a - x) * stride[j];
        double tv = 0.0;
        for (std::size_t s = 0; s < kern[c].size(); ++s) tv += std::abs(kern[c][s] - kern[c2][s]);
        best = std::max(best, 0.5 * tv);
      }
    }
    row.push_back({nb[j], best});
  }
  return row;
}

std::vector<std::vector<DobrushinEntry>> dobrushin_rows(const GibbsStructure& G,
                                                        unsigned long long budget) {
  const int n = G.num_vertices();
  std::vector<std::vector<DobrushinEntry>> rows(static_cast<std::size_t>(n));
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
  for (int v = 0; v < n; ++v) {
    try {
      rows[static_cast<std::size_t>(v)] = dobrushin_row(G, v, budget);
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return rows;
}

namespace {

void run_replica(const GibbsStructure& G, const GlauberSampler& sampler, const TiParams& p,
                 std::uint64_t seed, int replica, std::vector<double>& out) {
  Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(replica)}));
  Configuration omega = sampler.random_configuration(rng);
  const int per_batch = p.sweeps / p.batches;
  out.assign(static_cast<std::size_t>(p.grid * p.batches), 0.0);
  for (int j = 1; j < p.grid; ++j) {
    const double s = static_cast<double>(j) / (p.grid - 1);
    for (int b = 0; b < p.burn_in; ++b) sampler.sweep(omega, rng, s);
    for (int b = 0; b < p.batches; ++b) {
      double acc = 0.0;
      for (int t = 0; t < per_batch; ++t) {
        sampler.sweep(omega, rng, s);
        acc += energy(G, omega);
      }
      out[static_cast<std::size_t>(j * p.batches + b)] = acc / per_batch;
    }
  }
}

}  // namespace

TiBatchMeans ti_batch_means(const GibbsStructure& G, const TiParams& params, std::uint64_t seed) {
  params.validate();
  const GlauberSampler sampler(G);
  TiBatchMeans out(static_cast<std::size_t>(params.replicas));
#pragma omp parallel for schedule(dynamic)
  for (int r = 0; r < params.replicas; ++r) run_replica(G, sampler, params, seed, r, out[static_cast<std::size_t>(r)]);
  return out;
}

std::vector<SewardSample> seward_samples(const MarkovTreeSpec& spec, const FiniteWindow& F,
                                         int samples, std::uint64_t seed) {
  const FiniteWindow W = seward_window(F);
  const FiniteWindow B = seward_boundary(F, spec.m());
  const int e = W.index_of(GroupWord{});
  std::vector<SewardSample> out(static_cast<std::size_t>(samples));
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < samples; ++i) {
    try {
      Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(i)}));
      std::vector<int> order(W.size());
      for (std::size_t j = 0; j < order.size(); ++j) order[j] = static_cast<int>(j);
      rng.shuffle(order);
      std::vector<GroupWord> past;
      for (int j : order) {
        if (j == e) break;
        past.push_back(W[static_cast<std::size_t>(j)]);
      }
      SewardSample& s = out[static_cast<std::size_t>(i)];
      s.past = FiniteWindow(std::move(past));
      s.term = root_conditional_entropy(spec, set_union(s.past, B));
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace gibbsent::kernels
