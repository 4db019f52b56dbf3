#include "gibbsent/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "gibbsent/kernels.hpp"

namespace gibbsent {

Alphabet::Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
  if (symbols_.empty()) throw InvalidInput("alphabet must have at least one symbol");
  std::vector<std::string> sorted = symbols_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw InvalidInput("alphabet symbols must be distinct");
}

Alphabet Alphabet::ising() { return Alphabet({"-1", "+1"}); }

Alphabet Alphabet::indexed(int k) {
  std::vector<std::string> s;
  for (int i = 0; i < k; ++i) s.push_back(std::to_string(i));
  return Alphabet(std::move(s));
}

int Alphabet::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < symbols_.size(); ++i)
    if (symbols_[i] == label) return static_cast<int>(i);
  return -1;
}

namespace {

// Row-major strides of a term table over its support.
std::vector<std::size_t> term_strides(const GibbsStructure& G, const EnergyTerm& term) {
  std::vector<std::size_t> s(term.support.size());
  std::size_t acc = 1;
  for (std::size_t i = term.support.size(); i-- > 0;) {
    s[i] = acc;
    acc *= static_cast<std::size_t>(G.radix(term.support[i]));
  }
  return s;
}

}  // namespace

GibbsStructure::GibbsStructure(std::vector<Alphabet> alphabets, std::vector<EnergyTerm> terms)
    : alphabets_(std::move(alphabets)), incidence_(alphabets_.size()) {
  const int n = static_cast<int>(alphabets_.size());
  terms_.reserve(terms.size());
  for (auto& term : terms) {
    for (int v : term.support)
      if (v < 0 || v >= n) throw InvalidInput("term support outside the vertex set");
    std::vector<std::size_t> order(term.support.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return term.support[a] < term.support[b]; });
    EnergyTerm sorted;
    for (std::size_t i : order) sorted.support.push_back(term.support[i]);
    if (std::adjacent_find(sorted.support.begin(), sorted.support.end()) != sorted.support.end())
      throw InvalidInput("term support has a repeated vertex");
    std::size_t cells = 1;
    for (int v : term.support) cells *= static_cast<std::size_t>(alphabets_[static_cast<std::size_t>(v)].size());
    if (term.table.size() != cells) throw InvalidInput("term table size does not match its support");
    for (double x : term.table)
      if (!std::isfinite(x)) throw InvalidInput("term energies must be finite");

    // Permute the table from the given support order to the sorted one.
    const std::size_t k = term.support.size();
    std::vector<int> rad_old(k), rad_new(k);
    for (std::size_t i = 0; i < k; ++i) {
      rad_old[i] = alphabets_[static_cast<std::size_t>(term.support[i])].size();
      rad_new[i] = alphabets_[static_cast<std::size_t>(sorted.support[i])].size();
    }
    sorted.table.assign(cells, 0.0);
    std::vector<int> dig(k);
    for (std::size_t idx = 0; idx < cells; ++idx) {
      std::size_t rem = idx;
      for (std::size_t i = k; i-- > 0;) {
        dig[i] = static_cast<int>(rem % static_cast<std::size_t>(rad_old[i]));
        rem /= static_cast<std::size_t>(rad_old[i]);
      }
      std::size_t out = 0;
      for (std::size_t j = 0; j < k; ++j)
        out = out * static_cast<std::size_t>(rad_new[j]) + static_cast<std::size_t>(dig[order[j]]);
      sorted.table[out] = term.table[idx];
    }
    terms_.push_back(std::move(sorted));
  }
  for (std::size_t t = 0; t < terms_.size(); ++t)
    for (int v : terms_[t].support) incidence_[static_cast<std::size_t>(v)].push_back(static_cast<int>(t));
}

std::vector<int> GibbsStructure::radices() const {
  std::vector<int> r;
  r.reserve(alphabets_.size());
  for (const auto& a : alphabets_) r.push_back(a.size());
  return r;
}

std::size_t GibbsStructure::term_index(int t, const Configuration& omega) const {
  const auto& term = terms_[static_cast<std::size_t>(t)];
  std::size_t idx = 0;
  for (int v : term.support) {
    int x = omega[static_cast<std::size_t>(v)];
    if (x < 0 || x >= radix(v)) throw InvalidInput("configuration does not assign a term vertex");
    idx = idx * static_cast<std::size_t>(radix(v)) + static_cast<std::size_t>(x);
  }
  return idx;
}

double GibbsStructure::term_energy(int t, const Configuration& omega) const {
  return terms_[static_cast<std::size_t>(t)].table[term_index(t, omega)];
}

std::vector<int> GibbsStructure::boundary(std::span<const int> region) const {
  std::vector<char> in(alphabets_.size(), 0);
  for (int v : region) in[static_cast<std::size_t>(v)] = 1;
  std::vector<char> out(alphabets_.size(), 0);
  for (int v : region)
    for (int t : terms_at(v))
      for (int u : terms_[static_cast<std::size_t>(t)].support)
        if (!in[static_cast<std::size_t>(u)]) out[static_cast<std::size_t>(u)] = 1;
  std::vector<int> result;
  for (std::size_t u = 0; u < out.size(); ++u)
    if (out[u]) result.push_back(static_cast<int>(u));
  return result;
}

std::vector<std::vector<int>> GibbsStructure::components() const {
  const int n = num_vertices();
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  for (const auto& term : terms_)
    for (std::size_t i = 1; i < term.support.size(); ++i) {
      int a = find(term.support[0]), b = find(term.support[i]);
      if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }
  std::map<int, std::vector<int>> groups;
  for (int v = 0; v < n; ++v) groups[find(v)].push_back(v);
  std::vector<std::vector<int>> out;
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  return out;
}

unsigned long long GibbsStructure::num_configurations() const {
  unsigned long long n = 1;
  const auto cap = std::numeric_limits<unsigned long long>::max();
  for (const auto& a : alphabets_) {
    auto r = static_cast<unsigned long long>(a.size());
    n = n > cap / r ? cap : n * r;
  }
  return n;
}

double energy(const GibbsStructure& G, const Configuration& omega) {
  if (omega.size() != static_cast<std::size_t>(G.num_vertices()))
    throw InvalidInput("configuration length does not match the structure");
  double u = 0.0;
  for (std::size_t t = 0; t < G.terms().size(); ++t) u += G.term_energy(static_cast<int>(t), omega);
  return u;
}

namespace {

std::vector<int> sorted_region(std::span<const int> region, int n) {
  std::vector<int> r(region.begin(), region.end());
  std::sort(r.begin(), r.end());
  if (std::adjacent_find(r.begin(), r.end()) != r.end()) throw InvalidInput("region has duplicates");
  for (int v : r)
    if (v < 0 || v >= n) throw InvalidInput("region vertex out of range");
  return r;
}

std::vector<int> touching_terms(const GibbsStructure& G, const std::vector<int>& region) {
  std::vector<int> ts;
  for (int v : region) ts.insert(ts.end(), G.terms_at(v).begin(), G.terms_at(v).end());
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  return ts;
}

}  // namespace

ProbTable local_kernel(const GibbsStructure& G, std::span<const int> region_in,
                       const Configuration& omega, unsigned long long budget) {
  const std::vector<int> region = sorted_region(region_in, G.num_vertices());
  if (omega.size() != static_cast<std::size_t>(G.num_vertices()))
    throw InvalidInput("configuration length does not match the structure");
  for (int u : G.boundary(region)) {
    int x = omega[static_cast<std::size_t>(u)];
    if (x < 0 || x >= G.radix(u)) throw InvalidInput("configuration must assign the region boundary");
  }
  std::vector<int> radices;
  for (int v : region) radices.push_back(G.radix(v));
  const std::size_t cells = table_size(radices, budget);
  const std::vector<int> ts = touching_terms(G, region);

  Configuration w = omega;
  std::vector<double> logw(cells);
  std::vector<int> dig(region.size(), 0);
  for (std::size_t idx = 0; idx < cells; ++idx) {
    for (std::size_t i = 0; i < region.size(); ++i) w[static_cast<std::size_t>(region[i])] = dig[i];
    double u = 0.0;
    for (int t : ts) u += G.term_energy(t, w);
    logw[idx] = -u;
    for (std::size_t i = region.size(); i-- > 0;) {
      if (++dig[i] < radices[i]) break;
      dig[i] = 0;
    }
  }
  return ProbTable::from_log_weights(region, std::move(radices), logw);
}

GibbsStructure pin(const GibbsStructure& G, std::span<const int> S, const Configuration& omega) {
  std::vector<char> pinned(static_cast<std::size_t>(G.num_vertices()), 0);
  for (int v : S) {
    if (v < 0 || v >= G.num_vertices()) throw InvalidInput("pinned vertex out of range");
    int x = omega[static_cast<std::size_t>(v)];
    if (x < 0 || x >= G.radix(v)) throw InvalidInput("configuration must assign the pinned set");
    pinned[static_cast<std::size_t>(v)] = 1;
  }
  std::vector<Alphabet> alphabets = G.alphabets();
  for (int v : S) alphabets[static_cast<std::size_t>(v)] = Alphabet({G.alphabet(v).label(omega[static_cast<std::size_t>(v)])});

  std::vector<EnergyTerm> terms;
  for (const auto& term : G.terms()) {
    EnergyTerm out;
    out.support = term.support;
    const std::size_t k = term.support.size();
    std::vector<int> old_rad(k), new_rad(k);
    for (std::size_t i = 0; i < k; ++i) {
      int v = term.support[i];
      old_rad[i] = G.radix(v);
      new_rad[i] = pinned[static_cast<std::size_t>(v)] ? 1 : old_rad[i];
    }
    std::size_t cells = 1;
    for (int r : new_rad) cells *= static_cast<std::size_t>(r);
    out.table.resize(cells);
    std::vector<int> dig(k, 0);
    for (std::size_t idx = 0; idx < cells; ++idx) {
      std::size_t src = 0;
      for (std::size_t i = 0; i < k; ++i) {
        int v = term.support[i];
        int x = pinned[static_cast<std::size_t>(v)] ? omega[static_cast<std::size_t>(v)] : dig[i];
        src = src * static_cast<std::size_t>(old_rad[i]) + static_cast<std::size_t>(x);
      }
      out.table[idx] = term.table[src];
      for (std::size_t i = k; i-- > 0;) {
        if (++dig[i] < new_rad[i]) break;
        dig[i] = 0;
      }
    }
    terms.push_back(std::move(out));
  }
  return GibbsStructure(std::move(alphabets), std::move(terms));
}

ProbTable exact_gibbs(const GibbsStructure& G, unsigned long long budget) {
  std::vector<double> logw = kernels::log_weights(G, budget);
  std::vector<int> domain(static_cast<std::size_t>(G.num_vertices()));
  std::iota(domain.begin(), domain.end(), 0);
  return ProbTable::from_log_weights(std::move(domain), G.radices(), logw);
}

ProbTable apply_kernel(const GibbsStructure& G, std::span<const int> region_in, const ProbTable& mu,
                       unsigned long long budget) {
  const std::vector<int> region = sorted_region(region_in, G.num_vertices());
  if (region.empty()) return mu;
  const std::vector<int> bnd = G.boundary(region);
  const auto& domain = mu.domain();
  std::vector<int> region_pos, bnd_pos;
  for (int v : region) {
    int p = mu.position(v);
    if (p < 0) throw InvalidInput("measure domain must contain the region");
    region_pos.push_back(p);
  }
  for (int u : bnd) {
    int p = mu.position(u);
    if (p < 0) throw InvalidInput("measure domain must contain the region boundary");
    bnd_pos.push_back(p);
  }
  for (std::size_t i = 0; i < domain.size(); ++i)
    if (mu.radices()[i] != G.radix(domain[i])) throw InvalidInput("measure radices differ from alphabets");

  std::vector<double> out(mu.size(), 0.0);
  std::map<std::vector<int>, ProbTable> cache;
  std::vector<int> dig(domain.size());
  Configuration omega(static_cast<std::size_t>(G.num_vertices()), kUnassigned);
  std::vector<int> key(bnd.size());
  std::vector<int> kdig(region.size());
  for (std::size_t idx = 0; idx < mu.size(); ++idx) {
    const double p = mu[idx];
    if (p == 0.0) continue;
    mu.digits(idx, dig);
    for (std::size_t i = 0; i < bnd.size(); ++i) key[i] = dig[static_cast<std::size_t>(bnd_pos[i])];
    auto it = cache.find(key);
    if (it == cache.end()) {
      for (std::size_t i = 0; i < domain.size(); ++i) omega[static_cast<std::size_t>(domain[i])] = dig[i];
      it = cache.emplace(key, local_kernel(G, region, omega, budget)).first;
    }
    const ProbTable& kern = it->second;
    for (std::size_t c = 0; c < kern.size(); ++c) {
      if (kern[c] == 0.0) continue;
      kern.digits(c, kdig);
      for (std::size_t i = 0; i < region.size(); ++i) dig[static_cast<std::size_t>(region_pos[i])] = kdig[i];
      out[mu.index(dig)] += p * kern[c];
    }
  }
  return ProbTable::from_weights(domain, mu.radices(), std::move(out));
}

bool is_admissible(const GibbsStructure& G, std::span<const int> region, const ProbTable& mu,
                   double tol) {
  return total_variation(mu, apply_kernel(G, region, mu)) <= tol;
}

Configuration glauber_step(const GibbsStructure& G, int v, const Configuration& omega, Rng& rng) {
  const int single[] = {v};
  ProbTable k = local_kernel(G, single, omega);
  Configuration out = omega;
  out[static_cast<std::size_t>(v)] = rng.categorical(k.probs().data(), static_cast<int>(k.size()));
  return out;
}

GlauberSampler::GlauberSampler(const GibbsStructure& G) : G_(&G) {
  strides_.reserve(G.terms().size());
  for (const auto& term : G.terms()) strides_.push_back(term_strides(G, term));
  for (int v = 0; v < G.num_vertices(); ++v) max_radix_ = std::max(max_radix_, G.radix(v));
}

void GlauberSampler::update(int v, Configuration& omega, Rng& rng, double scale) const {
  const int k = G_->radix(v);
  if (k == 1) {
    omega[static_cast<std::size_t>(v)] = 0;
    return;
  }
  double e[16];
  std::vector<double> big;
  double* energies = e;
  if (k > 16) {
    big.resize(static_cast<std::size_t>(k));
    energies = big.data();
  }
  std::fill(energies, energies + k, 0.0);
  for (int t : G_->terms_at(v)) {
    const auto& term = G_->terms()[static_cast<std::size_t>(t)];
    const auto& st = strides_[static_cast<std::size_t>(t)];
    std::size_t base = 0;
    std::size_t vstride = 0;
    for (std::size_t i = 0; i < term.support.size(); ++i) {
      const int u = term.support[i];
      if (u == v) {
        vstride = st[i];
      } else {
        base += st[i] * static_cast<std::size_t>(omega[static_cast<std::size_t>(u)]);
      }
    }
    for (int a = 0; a < k; ++a) energies[a] += term.table[base + static_cast<std::size_t>(a) * vstride];
  }
  double lo = energies[0];
  for (int a = 1; a < k; ++a) lo = std::min(lo, energies[a]);
  for (int a = 0; a < k; ++a) energies[a] = std::exp(-scale * (energies[a] - lo));
  omega[static_cast<std::size_t>(v)] = rng.categorical(energies, k);
}

void GlauberSampler::sweep(Configuration& omega, Rng& rng, double scale) const {
  const auto n = static_cast<std::uint64_t>(G_->num_vertices());
  for (std::uint64_t i = 0; i < n; ++i) update(static_cast<int>(rng.below(n)), omega, rng, scale);
}

Configuration GlauberSampler::random_configuration(Rng& rng) const {
  Configuration omega(static_cast<std::size_t>(G_->num_vertices()));
  for (int v = 0; v < G_->num_vertices(); ++v)
    omega[static_cast<std::size_t>(v)] = static_cast<int>(rng.below(static_cast<std::uint64_t>(G_->radix(v))));
  return omega;
}

}  // namespace gibbsent
