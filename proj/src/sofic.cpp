#include "gibbsent/sofic.hpp"

#include <algorithm>
#include <map>

#include "gibbsent/kernels.hpp"

namespace gibbsent {

SoficMap::SoficMap(int n, std::vector<std::vector<int>> perms) : n_(n), perms_(std::move(perms)) {
  if (n_ < 1) throw InvalidInput("sofic map needs n >= 1");
  for (const auto& p : perms_) {
    if (p.size() != static_cast<std::size_t>(n_)) throw InvalidInput("permutation has wrong length");
    std::vector<int> inv(p.size(), -1);
    for (std::size_t v = 0; v < p.size(); ++v) {
      int w = p[v];
      if (w < 0 || w >= n_ || inv[static_cast<std::size_t>(w)] != -1)
        throw InvalidInput("generator map is not a bijection");
      inv[static_cast<std::size_t>(w)] = static_cast<int>(v);
    }
    inverses_.push_back(std::move(inv));
  }
}

SoficMap random_sofic(int m, int n, std::uint64_t seed) {
  if (m < 1 || n < 1) throw InvalidInput("random_sofic needs m >= 1 and n >= 1");
  std::vector<std::vector<int>> perms;
  for (int i = 0; i < m; ++i) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(i)}));
    std::vector<int> p(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) p[static_cast<std::size_t>(v)] = v;
    rng.shuffle(p);
    perms.push_back(std::move(p));
  }
  return SoficMap(n, std::move(perms));
}

int act(const SoficMap& sigma, const GroupWord& g, int v) {
  auto letters = g.letters();
  for (auto it = letters.rbegin(); it != letters.rend(); ++it) {
    if (std::abs(*it) > sigma.rank()) throw InvalidInput("word uses a generator above the sofic rank");
    v = sigma.apply_letter(*it, v);
  }
  return v;
}

bool is_good(const SoficMap& sigma, const FiniteWindow& S, int v) {
  std::vector<int> image;
  image.reserve(S.size());
  for (const auto& g : S) image.push_back(act(sigma, g, v));
  // (1) distinct images.
  std::vector<int> sorted = image;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (int w : sorted) {
    for (const auto& g1 : S) {
      const int g1w = act(sigma, g1, w);
      // (3) sigma^{g^-1} sigma^g w = w.
      if (act(sigma, g1.inverse(), g1w) != w) return false;
      for (const auto& g2 : S) {
        // (2) sigma^{g1} sigma^{g2} w = sigma^{g1 g2} w.
        if (act(sigma, g1, act(sigma, g2, w)) != act(sigma, g1 * g2, w)) return false;
      }
    }
  }
  // (4) w = sigma^g(t) forces t = sigma^{g^-1}(w): sigma^g is injective, so
  // the unique preimage is checked directly.
  for (int w : sorted) {
    for (const auto& g : S) {
      const GroupWord ginv = g.inverse();
      const int t = act(sigma, ginv, w);
      if (act(sigma, g, t) != w) return false;
    }
  }
  return true;
}

double good_fraction(const SoficMap& sigma, const FiniteWindow& S) {
  return kernels::good_fraction(sigma, S);
}

std::vector<int> pullback(const SoficMap& sigma, int v, const FiniteWindow& F,
                          const Configuration& tau) {
  std::vector<int> out;
  out.reserve(F.size());
  for (const auto& g : F) out.push_back(tau[static_cast<std::size_t>(act(sigma, g, v))]);
  return out;
}

GibbsStructure induced_structure(const SoficMap& sigma, const ShiftPotential& phi) {
  phi.validate();
  if (phi.m > sigma.rank()) throw InvalidInput("potential rank exceeds the sofic map rank");
  const int k = phi.alphabet.size();
  std::map<std::vector<int>, std::size_t> slot;
  std::vector<EnergyTerm> terms;
  for (const auto& term : phi.terms) {
    const std::size_t d = term.window.size();
    for (int v = 0; v < sigma.n(); ++v) {
      std::vector<int> image(d);
      for (std::size_t j = 0; j < d; ++j) image[j] = act(sigma, term.window[j], v);
      std::vector<int> support = image;
      std::sort(support.begin(), support.end());
      support.erase(std::unique(support.begin(), support.end()), support.end());
      std::vector<std::size_t> pos(d);
      for (std::size_t j = 0; j < d; ++j)
        pos[j] = static_cast<std::size_t>(std::lower_bound(support.begin(), support.end(), image[j]) - support.begin());

      auto [it, fresh] = slot.try_emplace(support, terms.size());
      std::size_t cells = 1;
      for (std::size_t i = 0; i < support.size(); ++i) cells *= static_cast<std::size_t>(k);
      if (fresh) terms.push_back({support, std::vector<double>(cells, 0.0)});
      auto& table = terms[it->second].table;

      // Each configuration on the (possibly collapsed) support reads the
      // window coordinates through sigma.
      std::vector<int> dig(support.size(), 0);
      for (std::size_t idx = 0; idx < cells; ++idx) {
        std::size_t src = 0;
        for (std::size_t j = 0; j < d; ++j) src = src * static_cast<std::size_t>(k) + static_cast<std::size_t>(dig[pos[j]]);
        table[idx] += term.table[src];
        for (std::size_t i = support.size(); i-- > 0;) {
          if (++dig[i] < k) break;
          dig[i] = 0;
        }
      }
    }
  }
  std::vector<Alphabet> alphabets(static_cast<std::size_t>(sigma.n()), phi.alphabet);
  return GibbsStructure(std::move(alphabets), std::move(terms));
}

ProbTable empirical_pullback(const SoficMap& sigma, const FiniteWindow& F, const Configuration& tau,
                             int alphabet_size) {
  std::vector<long long> counts = kernels::pullback_counts(sigma, F, tau, alphabet_size);
  std::vector<int> domain(F.size());
  for (std::size_t i = 0; i < F.size(); ++i) domain[i] = static_cast<int>(i);
  std::vector<double> w(counts.begin(), counts.end());
  return ProbTable::from_weights(std::move(domain), std::vector<int>(F.size(), alphabet_size), std::move(w));
}

}  // namespace gibbsent
