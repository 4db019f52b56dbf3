#pragma once

// Sofic approximations of the free group by independent uniform random
// permutations, S-good vertices, pullbacks theta_v and induced structures.

#include <cstdint>
#include <vector>

#include "gibbsent/gibbs.hpp"
#include "gibbsent/group.hpp"
#include "gibbsent/shift.hpp"

namespace gibbsent {

class SoficMap {
 public:
  SoficMap() = default;
  // perms[i] is the permutation of generator s_{i+1}; each must be a bijection of {0..n-1}.
  SoficMap(int n, std::vector<std::vector<int>> perms);

  int n() const { return n_; }
  int rank() const { return static_cast<int>(perms_.size()); }
  const std::vector<std::vector<int>>& perms() const { return perms_; }

  // sigma^{l}(v) for a single letter.
  int apply_letter(Letter l, int v) const {
    return l > 0 ? perms_[static_cast<std::size_t>(l - 1)][static_cast<std::size_t>(v)]
                 : inverses_[static_cast<std::size_t>(-l - 1)][static_cast<std::size_t>(v)];
  }

  friend bool operator==(const SoficMap& a, const SoficMap& b) {
    return a.n_ == b.n_ && a.perms_ == b.perms_;
  }

 private:
  int n_ = 0;
  std::vector<std::vector<int>> perms_;
  std::vector<std::vector<int>> inverses_;
};

// m independent uniform permutations of {0..n-1}; deterministic in (m, n, seed).
SoficMap random_sofic(int m, int n, std::uint64_t seed);

// sigma^g(v): generator permutations composed along the word, left factor last.
int act(const SoficMap& sigma, const GroupWord& g, int v);

// The four S-good conditions, evaluated literally.
bool is_good(const SoficMap& sigma, const FiniteWindow& S, int v);

// Fraction of S-good vertices.
double good_fraction(const SoficMap& sigma, const FiniteWindow& S);

// theta_v(tau) restricted to F, in F's canonical order.
std::vector<int> pullback(const SoficMap& sigma, int v, const FiniteWindow& F,
                          const Configuration& tau);

// One term per vertex v on sigma^D(v) for every window term; supports that
// collapse at non-good vertices are kept on the collapsed vertex set, and
// terms with equal supports are summed.
GibbsStructure induced_structure(const SoficMap& sigma, const ShiftPotential& phi);

// Average over v of the point masses at pullback(sigma, v, F, tau), over labels 0..|F|-1.
ProbTable empirical_pullback(const SoficMap& sigma, const FiniteWindow& F, const Configuration& tau,
                             int alphabet_size);

}  // namespace gibbsent
