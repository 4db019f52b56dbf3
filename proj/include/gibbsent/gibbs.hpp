#pragma once

// Finite Gibbs structures: alphabets, tabulated energy terms, local kernels,
// pinning and exact Gibbs distributions.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gibbsent/errors.hpp"
#include "gibbsent/prob_table.hpp"
#include "gibbsent/rng.hpp"

namespace gibbsent {

class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> symbols);
  // Symbols "-1", "+1" in that order.
  static Alphabet ising();
  // Symbols "0", ..., "k-1".
  static Alphabet indexed(int k);

  int size() const { return static_cast<int>(symbols_.size()); }
  const std::string& label(int i) const { return symbols_[static_cast<std::size_t>(i)]; }
  int index_of(std::string_view label) const;
  const std::vector<std::string>& symbols() const { return symbols_; }

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::vector<std::string> symbols_;
};

// Energy (negative log-weight, nats) tabulated over the support, row-major.
struct EnergyTerm {
  std::vector<int> support;
  std::vector<double> table;

  friend bool operator==(const EnergyTerm&, const EnergyTerm&) = default;
};

// Symbol index per vertex; kUnassigned marks coordinates outside the stated set.
using Configuration = std::vector<int>;
constexpr int kUnassigned = -1;

class GibbsStructure {
 public:
  GibbsStructure() = default;
  // Supports are sorted on construction and tables permuted to match.
  GibbsStructure(std::vector<Alphabet> alphabets, std::vector<EnergyTerm> terms);

  int num_vertices() const { return static_cast<int>(alphabets_.size()); }
  const Alphabet& alphabet(int v) const { return alphabets_[static_cast<std::size_t>(v)]; }
  int radix(int v) const { return alphabet(v).size(); }
  std::vector<int> radices() const;
  const std::vector<Alphabet>& alphabets() const { return alphabets_; }
  const std::vector<EnergyTerm>& terms() const { return terms_; }
  std::span<const int> terms_at(int v) const { return incidence_[static_cast<std::size_t>(v)]; }

  std::size_t term_index(int t, const Configuration& omega) const;
  double term_energy(int t, const Configuration& omega) const;

  // Vertices outside the region sharing a term with it, sorted.
  std::vector<int> boundary(std::span<const int> region) const;
  // Connected components of the term hypergraph, each sorted.
  std::vector<std::vector<int>> components() const;
  // Product of alphabet sizes, saturated at max().
  unsigned long long num_configurations() const;

  friend bool operator==(const GibbsStructure& a, const GibbsStructure& b) {
    return a.alphabets_ == b.alphabets_ && a.terms_ == b.terms_;
  }

 private:
  std::vector<Alphabet> alphabets_;
  std::vector<EnergyTerm> terms_;
  std::vector<std::vector<int>> incidence_;
};

// Total energy U(omega) = sum of all term energies; omega assigns every vertex.
double energy(const GibbsStructure& G, const Configuration& omega);

// pi_{G,Lambda}(omega) over the sorted region. omega must assign the boundary.
ProbTable local_kernel(const GibbsStructure& G, std::span<const int> region,
                       const Configuration& omega, unsigned long long budget = kDefaultBudget);

// Restricts the alphabets on S to the symbols omega assigns there.
GibbsStructure pin(const GibbsStructure& G, std::span<const int> S, const Configuration& omega);

// p(omega) = exp(-U(omega)) / Z over every vertex, vertex order 0..n-1.
ProbTable exact_gibbs(const GibbsStructure& G, unsigned long long budget = kDefaultBudget);

// Mixture of delta(omega off region) x pi_{G,region}(omega) under mu. The
// domain of mu must contain the region and its boundary.
ProbTable apply_kernel(const GibbsStructure& G, std::span<const int> region, const ProbTable& mu,
                       unsigned long long budget = kDefaultBudget);

bool is_admissible(const GibbsStructure& G, std::span<const int> region, const ProbTable& mu,
                   double tol);

// Resamples coordinate v from its single-site kernel.
Configuration glauber_step(const GibbsStructure& G, int v, const Configuration& omega, Rng& rng);

// Heat-bath updates on a fixed structure, energies scaled by an inverse
// temperature factor. Holds a reference to the structure.
class GlauberSampler {
 public:
  explicit GlauberSampler(const GibbsStructure& G);

  // Heat-bath update of v at energy scale `scale`.
  void update(int v, Configuration& omega, Rng& rng, double scale = 1.0) const;
  // n updates at uniformly random sites.
  void sweep(Configuration& omega, Rng& rng, double scale = 1.0) const;
  Configuration random_configuration(Rng& rng) const;

  const GibbsStructure& structure() const { return *G_; }

 private:
  const GibbsStructure* G_;
  std::vector<std::vector<std::size_t>> strides_;
  int max_radix_ = 1;
};

}  // namespace gibbsent
