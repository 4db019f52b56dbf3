#pragma once

// Partial orders on alphabets, stochastic dominance, attractiveness,
// Dobrushin coefficients and max/min boundary recursions on the Cayley tree.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gibbsent/gibbs.hpp"
#include "gibbsent/shift.hpp"

namespace gibbsent {

class SiteOrder {
 public:
  SiteOrder() = default;
  // relation[a][b] is true when a precedes-or-equals b. Checked to be a partial order.
  explicit SiteOrder(std::vector<std::vector<bool>> relation);
  // Symbols ordered by index: 0 < 1 < ... < k-1.
  static SiteOrder chain(int k);
  // Only a <= a.
  static SiteOrder discrete(int k);

  int size() const { return static_cast<int>(rel_.size()); }
  bool leq(int a, int b) const { return rel_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]; }
  std::optional<int> top() const { return top_; }
  std::optional<int> bottom() const { return bottom_; }

 private:
  std::vector<std::vector<bool>> rel_;
  std::optional<int> top_;
  std::optional<int> bottom_;
};

// FKG product order on a table's domain, one SiteOrder per domain position.
bool fkg_leq(std::span<const SiteOrder> orders, std::span<const int> x, std::span<const int> y);

// True iff mu2 stochastically dominates mu1: a coupling supported on
// {(x, y) : x <= y} exists, decided by max-flow with 1e-12 slack.
bool dominates(std::span<const SiteOrder> orders, const ProbTable& mu1, const ProbTable& mu2);

struct AttractiveWitness {
  int vertex = -1;
  Configuration lower;  // boundary values, kUnassigned elsewhere
  Configuration upper;
};

struct AttractiveResult {
  bool attractive = true;
  std::optional<AttractiveWitness> witness;
};

// Single-site monotonicity check over every comparable pair of boundary configurations.
AttractiveResult is_attractive(const GibbsStructure& G, std::span<const SiteOrder> orders,
                               unsigned long long budget = kDefaultBudget);

struct DobrushinEntry {
  int u;
  double b;
};

struct DobrushinReport {
  std::vector<std::vector<DobrushinEntry>> rows;  // b_{v,u} for u in the boundary of v
  std::vector<double> b_row;                     // b_v
  double b_star = 0.0;

  double b(int v, int u) const;
};

DobrushinReport dobrushin(const GibbsStructure& G, unsigned long long budget = kDefaultBudget);

// Report for the shift structure at e; rows hold the single vertex e of the
// local window, b_star = b_e.
DobrushinReport dobrushin_shift(const ShiftPotential& phi, unsigned long long budget = kDefaultBudget);

// Nearest-neighbour specification on the 2m-regular tree: site weight h(a)
// and per-generator edge weights J_i(x_g, x_{s_i g}).
struct TreeSpecification {
  int m = 1;
  int k = 2;
  std::vector<double> site_weight;
  std::vector<std::vector<double>> edge_weight;  // m row-major k*k matrices

  void validate() const;
};

TreeSpecification ising_tree(double beta, int m);
// Requires every window to be {e} or {e, s_i}.
TreeSpecification tree_from_potential(const ShiftPotential& phi);
// Star of radius one around e, with site weights on every vertex.
WindowStructure star_structure(const TreeSpecification& spec);

enum class Boundary { max, min };

// Root marginal of the ball of radius r with the sphere pinned to the top
// (max) or bottom (min) symbol. r = 0 pins the root itself.
std::vector<double> tree_boundary_recursion(const TreeSpecification& spec, const SiteOrder& order,
                                            int r, Boundary boundary);
// Root marginals for r = 0..r_max in one pass.
std::vector<std::vector<double>> tree_boundary_sequence(const TreeSpecification& spec,
                                                        const SiteOrder& order, int r_max,
                                                        Boundary boundary);

enum class Verdict { unique, non_unique, undecided };
std::string to_string(Verdict v);

struct UniquenessReport {
  Verdict verdict = Verdict::undecided;
  int radius = 0;      // radius at which the verdict was reached
  double gap = 0.0;    // TV distance of max and min root marginals there
  double limit_gap = 0.0;  // extrapolated gap
  std::vector<double> max_marginal;
  std::vector<double> min_marginal;
};

// Throws InvalidInput when the specification is not attractive for `order`.
UniquenessReport uniqueness_verdict(const TreeSpecification& spec, const SiteOrder& order,
                                    double tol = 1e-6, int r_max = 5000);

}  // namespace gibbsent
