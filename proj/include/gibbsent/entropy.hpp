#pragma once

// Shannon and conditional entropy of tables, entropy of finite Gibbs
// measures, sofic-entropy and random-past window estimators, and the
// f-invariant of tree Markov measures.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gibbsent/gibbs.hpp"
#include "gibbsent/markov_tree.hpp"
#include "gibbsent/shift.hpp"

namespace gibbsent {

enum class Method { exact, thermodynamic, monte_carlo };
std::string to_string(Method m);

struct EntropyEstimate {
  double value = 0.0;      // nats
  double std_error = 0.0;  // nats, 0 for exact values
  Method method = Method::exact;
};

// -sum p log p, natural log, 0 log 0 = 0.
double shannon(const ProbTable& mu);
// H(target, given) - H(given); labels refer to mu's domain.
double conditional(const ProbTable& mu, std::span<const int> target, std::span<const int> given);
// Binary entropy in nats.
double binary_entropy(double q);

EntropyEstimate gibbs_entropy_exact(const GibbsStructure& G, unsigned long long budget = kDefaultBudget);

// Thermodynamic integration: log Z(1) = sum_v log|A_v| - int_0^1 E_s[U] ds,
// with E_s under exp(-sU)/Z(s) estimated by heat-bath sweeps on a Simpson
// grid, annealed upward in s. Each replica is an independent chain.
struct TiParams {
  int grid = 21;  // odd
  int burn_in = 50;
  int sweeps = 200;
  int batches = 10;
  int replicas = 4;

  void validate() const;
};

EntropyEstimate gibbs_entropy_ti(const GibbsStructure& G, const TiParams& params, std::uint64_t seed);

// Sum over connected components: exact where the component fits the budget,
// thermodynamic integration otherwise.
EntropyEstimate structure_entropy(const GibbsStructure& G, const TiParams& params, std::uint64_t seed,
                                  unsigned long long exact_budget = 1ULL << 20);

struct SoficEstimateParams {
  TiParams ti;
  unsigned long long exact_budget = 1ULL << 20;
};

struct SoficSizeResult {
  int n = 0;
  std::vector<EntropyEstimate> per_seed;  // H(eta)/n
  double mean = 0.0;
  double spread = 0.0;  // sample standard deviation across seeds
};

struct SoficEntropyResult {
  std::vector<SoficSizeResult> sizes;
  EntropyEstimate estimate;  // largest size
};

// H(eta_i)/|V_i| for random sofic maps of the listed sizes and seeds.
SoficEntropyResult sofic_entropy_estimate(const ShiftPotential& phi, std::span<const int> sizes,
                                          std::span<const std::uint64_t> seeds,
                                          const SoficEstimateParams& params);

// One random-past sample on the window W = F plus e: the elements ordered
// before e, and the conditional entropy H(X_e | X_{past}, X_{boundary of W}).
struct SewardSample {
  FiniteWindow past;
  double term = 0.0;
};

// Window past sets and the nearest-neighbour boundary of F plus e.
FiniteWindow seward_window(const FiniteWindow& F);
FiniteWindow seward_boundary(const FiniteWindow& F, int m);

// H(e, past, boundary) - H(past, boundary) from exact window marginals.
double seward_term_by_tables(const MarkovTreeSpec& spec, const FiniteWindow& past,
                             const FiniteWindow& boundary, unsigned long long budget = kDefaultBudget);

// Monte Carlo mean over `samples` uniform orderings of F plus e.
EntropyEstimate seward_bound(const MarkovTreeSpec& spec, const FiniteWindow& F, int samples,
                             std::uint64_t seed);

// Exact expectation over orderings, summing over past sets with weight
// |P|! (|W|-1-|P|)! / |W|!. Cost 2^{|F|}.
double seward_bound_exact(const MarkovTreeSpec& spec, const FiniteWindow& F);

// (1 - 2m) H(X_{C_r}) + sum_i H(X_{C_r u C_r s_i}) for r = 0..r_max.
std::vector<double> f_invariant_ball(const MarkovTreeSpec& spec, int r_max,
                                     unsigned long long budget = kDefaultBudget);

// (1 - 2m) H(rho) + sum_i H(rho(a) P_i(a, b)).
double f_invariant_markov(const MarkovTreeSpec& spec);

// (1 - m) log 2 + m H_b(1 / (1 + e^{2 beta})).
double f_ising(double beta, int m);

struct PhaseCriterion {
  double f = 0.0;
  bool nonpositive = false;
};

PhaseCriterion phase_transition_criterion(const MarkovTreeSpec& spec);

// beta in [lo, hi] with f_ising(beta, m) = 0, by bisection; m >= 2.
double f_ising_root(int m, double lo = 0.0, double hi = 20.0);

}  // namespace gibbsent
