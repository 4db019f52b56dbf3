#pragma once

// Invariant tree-indexed Markov measures on the Cayley tree of the free
// group with edges {g, s_i g}: root law rho at e and one transition matrix
// per generator, X_{s_i g} | X_g ~ P_i(X_g, .).

#include <vector>

#include "gibbsent/gibbs.hpp"
#include "gibbsent/group.hpp"
#include "gibbsent/order.hpp"
#include "gibbsent/shift.hpp"

namespace gibbsent {

class MarkovTreeSpec {
 public:
  static constexpr double kTolerance = 1e-12;

  MarkovTreeSpec() = default;
  // Checks row-stochasticity, rho P_i = rho and rho(a) P_i(a,b) = rho(b) P_i(b,a).
  MarkovTreeSpec(Alphabet alphabet, std::vector<double> rho,
                 std::vector<std::vector<double>> transitions);

  int m() const { return static_cast<int>(transitions_.size()); }
  int k() const { return alphabet_.size(); }
  const Alphabet& alphabet() const { return alphabet_; }
  const std::vector<double>& rho() const { return rho_; }
  // Row-major k*k matrix of generator s_i, i in 1..m.
  const std::vector<double>& transition(int i) const { return transitions_[static_cast<std::size_t>(i - 1)]; }
  const std::vector<std::vector<double>>& transitions() const { return transitions_; }

  // Law of X_{l g} given X_g for a letter l = +-i.
  double step(Letter l, int from, int to) const;

 private:
  Alphabet alphabet_;
  std::vector<double> rho_;
  std::vector<std::vector<double>> transitions_;
};

// Uniform root and P = [[e^{2b}, 1], [1, e^{2b}]] / (1 + e^{2b}) for every generator.
MarkovTreeSpec ising_spec(double beta, int m);

// Exact joint law on W, labels 0..|W|-1 in W's canonical order. Computed by
// elimination over the Steiner tree of W and e.
ProbTable marginal(const MarkovTreeSpec& spec, const FiniteWindow& W,
                   unsigned long long budget = kDefaultBudget);

struct ConsistencyReport {
  bool consistent = false;
  double max_deviation = 0.0;
};

// Compares the conditional law of X_e given its potential boundary under the
// tree measure with the single-site kernel of phi at e.
ConsistencyReport gibbs_consistency(const MarkovTreeSpec& spec, const ShiftPotential& phi,
                                    double tol = 1e-10);

// Exact draw from marginal(spec, W), values in W's canonical order.
std::vector<int> sample_window(const MarkovTreeSpec& spec, const FiniteWindow& W, Rng& rng);

// H(X_e | X_C) in nats for e not in C, by propagating likelihood classes of
// the observations up the Steiner tree.
double root_conditional_entropy(const MarkovTreeSpec& spec, const FiniteWindow& C);

// Site weight rho^{1-2m} and edge weight rho(a) P_i(a, b).
TreeSpecification tree_specification(const MarkovTreeSpec& spec);

}  // namespace gibbsent
