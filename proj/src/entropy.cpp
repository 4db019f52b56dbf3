#include "gibbsent/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gibbsent/kernels.hpp"

namespace gibbsent {

std::string to_string(Method m) {
  switch (m) {
    case Method::exact:
      return "exact";
    case Method::thermodynamic:
      return "thermodynamic";
    case Method::monte_carlo:
      return "monte_carlo";
  }
  return "exact";
}

double shannon(const ProbTable& mu) {
  double h = 0.0;
  for (double p : mu.probs())
    if (p > 0.0) h -= p * std::log(p);
  return h;
}

double conditional(const ProbTable& mu, std::span<const int> target, std::span<const int> given) {
  for (int t : target)
    if (std::find(given.begin(), given.end(), t) != given.end())
      throw InvalidInput("target and given must be disjoint");
  std::vector<int> joint(target.begin(), target.end());
  joint.insert(joint.end(), given.begin(), given.end());
  return shannon(mu.marginal(joint)) - shannon(mu.marginal(given));
}

double binary_entropy(double q) {
  double h = 0.0;
  if (q > 0.0) h -= q * std::log(q);
  if (q < 1.0) h -= (1.0 - q) * std::log1p(-q);
  return h;
}

EntropyEstimate gibbs_entropy_exact(const GibbsStructure& G, unsigned long long budget) {
  const PartitionSummary s = kernels::partition_summary(G, budget);
  return {s.log_z + s.mean_energy, 0.0, Method::exact};
}

void TiParams::validate() const {
  if (grid < 3 || grid % 2 == 0) throw InvalidInput("TI grid must be odd and >= 3");
  if (burn_in < 0 || sweeps < 1 || batches < 2 || replicas < 1 || sweeps < batches)
    throw InvalidInput("TI needs sweeps >= batches >= 2 and at least one replica");
}

EntropyEstimate gibbs_entropy_ti(const GibbsStructure& G, const TiParams& params, std::uint64_t seed) {
  params.validate();
  const int K = params.grid;
  const double h = 1.0 / (K - 1);
  std::vector<double> w(static_cast<std::size_t>(K));
  for (int j = 0; j < K; ++j) w[static_cast<std::size_t>(j)] = h / 3.0 * (j == 0 || j == K - 1 ? 1.0 : (j % 2 ? 4.0 : 2.0));

  // At s = 0 the measure is uniform and E[U] is the mean of every table.
  double log_states = 0.0;
  for (int v = 0; v < G.num_vertices(); ++v) log_states += std::log(static_cast<double>(G.radix(v)));
  double e0 = 0.0;
  for (const auto& term : G.terms())
    e0 += std::accumulate(term.table.begin(), term.table.end(), 0.0) / static_cast<double>(term.table.size());

  const TiBatchMeans batches = kernels::ti_batch_means(G, params, seed);
  const auto R = static_cast<std::size_t>(params.replicas);
  const auto B = static_cast<std::size_t>(params.batches);
  std::vector<double> mean(static_cast<std::size_t>(K), 0.0), var(static_cast<std::size_t>(K), 0.0);
  mean[0] = e0;
  for (std::size_t j = 1; j < static_cast<std::size_t>(K); ++j) {
    double s = 0.0;
    for (std::size_t r = 0; r < R; ++r)
      for (std::size_t b = 0; b < B; ++b) s += batches[r][j * B + b];
    const double m = s / static_cast<double>(R * B);
    double ss = 0.0;
    for (std::size_t r = 0; r < R; ++r)
      for (std::size_t b = 0; b < B; ++b) ss += (batches[r][j * B + b] - m) * (batches[r][j * B + b] - m);
    mean[j] = m;
    var[j] = ss / static_cast<double>(R * B - 1) / static_cast<double>(R * B);
  }
  double log_z = log_states;
  for (std::size_t j = 0; j < static_cast<std::size_t>(K); ++j) log_z -= w[j] * mean[j];
  const double value = log_z + mean.back();

  double v = 0.0;
  for (std::size_t j = 1; j < static_cast<std::size_t>(K); ++j) {
    const double c = (j + 1 == static_cast<std::size_t>(K) ? 1.0 : 0.0) - w[j];
    v += c * c * var[j];
  }
  return {value, std::sqrt(v), Method::thermodynamic};
}

EntropyEstimate structure_entropy(const GibbsStructure& G, const TiParams& params, std::uint64_t seed,
                                  unsigned long long exact_budget) {
  const auto comps = G.components();
  if (comps.size() == 1) {
    if (G.num_configurations() <= exact_budget) return gibbs_entropy_exact(G, exact_budget);
    return gibbs_entropy_ti(G, params, seed);
  }
  // Split into independent sub-structures.
  std::vector<int> where(static_cast<std::size_t>(G.num_vertices()));
  std::vector<std::vector<EnergyTerm>> terms(comps.size());
  for (std::size_t c = 0; c < comps.size(); ++c)
    for (std::size_t i = 0; i < comps[c].size(); ++i) where[static_cast<std::size_t>(comps[c][i])] = static_cast<int>(c);
  std::vector<int> local(static_cast<std::size_t>(G.num_vertices()));
  for (const auto& comp : comps)
    for (std::size_t i = 0; i < comp.size(); ++i) local[static_cast<std::size_t>(comp[i])] = static_cast<int>(i);
  for (const auto& term : G.terms()) {
    EnergyTerm t = term;
    for (int& v : t.support) v = local[static_cast<std::size_t>(v)];
    terms[static_cast<std::size_t>(where[static_cast<std::size_t>(term.support.front())])].push_back(std::move(t));
  }
  EntropyEstimate total{0.0, 0.0, Method::exact};
  double var = 0.0;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    std::vector<Alphabet> alphabets;
    for (int v : comps[c]) alphabets.push_back(G.alphabet(v));
    GibbsStructure sub(std::move(alphabets), std::move(terms[c]));
    EntropyEstimate part;
    if (sub.num_configurations() <= exact_budget) {
      part = gibbs_entropy_exact(sub, exact_budget);
    } else {
      part = gibbs_entropy_ti(sub, params, derive_seed(seed, {c}));
      total.method = Method::thermodynamic;
    }
    total.value += part.value;
    var += part.std_error * part.std_error;
  }
  total.std_error = std::sqrt(var);
  return total;
}

SoficEntropyResult sofic_entropy_estimate(const ShiftPotential& phi, std::span<const int> sizes,
                                          std::span<const std::uint64_t> seeds,
                                          const SoficEstimateParams& params) {
  phi.validate();
  if (sizes.empty() || seeds.empty()) throw InvalidInput("need at least one size and one seed");
  SoficEntropyResult result;
  for (int n : sizes) {
    SoficSizeResult sr;
    sr.n = n;
    for (std::uint64_t seed : seeds) {
      const SoficMap sigma = random_sofic(phi.m, n, seed);
      const GibbsStructure G = induced_structure(sigma, phi);
      EntropyEstimate est = structure_entropy(G, params.ti, derive_seed(seed, {static_cast<std::uint64_t>(n), 1}),
                                              params.exact_budget);
      est.value /= n;
      est.std_error /= n;
      sr.per_seed.push_back(est);
    }
    double s = 0.0;
    for (const auto& e : sr.per_seed) s += e.value;
    sr.mean = s / static_cast<double>(sr.per_seed.size());
    double ss = 0.0;
    for (const auto& e : sr.per_seed) ss += (e.value - sr.mean) * (e.value - sr.mean);
    sr.spread = sr.per_seed.size() > 1 ? std::sqrt(ss / static_cast<double>(sr.per_seed.size() - 1)) : 0.0;
    result.sizes.push_back(std::move(sr));
  }
  const SoficSizeResult& last = result.sizes.back();
  double mc = 0.0;
  Method method = Method::exact;
  for (const auto& e : last.per_seed) {
    mc += e.std_error * e.std_error;
    if (e.method != Method::exact) method = e.method;
  }
  const double count = static_cast<double>(last.per_seed.size());
  const double se = count > 1 ? last.spread / std::sqrt(count) : std::sqrt(mc) / count;
  result.estimate = {last.mean, std::max(se, std::sqrt(mc) / count), method};
  return result;
}

FiniteWindow seward_window(const FiniteWindow& F) { return set_union(F, FiniteWindow::identity()); }

FiniteWindow seward_boundary(const FiniteWindow& F, int m) {
  const auto supports = nearest_neighbour_supports(m);
  return potential_boundary(seward_window(F), supports);
}

double seward_term_by_tables(const MarkovTreeSpec& spec, const FiniteWindow& past,
                             const FiniteWindow& boundary, unsigned long long budget) {
  const FiniteWindow given = set_union(past, boundary);
  const FiniteWindow joint = set_union(given, FiniteWindow::identity());
  return shannon(marginal(spec, joint, budget)) - shannon(marginal(spec, given, budget));
}

EntropyEstimate seward_bound(const MarkovTreeSpec& spec, const FiniteWindow& F, int samples,
                             std::uint64_t seed) {
  if (samples < 2) throw InvalidInput("random-past bound needs at least two ordering samples");
  const auto draws = kernels::seward_samples(spec, F, samples, seed);
  double s = 0.0;
  for (const auto& d : draws) s += d.term;
  const double mean = s / samples;
  double ss = 0.0;
  for (const auto& d : draws) ss += (d.term - mean) * (d.term - mean);
  return {mean, std::sqrt(ss / (samples - 1) / samples), Method::monte_carlo};
}

double seward_bound_exact(const MarkovTreeSpec& spec, const FiniteWindow& F) {
  const FiniteWindow W = seward_window(F);
  const FiniteWindow B = seward_boundary(F, spec.m());
  std::vector<GroupWord> others;
  for (const auto& g : W)
    if (!g.is_identity()) others.push_back(g);
  const std::size_t n = others.size();
  if (n > 24) throw SizeError("exact random-past expectation limited to 24 window elements");
  // P(past = S) = |S|! (n - |S|)! / (n + 1)!
  std::vector<double> weight(n + 1);
  for (std::size_t k = 0; k <= n; ++k)
    weight[k] = std::exp(std::lgamma(static_cast<double>(k) + 1) + std::lgamma(static_cast<double>(n - k) + 1) -
                         std::lgamma(static_cast<double>(n) + 2));
  double total = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<GroupWord> past;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) past.push_back(others[i]);
    const std::size_t k = past.size();
    total += weight[k] * root_conditional_entropy(spec, set_union(FiniteWindow(std::move(past)), B));
  }
  return total;
}

std::vector<double> f_invariant_ball(const MarkovTreeSpec& spec, int r_max, unsigned long long budget) {
  const int m = spec.m();
  std::vector<double> out;
  for (int r = 0; r <= r_max; ++r) {
    const FiniteWindow C = ball(m, r);
    double value = (1.0 - 2.0 * m) * shannon(marginal(spec, C, budget));
    for (int i = 1; i <= m; ++i)
      value += shannon(marginal(spec, set_union(C, translate(C, GroupWord::generator(i))), budget));
    out.push_back(value);
  }
  return out;
}

double f_invariant_markov(const MarkovTreeSpec& spec) {
  const int m = spec.m();
  const auto k = static_cast<std::size_t>(spec.k());
  double h_root = 0.0;
  for (double p : spec.rho())
    if (p > 0.0) h_root -= p * std::log(p);
  double value = (1.0 - 2.0 * m) * h_root;
  for (int i = 1; i <= m; ++i) {
    const auto& P = spec.transition(i);
    double h_pair = 0.0;
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) {
        const double p = spec.rho()[a] * P[a * k + b];
        if (p > 0.0) h_pair -= p * std::log(p);
      }
    value += h_pair;
  }
  return value;
}

double f_ising(double beta, int m) {
  return (1.0 - m) * std::log(2.0) + m * binary_entropy(1.0 / (1.0 + std::exp(2.0 * beta)));
}

PhaseCriterion phase_transition_criterion(const MarkovTreeSpec& spec) {
  const double f = f_invariant_markov(spec);
  return {f, f <= 0.0};
}

double f_ising_root(int m, double lo, double hi) {
  if (m < 2) throw InvalidInput("f_{beta,m} has no root for m = 1");
  double flo = f_ising(lo, m), fhi = f_ising(hi, m);
  if (flo * fhi > 0.0) throw InvalidInput("bisection interval does not bracket a root");
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f_ising(mid, m);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace gibbsent
