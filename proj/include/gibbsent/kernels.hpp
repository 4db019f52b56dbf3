#pragma once

// Data-parallel kernels (OpenMP) and their serial reference versions. Each
// parallel kernel writes per-task results into fixed slots and reduces them
// in task order, so output does not depend on the thread count.

#include <cstdint>
#include <vector>

#include "gibbsent/entropy.hpp"
#include "gibbsent/gibbs.hpp"
#include "gibbsent/markov_tree.hpp"
#include "gibbsent/order.hpp"
#include "gibbsent/sofic.hpp"

namespace gibbsent {

struct PartitionSummary {
  double log_z = 0.0;
  double mean_energy = 0.0;
};

// Per replica, per grid point, the batch means of U: [replica][grid * batches + batch].
using TiBatchMeans = std::vector<std::vector<double>>;

namespace kernels {

// -U(omega) for every configuration, row-major over vertices 0..n-1.
std::vector<double> log_weights(const GibbsStructure& G, unsigned long long budget);
PartitionSummary partition_summary(const GibbsStructure& G, unsigned long long budget);

double good_fraction(const SoficMap& sigma, const FiniteWindow& S);
std::vector<long long> pullback_counts(const SoficMap& sigma, const FiniteWindow& F,
                                       const Configuration& tau, int alphabet_size);

std::vector<DobrushinEntry> dobrushin_row(const GibbsStructure& G, int v, unsigned long long budget);
std::vector<std::vector<DobrushinEntry>> dobrushin_rows(const GibbsStructure& G,
                                                        unsigned long long budget);

TiBatchMeans ti_batch_means(const GibbsStructure& G, const TiParams& params, std::uint64_t seed);

std::vector<SewardSample> seward_samples(const MarkovTreeSpec& spec, const FiniteWindow& F,
                                         int samples, std::uint64_t seed);

}  // namespace kernels

namespace reference {

std::vector<double> log_weights(const GibbsStructure& G, unsigned long long budget);
PartitionSummary partition_summary(const GibbsStructure& G, unsigned long long budget);
double good_fraction(const SoficMap& sigma, const FiniteWindow& S);
std::vector<long long> pullback_counts(const SoficMap& sigma, const FiniteWindow& F,
                                       const Configuration& tau, int alphabet_size);
std::vector<std::vector<DobrushinEntry>> dobrushin_rows(const GibbsStructure& G,
                                                        unsigned long long budget);
TiBatchMeans ti_batch_means(const GibbsStructure& G, const TiParams& params, std::uint64_t seed);
std::vector<SewardSample> seward_samples(const MarkovTreeSpec& spec, const FiniteWindow& F,
                                         int samples, std::uint64_t seed);

}  // namespace reference

}  // namespace gibbsent
