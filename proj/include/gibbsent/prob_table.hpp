#pragma once

// Exact distributions over finite product spaces, indexed row-major in
// mixed radix (the first domain entry is the most significant digit).

#include <cstddef>
#include <span>
#include <vector>

namespace gibbsent {

// Neumaier-compensated sum.
double stable_sum(std::span<const double> values);

class ProbTable {
 public:
  static constexpr double kNormTolerance = 1e-12;

  ProbTable() = default;
  // Probabilities must be nonnegative and sum to 1 within kNormTolerance.
  ProbTable(std::vector<int> domain, std::vector<int> radices, std::vector<double> probs);

  static ProbTable from_weights(std::vector<int> domain, std::vector<int> radices,
                                std::vector<double> weights);
  // Normalizes exp(log_weights) with log-sum-exp.
  static ProbTable from_log_weights(std::vector<int> domain, std::vector<int> radices,
                                    std::span<const double> log_weights);
  static ProbTable uniform(std::vector<int> domain, std::vector<int> radices);
  static ProbTable point_mass(std::vector<int> domain, std::vector<int> radices,
                              std::span<const int> digits);

  const std::vector<int>& domain() const { return domain_; }
  const std::vector<int>& radices() const { return radices_; }
  const std::vector<double>& probs() const { return probs_; }
  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }

  // Position of a domain label, or -1.
  int position(int label) const;
  std::size_t index(std::span<const int> digits) const;
  void digits(std::size_t index, std::span<int> out) const;
  std::vector<int> digits(std::size_t index) const;

  // Marginal on the listed labels, in the listed order.
  ProbTable marginal(std::span<const int> labels) const;

 private:
  std::vector<int> domain_;
  std::vector<int> radices_;
  std::vector<double> probs_;
};

// Number of cells of a mixed-radix table; throws SizeError above budget.
std::size_t table_size(std::span<const int> radices, unsigned long long budget);

// Both tables must carry the same label set; b is reordered to a's domain.
double total_variation(const ProbTable& a, const ProbTable& b);

// Product measure on the concatenated (disjoint) domain.
ProbTable product_measure(const ProbTable& a, const ProbTable& b);

}  // namespace gibbsent
