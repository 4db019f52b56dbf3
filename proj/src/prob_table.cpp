#include "gibbsent/prob_table.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gibbsent/errors.hpp"

namespace gibbsent {

double stable_sum(std::span<const double> values) {
  double sum = 0.0;
  double comp = 0.0;
  for (double v : values) {
    double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

std::size_t table_size(std::span<const int> radices, unsigned long long budget) {
  unsigned long long n = 1;
  for (int r : radices) {
    if (r < 1) throw InvalidInput("radix must be >= 1");
    if (n > budget / static_cast<unsigned long long>(r))
      throw SizeError("table exceeds enumeration budget of " + std::to_string(budget));
    n *= static_cast<unsigned long long>(r);
  }
  if (n > budget) throw SizeError("table exceeds enumeration budget of " + std::to_string(budget));
  return static_cast<std::size_t>(n);
}

namespace {

void check_domain(const std::vector<int>& domain, const std::vector<int>& radices) {
  if (domain.size() != radices.size()) throw InvalidInput("domain and radices differ in length");
  std::vector<int> sorted = domain;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw InvalidInput("duplicate label in table domain");
}

}  // namespace

ProbTable::ProbTable(std::vector<int> domain, std::vector<int> radices, std::vector<double> probs)
    : domain_(std::move(domain)), radices_(std::move(radices)), probs_(std::move(probs)) {
  check_domain(domain_, radices_);
  if (table_size(radices_, std::numeric_limits<unsigned long long>::max()) != probs_.size())
    throw InvalidInput("probability vector length does not match radices");
  for (double p : probs_)
    if (!(p >= 0.0) || !std::isfinite(p)) throw InvalidInput("negative or non-finite probability");
  if (std::abs(stable_sum(probs_) - 1.0) > kNormTolerance)
    throw InvalidInput("probabilities do not sum to 1");
}

ProbTable ProbTable::from_weights(std::vector<int> domain, std::vector<int> radices,
                                  std::vector<double> weights) {
  double z = stable_sum(weights);
  if (!(z > 0.0) || !std::isfinite(z)) throw ArithmeticError("weights do not normalize");
  for (double& w : weights) w /= z;
  return ProbTable(std::move(domain), std::move(radices), std::move(weights));
}

ProbTable ProbTable::from_log_weights(std::vector<int> domain, std::vector<int> radices,
                                      std::span<const double> log_weights) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double lw : log_weights) mx = std::max(mx, lw);
  if (!std::isfinite(mx)) throw ArithmeticError("log-weights are not finite");
  std::vector<double> w(log_weights.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::exp(log_weights[i] - mx);
  return from_weights(std::move(domain), std::move(radices), std::move(w));
}

ProbTable ProbTable::uniform(std::vector<int> domain, std::vector<int> radices) {
  std::size_t n = table_size(radices, std::numeric_limits<unsigned long long>::max());
  return from_weights(std::move(domain), std::move(radices), std::vector<double>(n, 1.0));
}

ProbTable ProbTable::point_mass(std::vector<int> domain, std::vector<int> radices,
                                std::span<const int> digits) {
  std::size_t n = table_size(radices, std::numeric_limits<unsigned long long>::max());
  std::vector<double> p(n, 0.0);
  ProbTable shape;
  shape.domain_ = domain;
  shape.radices_ = radices;
  p[shape.index(digits)] = 1.0;
  return ProbTable(std::move(domain), std::move(radices), std::move(p));
}

int ProbTable::position(int label) const {
  auto it = std::find(domain_.begin(), domain_.end(), label);
  return it == domain_.end() ? -1 : static_cast<int>(it - domain_.begin());
}

std::size_t ProbTable::index(std::span<const int> digits) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < radices_.size(); ++i) {
    if (digits[i] < 0 || digits[i] >= radices_[i]) throw InvalidInput("digit out of range");
    idx = idx * static_cast<std::size_t>(radices_[i]) + static_cast<std::size_t>(digits[i]);
  }
  return idx;
}

void ProbTable::digits(std::size_t index, std::span<int> out) const {
  for (std::size_t i = radices_.size(); i-- > 0;) {
    out[i] = static_cast<int>(index % static_cast<std::size_t>(radices_[i]));
    index /= static_cast<std::size_t>(radices_[i]);
  }
}

std::vector<int> ProbTable::digits(std::size_t index) const {
  std::vector<int> out(radices_.size());
  digits(index, out);
  return out;
}

ProbTable ProbTable::marginal(std::span<const int> labels) const {
  std::vector<int> pos;
  std::vector<int> radices;
  for (int label : labels) {
    int p = position(label);
    if (p < 0) throw InvalidInput("marginal label not in table domain");
    pos.push_back(p);
    radices.push_back(radices_[static_cast<std::size_t>(p)]);
  }
  std::vector<int> domain(labels.begin(), labels.end());
  std::size_t n = table_size(radices, std::numeric_limits<unsigned long long>::max());
  std::vector<double> out(n, 0.0);
  std::vector<int> d(radices_.size());
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    if (probs_[i] == 0.0) continue;
    digits(i, d);
    std::size_t j = 0;
    for (std::size_t k = 0; k < pos.size(); ++k)
      j = j * static_cast<std::size_t>(radices[k]) + static_cast<std::size_t>(d[static_cast<std::size_t>(pos[k])]);
    out[j] += probs_[i];
  }
  return from_weights(std::move(domain), std::move(radices), std::move(out));
}

double total_variation(const ProbTable& a, const ProbTable& b) {
  if (a.domain().size() != b.domain().size()) throw InvalidInput("tables over different domains");
  const ProbTable bb = a.domain() == b.domain() ? b : b.marginal(a.domain());
  if (bb.radices() != a.radices()) throw InvalidInput("tables over different radices");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - bb[i]);
  return 0.5 * s;
}

ProbTable product_measure(const ProbTable& a, const ProbTable& b) {
  std::vector<int> domain = a.domain();
  domain.insert(domain.end(), b.domain().begin(), b.domain().end());
  std::vector<int> radices = a.radices();
  radices.insert(radices.end(), b.radices().begin(), b.radices().end());
  std::vector<double> p;
  p.reserve(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) p.push_back(a[i] * b[j]);
  return ProbTable::from_weights(std::move(domain), std::move(radices), std::move(p));
}

}  // namespace gibbsent
