#include "gibbsent/markov_tree.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace gibbsent {

MarkovTreeSpec::MarkovTreeSpec(Alphabet alphabet, std::vector<double> rho,
                               std::vector<std::vector<double>> transitions)
    : alphabet_(std::move(alphabet)), rho_(std::move(rho)), transitions_(std::move(transitions)) {
  const auto k = static_cast<std::size_t>(alphabet_.size());
  if (transitions_.empty()) throw InvalidInput("Markov tree needs at least one generator");
  if (rho_.size() != k) throw InvalidInput("root law has wrong size");
  double total = 0.0;
  for (double p : rho_) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw InvalidInput("root law must be nonnegative");
    total += p;
  }
  if (std::abs(total - 1.0) > kTolerance) throw InvalidInput("root law is not normalized");
  for (std::size_t i = 0; i < transitions_.size(); ++i) {
    const auto& P = transitions_[i];
    const std::string which = "transition " + std::to_string(i + 1);
    if (P.size() != k * k) throw InvalidInput(which + " has wrong size");
    for (std::size_t a = 0; a < k; ++a) {
      double row = 0.0;
      for (std::size_t b = 0; b < k; ++b) {
        if (!(P[a * k + b] >= 0.0)) throw InvalidInput(which + " has a negative entry");
        row += P[a * k + b];
      }
      if (std::abs(row - 1.0) > kTolerance) throw InvalidInput(which + " is not row-stochastic");
    }
    for (std::size_t b = 0; b < k; ++b) {
      double col = 0.0;
      for (std::size_t a = 0; a < k; ++a) col += rho_[a] * P[a * k + b];
      if (std::abs(col - rho_[b]) > kTolerance) throw InvalidInput(which + " does not preserve the root law");
    }
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b)
        if (std::abs(rho_[a] * P[a * k + b] - rho_[b] * P[b * k + a]) > kTolerance)
          throw InvalidInput(which + " is not reversible with respect to the root law");
  }
}

double MarkovTreeSpec::step(Letter l, int from, int to) const {
  const auto k = static_cast<std::size_t>(this->k());
  const auto& P = transition(std::abs(l));
  const auto a = static_cast<std::size_t>(from), b = static_cast<std::size_t>(to);
  if (l > 0) return P[a * k + b];
  // X_{s^-1 g} given X_g: time reversal of P.
  if (rho_[a] == 0.0) return P[a * k + b];
  return rho_[b] * P[b * k + a] / rho_[a];
}

MarkovTreeSpec ising_spec(double beta, int m) {
  if (m < 1) throw InvalidInput("rank must be >= 1");
  const double e2b = std::exp(2.0 * beta);
  const double stay = e2b / (1.0 + e2b);
  const double flip = 1.0 / (1.0 + e2b);
  std::vector<std::vector<double>> P(static_cast<std::size_t>(m), {stay, flip, flip, stay});
  return MarkovTreeSpec(Alphabet::ising(), {0.5, 0.5}, std::move(P));
}

namespace {

GroupWord parent_of(const GroupWord& w) {
  auto l = w.letters();
  return GroupWord::from_letters(l.subspan(1));
}

// Nodes of the Steiner tree of W and e (all suffixes), children by node.
struct SteinerTree {
  FiniteWindow nodes;
  std::vector<std::vector<int>> children;
};

SteinerTree steiner_tree(const FiniteWindow& W) {
  std::vector<GroupWord> all{GroupWord{}};
  for (const auto& w : W) {
    GroupWord x = w;
    while (!x.is_identity()) {
      all.push_back(x);
      x = parent_of(x);
    }
  }
  SteinerTree tree{FiniteWindow(std::move(all)), {}};
  tree.children.resize(tree.nodes.size());
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    if (tree.nodes[i].is_identity()) continue;
    tree.children[static_cast<std::size_t>(tree.nodes.index_of(parent_of(tree.nodes[i])))].push_back(static_cast<int>(i));
  }
  return tree;
}

// Table over [x_node][vars...] with vars = positions in W.
struct SubtreeTable {
  std::vector<int> vars;
  std::vector<double> data;
};

SubtreeTable eliminate(const MarkovTreeSpec& spec, const SteinerTree& tree, const FiniteWindow& W,
                       int node, unsigned long long budget) {
  const auto k = static_cast<std::size_t>(spec.k());
  SubtreeTable acc{{}, std::vector<double>(k, 1.0)};
  for (int c : tree.children[static_cast<std::size_t>(node)]) {
    SubtreeTable child = eliminate(spec, tree, W, c, budget);
    const Letter t = tree.nodes[static_cast<std::size_t>(c)].first();
    const std::size_t cw = child.data.size() / k;
    // Pass through the edge: M[x_u][vars_c] = sum_{x_c} K_t(x_u, x_c) child[x_c][vars_c].
    std::vector<double> passed(k * cw, 0.0);
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) {
        const double kab = spec.step(t, static_cast<int>(a), static_cast<int>(b));
        if (kab == 0.0) continue;
        for (std::size_t j = 0; j < cw; ++j) passed[a * cw + j] += kab * child.data[b * cw + j];
      }
    const std::size_t aw = acc.data.size() / k;
    if (static_cast<unsigned long long>(aw) * cw * k > budget)
      throw SizeError("window marginal exceeds the enumeration budget");
    std::vector<double> merged(k * aw * cw);
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t i = 0; i < aw; ++i)
        for (std::size_t j = 0; j < cw; ++j)
          merged[(a * aw + i) * cw + j] = acc.data[a * aw + i] * passed[a * cw + j];
    acc.data = std::move(merged);
    acc.vars.insert(acc.vars.end(), child.vars.begin(), child.vars.end());
  }
  const int pos = W.index_of(tree.nodes[static_cast<std::size_t>(node)]);
  if (pos >= 0) {
    const std::size_t aw = acc.data.size() / k;
    if (static_cast<unsigned long long>(aw) * k * k > budget)
      throw SizeError("window marginal exceeds the enumeration budget");
    std::vector<double> out(k * aw * k, 0.0);
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t i = 0; i < aw; ++i) out[(a * aw + i) * k + a] = acc.data[a * aw + i];
    acc.data = std::move(out);
    acc.vars.push_back(pos);
  }
  return acc;
}

}  // namespace

ProbTable marginal(const MarkovTreeSpec& spec, const FiniteWindow& W, unsigned long long budget) {
  for (const auto& w : W)
    if (w.rank_used() > spec.m()) throw InvalidInput("window uses a generator above the rank");
  const auto k = static_cast<std::size_t>(spec.k());
  std::vector<int> radices(W.size(), spec.k());
  table_size(radices, budget);
  const SteinerTree tree = steiner_tree(W);
  const int root = tree.nodes.index_of(GroupWord{});
  SubtreeTable t = eliminate(spec, tree, W, root, budget);
  const std::size_t width = t.data.size() / k;
  std::vector<double> joint(width, 0.0);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t j = 0; j < width; ++j) joint[j] += spec.rho()[a] * t.data[a * width + j];

  // Reorder variables from elimination order to canonical window order.
  std::vector<int> domain(W.size());
  for (std::size_t i = 0; i < W.size(); ++i) domain[i] = static_cast<int>(i);
  ProbTable unordered = ProbTable::from_weights(t.vars, radices, std::move(joint));
  return unordered.marginal(domain);
}

ConsistencyReport gibbs_consistency(const MarkovTreeSpec& spec, const ShiftPotential& phi,
                                    double tol) {
  if (phi.alphabet.size() != spec.k()) throw InvalidInput("potential and tree measure alphabets differ");
  const FiniteWindow core = FiniteWindow::identity();
  const WindowStructure local = local_structure(phi, core);
  const ProbTable mu = marginal(spec, local.window);
  const int e = local.window.index_of(GroupWord{});

  std::vector<int> others;
  for (std::size_t i = 0; i < local.window.size(); ++i)
    if (static_cast<int>(i) != e) others.push_back(static_cast<int>(i));
  std::vector<int> order = others;
  order.push_back(e);
  const ProbTable joint = mu.marginal(order);  // last digit is X_e
  const auto k = static_cast<std::size_t>(spec.k());

  ConsistencyReport report{true, 0.0};
  Configuration omega(local.window.size(), kUnassigned);
  std::vector<int> dig(order.size());
  const int single[] = {e};
  for (std::size_t base = 0; base < joint.size(); base += k) {
    double mass = 0.0;
    for (std::size_t a = 0; a < k; ++a) mass += joint[base + a];
    if (mass <= 0.0) continue;
    joint.digits(base, dig);
    for (std::size_t i = 0; i < others.size(); ++i) omega[static_cast<std::size_t>(others[i])] = dig[i];
    const ProbTable kern = local_kernel(local.structure, single, omega);
    for (std::size_t a = 0; a < k; ++a)
      report.max_deviation = std::max(report.max_deviation, std::abs(joint[base + a] / mass - kern[a]));
  }
  report.consistent = report.max_deviation <= tol;
  return report;
}

std::vector<int> sample_window(const MarkovTreeSpec& spec, const FiniteWindow& W, Rng& rng) {
  const SteinerTree tree = steiner_tree(W);
  const int k = spec.k();
  std::vector<int> value(tree.nodes.size(), 0);
  std::vector<double> w(static_cast<std::size_t>(k));
  // Shortlex order lists every parent before its children.
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    const GroupWord& node = tree.nodes[i];
    if (node.is_identity()) {
      value[i] = rng.categorical(spec.rho().data(), k);
      continue;
    }
    const int parent = value[static_cast<std::size_t>(tree.nodes.index_of(parent_of(node)))];
    for (int b = 0; b < k; ++b) w[static_cast<std::size_t>(b)] = spec.step(node.first(), parent, b);
    value[i] = rng.categorical(w.data(), k);
  }
  std::vector<int> out;
  out.reserve(W.size());
  for (const auto& g : W) out.push_back(value[static_cast<std::size_t>(tree.nodes.index_of(g))]);
  return out;
}

namespace {

using Atom = std::vector<double>;  // P(observation class | X_node = a), per a

// Sums atoms whose likelihood vectors are proportional.
std::vector<Atom> merge_atoms(std::vector<Atom> atoms) {
  std::map<std::vector<long long>, std::size_t> slot;
  std::vector<Atom> out;
  for (auto& atom : atoms) {
    double s = 0.0;
    for (double x : atom) s += x;
    if (s <= 0.0) continue;
    std::vector<long long> key;
    key.reserve(atom.size());
    for (double x : atom) key.push_back(std::llround(x / s * 1e11));
    auto [it, fresh] = slot.try_emplace(std::move(key), out.size());
    if (fresh) {
      out.push_back(std::move(atom));
    } else {
      for (std::size_t a = 0; a < atom.size(); ++a) out[it->second][a] += atom[a];
    }
  }
  return out;
}

std::vector<Atom> observation_classes(const MarkovTreeSpec& spec, const SteinerTree& tree,
                                      const FiniteWindow& C, int node) {
  const auto k = static_cast<std::size_t>(spec.k());
  if (C.contains(tree.nodes[static_cast<std::size_t>(node)])) {
    // Observed: descendants are screened off.
    std::vector<Atom> atoms;
    for (std::size_t x = 0; x < k; ++x) {
      Atom a(k, 0.0);
      a[x] = 1.0;
      atoms.push_back(std::move(a));
    }
    return atoms;
  }
  std::vector<Atom> acc{Atom(k, 1.0)};
  for (int c : tree.children[static_cast<std::size_t>(node)]) {
    const Letter t = tree.nodes[static_cast<std::size_t>(c)].first();
    std::vector<Atom> child = observation_classes(spec, tree, C, c);
    std::vector<Atom> passed;
    for (const auto& atom : child) {
      Atom p(k, 0.0);
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) p[a] += spec.step(t, static_cast<int>(a), static_cast<int>(b)) * atom[b];
      passed.push_back(std::move(p));
    }
    passed = merge_atoms(std::move(passed));
    std::vector<Atom> combined;
    combined.reserve(acc.size() * passed.size());
    for (const auto& x : acc)
      for (const auto& y : passed) {
        Atom z(k);
        for (std::size_t a = 0; a < k; ++a) z[a] = x[a] * y[a];
        combined.push_back(std::move(z));
      }
    acc = merge_atoms(std::move(combined));
  }
  return acc;
}

}  // namespace

double root_conditional_entropy(const MarkovTreeSpec& spec, const FiniteWindow& C) {
  if (C.contains(GroupWord{})) return 0.0;
  for (const auto& w : C)
    if (w.rank_used() > spec.m()) throw InvalidInput("window uses a generator above the rank");
  const SteinerTree tree = steiner_tree(C);
  const std::vector<Atom> atoms = observation_classes(spec, tree, C, tree.nodes.index_of(GroupWord{}));
  const auto k = static_cast<std::size_t>(spec.k());
  double h = 0.0;
  for (const auto& atom : atoms) {
    double mass = 0.0;
    for (std::size_t a = 0; a < k; ++a) mass += spec.rho()[a] * atom[a];
    if (mass <= 0.0) continue;
    double hc = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
      const double p = spec.rho()[a] * atom[a] / mass;
      if (p > 0.0) hc -= p * std::log(p);
    }
    h += mass * hc;
  }
  return h;
}

TreeSpecification tree_specification(const MarkovTreeSpec& spec) {
  TreeSpecification out;
  out.m = spec.m();
  out.k = spec.k();
  const auto k = static_cast<std::size_t>(spec.k());
  for (double p : spec.rho()) {
    if (p <= 0.0) throw InvalidInput("tree specification needs a root law with full support");
    out.site_weight.push_back(std::pow(p, 1.0 - 2.0 * spec.m()));
  }
  for (const auto& P : spec.transitions()) {
    std::vector<double> J(k * k);
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) J[a * k + b] = spec.rho()[a] * P[a * k + b];
    out.edge_weight.push_back(std::move(J));
  }
  out.validate();
  return out;
}

}  // namespace gibbsent
