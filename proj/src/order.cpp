#include "gibbsent/order.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "gibbsent/kernels.hpp"

namespace gibbsent {

SiteOrder::SiteOrder(std::vector<std::vector<bool>> relation) : rel_(std::move(relation)) {
  const std::size_t k = rel_.size();
  for (const auto& row : rel_)
    if (row.size() != k) throw InvalidInput("order relation must be square");
  for (std::size_t a = 0; a < k; ++a) {
    if (!rel_[a][a]) throw InvalidInput("order is not reflexive");
    for (std::size_t b = 0; b < k; ++b) {
      if (a != b && rel_[a][b] && rel_[b][a]) throw InvalidInput("order is not antisymmetric");
      for (std::size_t c = 0; c < k; ++c)
        if (rel_[a][b] && rel_[b][c] && !rel_[a][c]) throw InvalidInput("order is not transitive");
    }
  }
  for (std::size_t a = 0; a < k; ++a) {
    bool is_top = true, is_bottom = true;
    for (std::size_t b = 0; b < k; ++b) {
      is_top = is_top && rel_[b][a];
      is_bottom = is_bottom && rel_[a][b];
    }
    if (is_top) top_ = static_cast<int>(a);
    if (is_bottom) bottom_ = static_cast<int>(a);
  }
}

SiteOrder SiteOrder::chain(int k) {
  std::vector<std::vector<bool>> rel(static_cast<std::size_t>(k), std::vector<bool>(static_cast<std::size_t>(k)));
  for (int a = 0; a < k; ++a)
    for (int b = a; b < k; ++b) rel[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = true;
  return SiteOrder(std::move(rel));
}

SiteOrder SiteOrder::discrete(int k) {
  std::vector<std::vector<bool>> rel(static_cast<std::size_t>(k), std::vector<bool>(static_cast<std::size_t>(k)));
  for (int a = 0; a < k; ++a) rel[static_cast<std::size_t>(a)][static_cast<std::size_t>(a)] = true;
  return SiteOrder(std::move(rel));
}

bool fkg_leq(std::span<const SiteOrder> orders, std::span<const int> x, std::span<const int> y) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!orders[i].leq(x[i], y[i])) return false;
  return true;
}

namespace {

// Dinic max-flow on real capacities.
class MaxFlow {
 public:
  explicit MaxFlow(int nodes) : graph_(static_cast<std::size_t>(nodes)) {}

  void add_edge(int from, int to, double cap) {
    graph_[static_cast<std::size_t>(from)].push_back({to, cap, static_cast<int>(graph_[static_cast<std::size_t>(to)].size())});
    graph_[static_cast<std::size_t>(to)].push_back({from, 0.0, static_cast<int>(graph_[static_cast<std::size_t>(from)].size()) - 1});
  }

  double run(int s, int t) {
    double flow = 0.0;
    while (bfs(s, t)) {
      iter_.assign(graph_.size(), 0);
      for (;;) {
        double f = dfs(s, t, std::numeric_limits<double>::infinity());
        if (f <= kEps) break;
        flow += f;
      }
    }
    return flow;
  }

 private:
  static constexpr double kEps = 1e-15;
  struct Edge {
    int to;
    double cap;
    int rev;
  };

  bool bfs(int s, int t) {
    level_.assign(graph_.size(), -1);
    std::queue<int> q;
    level_[static_cast<std::size_t>(s)] = 0;
    q.push(s);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (const auto& e : graph_[static_cast<std::size_t>(v)]) {
        if (e.cap > kEps && level_[static_cast<std::size_t>(e.to)] < 0) {
          level_[static_cast<std::size_t>(e.to)] = level_[static_cast<std::size_t>(v)] + 1;
          q.push(e.to);
        }
      }
    }
    return level_[static_cast<std::size_t>(t)] >= 0;
  }

  double dfs(int v, int t, double f) {
    if (v == t) return f;
    auto& edges = graph_[static_cast<std::size_t>(v)];
    for (int& i = iter_[static_cast<std::size_t>(v)]; i < static_cast<int>(edges.size()); ++i) {
      Edge& e = edges[static_cast<std::size_t>(i)];
      if (e.cap > kEps && level_[static_cast<std::size_t>(v)] < level_[static_cast<std::size_t>(e.to)]) {
        double d = dfs(e.to, t, std::min(f, e.cap));
        if (d > kEps) {
          e.cap -= d;
          graph_[static_cast<std::size_t>(e.to)][static_cast<std::size_t>(e.rev)].cap += d;
          return d;
        }
      }
    }
    return 0.0;
  }

  std::vector<std::vector<Edge>> graph_;
  std::vector<int> level_;
  std::vector<int> iter_;
};

}  // namespace

bool dominates(std::span<const SiteOrder> orders, const ProbTable& mu1, const ProbTable& mu2) {
  if (mu1.domain() != mu2.domain() || mu1.radices() != mu2.radices())
    throw InvalidInput("dominance needs tables over the same domain");
  if (orders.size() != mu1.domain().size()) throw InvalidInput("one order per domain position required");
  for (std::size_t i = 0; i < orders.size(); ++i)
    if (orders[i].size() != mu1.radices()[i]) throw InvalidInput("order size differs from radix");

  std::vector<std::size_t> left, right;
  for (std::size_t i = 0; i < mu1.size(); ++i)
    if (mu1[i] > 0.0) left.push_back(i);
  for (std::size_t j = 0; j < mu2.size(); ++j)
    if (mu2[j] > 0.0) right.push_back(j);
  const int L = static_cast<int>(left.size()), R = static_cast<int>(right.size());
  const int source = L + R, sink = L + R + 1;
  MaxFlow flow(L + R + 2);
  std::vector<std::vector<int>> ldig, rdig;
  for (auto i : left) ldig.push_back(mu1.digits(i));
  for (auto j : right) rdig.push_back(mu2.digits(j));
  for (int a = 0; a < L; ++a) flow.add_edge(source, a, mu1[left[static_cast<std::size_t>(a)]]);
  for (int b = 0; b < R; ++b) flow.add_edge(L + b, sink, mu2[right[static_cast<std::size_t>(b)]]);
  for (int a = 0; a < L; ++a)
    for (int b = 0; b < R; ++b)
      if (fkg_leq(orders, ldig[static_cast<std::size_t>(a)], rdig[static_cast<std::size_t>(b)])) flow.add_edge(a, L + b, 2.0);
  return flow.run(source, sink) >= 1.0 - 1e-12;
}

AttractiveResult is_attractive(const GibbsStructure& G, std::span<const SiteOrder> orders,
                               unsigned long long budget) {
  if (orders.size() != static_cast<std::size_t>(G.num_vertices()))
    throw InvalidInput("one order per vertex required");
  for (int v = 0; v < G.num_vertices(); ++v) {
    const int single[] = {v};
    const std::vector<int> nb = G.boundary(single);
    std::vector<int> radices;
    std::vector<SiteOrder> nb_orders;
    for (int u : nb) {
      radices.push_back(G.radix(u));
      nb_orders.push_back(orders[static_cast<std::size_t>(u)]);
    }
    const std::size_t count = table_size(radices, budget);
    if (count > 0 && count > budget / count) throw SizeError("boundary pairs exceed the enumeration budget");
    ProbTable shape = ProbTable::uniform(nb, radices);

    std::vector<ProbTable> kern;
    std::vector<std::vector<int>> cfg;
    Configuration omega(static_cast<std::size_t>(G.num_vertices()), kUnassigned);
    for (std::size_t c = 0; c < count; ++c) {
      cfg.push_back(shape.digits(c));
      for (std::size_t i = 0; i < nb.size(); ++i) omega[static_cast<std::size_t>(nb[i])] = cfg.back()[i];
      kern.push_back(local_kernel(G, single, omega));
    }
    const SiteOrder site[] = {orders[static_cast<std::size_t>(v)]};
    for (std::size_t a = 0; a < count; ++a) {
      for (std::size_t b = 0; b < count; ++b) {
        if (a == b || !fkg_leq(nb_orders, cfg[a], cfg[b])) continue;
        if (!dominates(site, kern[a], kern[b])) {
          AttractiveWitness w;
          w.vertex = v;
          w.lower.assign(static_cast<std::size_t>(G.num_vertices()), kUnassigned);
          w.upper = w.lower;
          for (std::size_t i = 0; i < nb.size(); ++i) {
            w.lower[static_cast<std::size_t>(nb[i])] = cfg[a][i];
            w.upper[static_cast<std::size_t>(nb[i])] = cfg[b][i];
          }
          return {false, std::move(w)};
        }
      }
    }
  }
  return {};
}

double DobrushinReport::b(int v, int u) const {
  for (const auto& e : rows[static_cast<std::size_t>(v)])
    if (e.u == u) return e.b;
  return 0.0;
}

DobrushinReport dobrushin(const GibbsStructure& G, unsigned long long budget) {
  DobrushinReport report;
  report.rows = kernels::dobrushin_rows(G, budget);
  for (const auto& row : report.rows) {
    double s = 0.0;
    for (const auto& e : row) s += e.b;
    report.b_row.push_back(s);
    report.b_star = std::max(report.b_star, s);
  }
  return report;
}

DobrushinReport dobrushin_shift(const ShiftPotential& phi, unsigned long long budget) {
  const WindowStructure local = local_structure(phi, FiniteWindow::identity());
  const int e = local.window.index_of(GroupWord{});
  DobrushinReport report;
  report.rows.push_back(kernels::dobrushin_row(local.structure, e, budget));
  double s = 0.0;
  for (const auto& entry : report.rows.front()) s += entry.b;
  report.b_row.push_back(s);
  report.b_star = s;
  return report;
}

void TreeSpecification::validate() const {
  if (m < 1 || k < 1) throw InvalidInput("tree specification needs m >= 1 and k >= 1");
  if (site_weight.size() != static_cast<std::size_t>(k)) throw InvalidInput("site weight has wrong size");
  if (edge_weight.size() != static_cast<std::size_t>(m)) throw InvalidInput("need one edge matrix per generator");
  for (double w : site_weight)
    if (!(w > 0.0) || !std::isfinite(w)) throw InvalidInput("site weights must be positive and finite");
  for (const auto& J : edge_weight) {
    if (J.size() != static_cast<std::size_t>(k * k)) throw InvalidInput("edge matrix has wrong size");
    for (double w : J)
      if (!(w > 0.0) || !std::isfinite(w)) throw InvalidInput("edge weights must be positive and finite");
  }
}

TreeSpecification ising_tree(double beta, int m) {
  TreeSpecification spec;
  spec.m = m;
  spec.k = 2;
  spec.site_weight = {1.0, 1.0};
  const std::vector<double> J = {std::exp(beta), std::exp(-beta), std::exp(-beta), std::exp(beta)};
  spec.edge_weight.assign(static_cast<std::size_t>(m), J);
  spec.validate();
  return spec;
}

TreeSpecification tree_from_potential(const ShiftPotential& phi) {
  phi.validate();
  TreeSpecification spec;
  spec.m = phi.m;
  spec.k = phi.alphabet.size();
  const auto k = static_cast<std::size_t>(spec.k);
  spec.site_weight.assign(k, 1.0);
  spec.edge_weight.assign(static_cast<std::size_t>(phi.m), std::vector<double>(k * k, 1.0));
  const FiniteWindow site = FiniteWindow::identity();
  const auto pairs = nearest_neighbour_supports(phi.m);
  for (const auto& term : phi.terms) {
    if (term.window == site) {
      for (std::size_t a = 0; a < k; ++a) spec.site_weight[a] *= std::exp(-term.table[a]);
      continue;
    }
    auto it = std::find(pairs.begin(), pairs.end(), term.window);
    if (it == pairs.end()) throw InvalidInput("tree recursion needs windows {e} or {e, s_i}");
    auto& J = spec.edge_weight[static_cast<std::size_t>(it - pairs.begin())];
    for (std::size_t c = 0; c < k * k; ++c) J[c] *= std::exp(-term.table[c]);
  }
  spec.validate();
  return spec;
}

WindowStructure star_structure(const TreeSpecification& spec) {
  spec.validate();
  const FiniteWindow star = ball(spec.m, 1);
  std::vector<EnergyTerm> terms;
  for (std::size_t v = 0; v < star.size(); ++v) {
    EnergyTerm t{{static_cast<int>(v)}, {}};
    for (double w : spec.site_weight) t.table.push_back(-std::log(w));
    terms.push_back(std::move(t));
  }
  const int e = star.index_of(GroupWord{});
  for (int i = 1; i <= spec.m; ++i) {
    const auto& J = spec.edge_weight[static_cast<std::size_t>(i - 1)];
    std::vector<double> table;
    for (double w : J) table.push_back(-std::log(w));
    // Edge {e, s_i}: coordinates (x_e, x_{s_i}).
    terms.push_back({{e, star.index_of(GroupWord::generator(i))}, table});
    // Edge {s_i^-1, e}: coordinates (x_{s_i^-1}, x_e).
    terms.push_back({{star.index_of(GroupWord::generator(i, -1)), e}, table});
  }
  std::vector<Alphabet> alphabets(star.size(), Alphabet::indexed(spec.k));
  return {star, GibbsStructure(std::move(alphabets), std::move(terms))};
}

namespace {

// Sum_b E_t(a, b) msg(b), E_t the weight between parent value a and child
// value b when the child is t * parent.
std::vector<double> pass_edge(const TreeSpecification& spec, int t, const std::vector<double>& msg) {
  const auto k = static_cast<std::size_t>(spec.k);
  const auto& J = spec.edge_weight[static_cast<std::size_t>(std::abs(t) - 1)];
  std::vector<double> out(k, 0.0);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) out[a] += (t > 0 ? J[a * k + b] : J[b * k + a]) * msg[b];
  return out;
}

void normalize(std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  if (!(s > 0.0) || !std::isfinite(s)) throw ArithmeticError("boundary recursion message vanished");
  for (double& x : v) x /= s;
}

double tv(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return 0.5 * s;
}

}  // namespace

std::vector<std::vector<double>> tree_boundary_sequence(const TreeSpecification& spec,
                                                        const SiteOrder& order, int r_max,
                                                        Boundary boundary) {
  spec.validate();
  if (order.size() != spec.k) throw InvalidInput("order size differs from the alphabet");
  const std::optional<int> pin = boundary == Boundary::max ? order.top() : order.bottom();
  if (!pin) throw InvalidInput("boundary recursion needs a unique maximal and minimal symbol");
  const auto k = static_cast<std::size_t>(spec.k);
  std::vector<int> letters;
  for (int i = 1; i <= spec.m; ++i) {
    letters.push_back(i);
    letters.push_back(-i);
  }
  std::vector<double> delta(k, 0.0);
  delta[static_cast<std::size_t>(*pin)] = 1.0;

  std::vector<std::vector<double>> out{delta};
  // msg[t]: law of a node entered by letter t, j levels above the pinned sphere.
  std::vector<std::vector<double>> msg(letters.size(), delta);
  for (int r = 1; r <= r_max; ++r) {
    std::vector<double> root = spec.site_weight;
    for (std::size_t c = 0; c < letters.size(); ++c) {
      auto in = pass_edge(spec, letters[c], msg[c]);
      for (std::size_t a = 0; a < k; ++a) root[a] *= in[a];
    }
    normalize(root);
    out.push_back(std::move(root));

    std::vector<std::vector<double>> next(letters.size());
    for (std::size_t p = 0; p < letters.size(); ++p) {
      std::vector<double> node = spec.site_weight;
      for (std::size_t c = 0; c < letters.size(); ++c) {
        if (letters[c] == -letters[p]) continue;
        auto in = pass_edge(spec, letters[c], msg[c]);
        for (std::size_t a = 0; a < k; ++a) node[a] *= in[a];
      }
      normalize(node);
      next[p] = std::move(node);
    }
    msg = std::move(next);
  }
  return out;
}

std::vector<double> tree_boundary_recursion(const TreeSpecification& spec, const SiteOrder& order,
                                            int r, Boundary boundary) {
  if (r < 0) throw InvalidInput("radius must be >= 0");
  return tree_boundary_sequence(spec, order, r, boundary).back();
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::unique:
      return "unique";
    case Verdict::non_unique:
      return "non_unique";
    case Verdict::undecided:
      return "undecided";
  }
  return "undecided";
}

UniquenessReport uniqueness_verdict(const TreeSpecification& spec, const SiteOrder& order,
                                    double tol, int r_max) {
  const WindowStructure star = star_structure(spec);
  const std::vector<SiteOrder> orders(star.window.size(), order);
  if (!is_attractive(star.structure, orders).attractive)
    throw InvalidInput("max/min uniqueness criterion needs an attractive specification");

  const auto hi = tree_boundary_sequence(spec, order, r_max, Boundary::max);
  const auto lo = tree_boundary_sequence(spec, order, r_max, Boundary::min);
  UniquenessReport report;
  std::vector<double> gaps;
  for (int r = 0; r <= r_max; ++r) gaps.push_back(tv(hi[static_cast<std::size_t>(r)], lo[static_cast<std::size_t>(r)]));

  for (int r = 1; r <= r_max; ++r) {
    const auto ur = static_cast<std::size_t>(r);
    report.radius = r;
    report.gap = gaps[ur];
    report.limit_gap = gaps[ur];
    report.max_marginal = hi[ur];
    report.min_marginal = lo[ur];
    if (gaps[ur] <= tol) {
      report.verdict = Verdict::unique;
      report.limit_gap = 0.0;
      return report;
    }
    if (r < 3) continue;
    const double change = std::max(tv(hi[ur], hi[ur - 1]), tv(lo[ur], lo[ur - 1]));
    if (change >= tol) continue;
    // Geometric (Aitken) extrapolation of the gap sequence; a gap that is
    // still decaying toward zero must not be read as a stable separation.
    const double d1 = gaps[ur - 1] - gaps[ur];
    const double d0 = gaps[ur - 2] - gaps[ur - 1];
    double limit = gaps[ur];
    if (d1 > 0.0) {
      if (d0 <= 0.0) continue;
      const double lambda = d1 / d0;
      if (lambda >= 1.0) continue;
      limit = gaps[ur] - d1 * lambda / (1.0 - lambda);
    }
    report.limit_gap = limit;
    if (limit > 10.0 * tol) {
      report.verdict = Verdict::non_unique;
      return report;
    }
  }
  report.verdict = Verdict::undecided;
  return report;
}

}  // namespace gibbsent
