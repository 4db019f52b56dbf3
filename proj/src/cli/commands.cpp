#include <omp.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "gibbsent/cli.hpp"
#include "gibbsent/sofic.hpp"

namespace gibbsent::cli {

namespace {

constexpr const char* kOutsideRegime = "outside UGM regime, no equality claim";
constexpr const char* kInsideRegime = "unique Gibbs regime";

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::string render() const {
    std::string s;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) s += ',';
        s += csv_field(cells[i]);
      }
      s += '\n';
    };
    line(columns);
    for (const auto& r : rows) line(r);
    return s;
  }
};

struct Outcome {
  Json record;
  Table table;
  int status = kOk;
  std::optional<std::string> file;  // replaces the CSV when set
};

class Context {
 public:
  explicit Context(const RunConfig& c) : config(c), p(c.params) {}

  const RunConfig& config;
  const Params& p;

  std::uint64_t seed() const {
    if (!config.seed) throw ParseError("command '" + config.command + "' is stochastic and needs a master seed");
    return *config.seed;
  }
  std::string seed_text() const { return config.seed ? std::to_string(*config.seed) : ""; }

  const Model& model() const {
    if (!config.model) throw ParseError("command '" + config.command + "' needs a model");
    return *config.model;
  }

  ShiftPotential potential() const {
    const Model& m = model();
    if (m.kind == "ising") return ising_potential(m.beta, m.m);
    if (m.kind == "potential") return potential_from_json(m.document);
    throw ParseError("command '" + config.command + "' needs an ising or potential model");
  }

  MarkovTreeSpec markov() const {
    const Model& m = model();
    if (m.kind == "ising") return ising_spec(m.beta, m.m);
    if (m.kind == "markov") return markov_from_json(m.document);
    throw ParseError("command '" + config.command + "' needs an ising or markov model");
  }

  std::optional<TreeSpecification> tree() const {
    const Model& m = model();
    if (m.kind == "ising") return ising_tree(m.beta, m.m);
    if (m.kind == "markov") return tree_specification(markov_from_json(m.document));
    if (m.kind == "potential") {
      try {
        return tree_from_potential(potential_from_json(m.document));
      } catch (const InvalidInput&) {
        return std::nullopt;
      }
    }
    return std::nullopt;
  }

  // Explicit structure, or the structure induced by a seeded random sofic map of size n.
  GibbsStructure structure() const {
    const Model& m = model();
    if (m.kind == "structure") return structure_from_json(m.document);
    const ShiftPotential phi = potential();
    return induced_structure(random_sofic(phi.m, p.n, seed()), phi);
  }

  double unit() const { return p.units == "bits" ? 1.0 / std::log(2.0) : 1.0; }

  // Verdict label for equality claims.
  std::string regime() const {
    const auto spec = tree();
    if (!spec) return kOutsideRegime;
    try {
      const auto rep = uniqueness_verdict(*spec, SiteOrder::chain(spec->k), p.tol, p.r_max);
      return rep.verdict == Verdict::unique ? kInsideRegime : kOutsideRegime;
    } catch (const InvalidInput&) {
      return kOutsideRegime;
    }
  }

  Json record(const std::string& quantity, double value, double stderr_value, const std::string& method) const {
    Json r;
    r["quantity"] = quantity;
    r["value"] = value;
    r["stderr"] = stderr_value;
    r["method"] = method;
    r["params"] = to_json(config)["params"];
    r["seed"] = config.seed ? Json(*config.seed) : Json(nullptr);
    return r;
  }

  Table scalar_table() const { return {{"quantity", "value", "stderr", "method", "seed", "note"}, {}}; }
  void scalar_row(Table& t, const std::string& q, double v, double se, const std::string& method,
                  const std::string& note = "") const {
    t.rows.push_back({q, format_number(v), format_number(se), method, seed_text(), note});
  }
};

std::vector<std::string> window_names(const FiniteWindow& W) {
  std::vector<std::string> names;
  for (const auto& g : W) names.push_back(g.str());
  return names;
}

std::vector<std::string> index_names(int n) {
  std::vector<std::string> names;
  for (int v = 0; v < n; ++v) names.push_back(std::to_string(v));
  return names;
}

Outcome check_dobrushin(const Context& ctx) {
  Outcome o;
  DobrushinReport rep;
  std::vector<std::string> names;
  if (ctx.model().kind == "structure") {
    const GibbsStructure G = ctx.structure();
    rep = dobrushin(G, ctx.p.budget);
    names = index_names(G.num_vertices());
  } else {
    const ShiftPotential phi = ctx.potential();
    rep = dobrushin_shift(phi, ctx.p.budget);
    names = window_names(local_structure(phi, FiniteWindow::identity()).window);
  }
  o.record = ctx.record("dobrushin_b_star", rep.b_star, 0.0, "exact");
  o.record["condition_holds"] = rep.b_star < 1.0;
  o.record["report"] = to_json(rep, names);
  o.table = ctx.scalar_table();
  for (std::size_t v = 0; v < rep.rows.size(); ++v)
    for (const auto& e : rep.rows[v])
      ctx.scalar_row(o.table, "b[" + (rep.rows.size() == 1 ? std::string("e") : names[v]) + "," + names[static_cast<std::size_t>(e.u)] + "]",
                     e.b, 0.0, "exact");
  ctx.scalar_row(o.table, "b_star", rep.b_star, 0.0, "exact", rep.b_star < 1.0 ? "condition holds" : "condition fails");
  return o;
}

Outcome check_attractive(const Context& ctx) {
  Outcome o;
  GibbsStructure G;
  std::vector<std::string> names;
  if (ctx.model().kind == "structure") {
    G = ctx.structure();
    names = index_names(G.num_vertices());
  } else {
    auto local = local_structure(ctx.potential(), FiniteWindow::identity());
    G = std::move(local.structure);
    names = window_names(local.window);
  }
  std::vector<SiteOrder> orders;
  for (int v = 0; v < G.num_vertices(); ++v) orders.push_back(SiteOrder::chain(G.radix(v)));
  const auto res = is_attractive(G, orders, ctx.p.budget);
  o.record = ctx.record("attractive", res.attractive ? 1.0 : 0.0, 0.0, "exact");
  o.record["attractive"] = res.attractive;
  if (res.witness) {
    auto labels = [&](const Configuration& c) {
      Json j = Json::object();
      for (std::size_t u = 0; u < c.size(); ++u)
        if (c[u] != kUnassigned) j[names[u]] = G.alphabet(static_cast<int>(u)).label(c[u]);
      return j;
    };
    o.record["witness"] = {{"vertex", names[static_cast<std::size_t>(res.witness->vertex)]},
                           {"lower", labels(res.witness->lower)},
                           {"upper", labels(res.witness->upper)}};
  }
  o.table = ctx.scalar_table();
  ctx.scalar_row(o.table, "attractive", res.attractive ? 1.0 : 0.0, 0.0, "exact", res.attractive ? "true" : "false");
  return o;
}

Outcome uniqueness(const Context& ctx) {
  Outcome o;
  const auto spec = ctx.tree();
  if (!spec) throw ParseError("uniqueness needs an ising, markov or nearest-neighbour potential model");
  const auto rep = uniqueness_verdict(*spec, SiteOrder::chain(spec->k), ctx.p.tol, ctx.p.r_max);
  o.record = ctx.record("uniqueness_gap", rep.gap, 0.0, "exact");
  o.record["verdict"] = to_string(rep.verdict);
  o.record["radius"] = rep.radius;
  o.record["limit_gap"] = rep.limit_gap;
  o.record["max_marginal"] = rep.max_marginal;
  o.record["min_marginal"] = rep.min_marginal;
  o.table = ctx.scalar_table();
  ctx.scalar_row(o.table, "uniqueness_gap", rep.gap, 0.0, "exact", to_string(rep.verdict));
  if (rep.verdict == Verdict::undecided) o.status = kUndecided;
  return o;
}

Outcome exact_gibbs_cmd(const Context& ctx) {
  Outcome o;
  const GibbsStructure G = ctx.structure();
  const ProbTable mu = exact_gibbs(G, ctx.p.budget);
  o.record = ctx.record("gibbs_entropy", shannon(mu) * ctx.unit(), 0.0, "exact");
  o.record["configurations"] = mu.size();
  o.table.columns = {"configuration", "probability"};
  for (std::size_t idx = 0; idx < mu.size(); ++idx) {
    const auto d = mu.digits(idx);
    std::string label;
    for (std::size_t v = 0; v < d.size(); ++v) {
      if (v) label += ' ';
      label += G.alphabet(static_cast<int>(v)).label(d[v]);
    }
    o.table.rows.push_back({label, format_number(mu[idx])});
  }
  return o;
}

Outcome sample_glauber(const Context& ctx) {
  Outcome o;
  const GibbsStructure G = ctx.structure();
  GlauberSampler sampler(G);
  Rng rng(derive_seed(ctx.seed(), {1}));
  Configuration omega = sampler.random_configuration(rng);
  o.table.columns = {"sweep", "energy", "seed", "method"};
  double total = 0.0;
  for (int s = 1; s <= ctx.p.sweeps; ++s) {
    sampler.sweep(omega, rng);
    const double e = energy(G, omega);
    total += e;
    o.table.rows.push_back({std::to_string(s), format_number(e), ctx.seed_text(), "glauber"});
  }
  o.record = ctx.record("mean_energy", total / ctx.p.sweeps, 0.0, "glauber");
  Json final_state = Json::array();
  for (int v = 0; v < G.num_vertices(); ++v) final_state.push_back(G.alphabet(v).label(omega[static_cast<std::size_t>(v)]));
  o.record["final"] = final_state;
  return o;
}

Outcome entropy_cmd(const Context& ctx) {
  Outcome o;
  const GibbsStructure G = ctx.structure();
  const EntropyEstimate est = ctx.p.method == "exact" ? gibbs_entropy_exact(G, ctx.p.budget)
                                                      : gibbs_entropy_ti(G, ctx.p.ti, derive_seed(ctx.seed(), {2}));
  const double u = ctx.unit();
  o.record = ctx.record("gibbs_entropy", est.value * u, est.std_error * u, to_string(est.method));
  o.record["units"] = ctx.p.units;
  o.table = ctx.scalar_table();
  ctx.scalar_row(o.table, "gibbs_entropy", est.value * u, est.std_error * u, to_string(est.method), ctx.p.units);
  return o;
}

std::vector<std::uint64_t> sofic_seeds(const Context& ctx) {
  const std::uint64_t master = ctx.seed();
  if (!ctx.p.seeds.empty()) return ctx.p.seeds;
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t i = 0; i < 3; ++i) seeds.push_back(derive_seed(master, {100, i}));
  return seeds;
}

Outcome sofic_entropy(const Context& ctx) {
  Outcome o;
  const ShiftPotential phi = ctx.potential();
  const auto seeds = sofic_seeds(ctx);
  SoficEstimateParams params{ctx.p.ti, ctx.p.exact_budget};
  const auto res = sofic_entropy_estimate(phi, ctx.p.sizes, seeds, params);
  const double u = ctx.unit();
  const std::string regime = ctx.regime();
  o.record = ctx.record("sofic_entropy", res.estimate.value * u, res.estimate.std_error * u, to_string(res.estimate.method));
  o.record["regime"] = regime;
  o.record["units"] = ctx.p.units;
  Json sizes = Json::array();
  o.table.columns = {"n", "sofic_seed", "value", "stderr", "method", "seed", "regime"};
  for (const auto& s : res.sizes) {
    sizes.push_back({{"n", s.n}, {"mean", s.mean * u}, {"spread", s.spread * u}});
    for (std::size_t i = 0; i < s.per_seed.size(); ++i) {
      const auto& e = s.per_seed[i];
      o.table.rows.push_back({std::to_string(s.n), std::to_string(seeds[i]), format_number(e.value * u),
                              format_number(e.std_error * u), to_string(e.method), ctx.seed_text(), regime});
    }
  }
  o.record["sizes"] = sizes;
  return o;
}

Outcome seward_cmd(const Context& ctx) {
  Outcome o;
  const MarkovTreeSpec spec = ctx.markov();
  const FiniteWindow F = set_difference(ball(spec.m(), ctx.p.radius), FiniteWindow::identity());
  const auto est = seward_bound(spec, F, ctx.p.samples, derive_seed(ctx.seed(), {3}));
  const double u = ctx.unit();
  const std::string regime = ctx.regime();
  o.record = ctx.record("seward_bound", est.value * u, est.std_error * u, to_string(est.method));
  o.record["f_markov"] = f_invariant_markov(spec) * u;
  o.record["regime"] = regime;
  o.record["units"] = ctx.p.units;
  o.table = ctx.scalar_table();
  ctx.scalar_row(o.table, "seward_bound", est.value * u, est.std_error * u, to_string(est.method), regime);
  return o;
}

Outcome f_invariant_cmd(const Context& ctx) {
  Outcome o;
  const MarkovTreeSpec spec = ctx.markov();
  const double u = ctx.unit();
  o.table = ctx.scalar_table();
  if (ctx.p.mode == "markov") {
    const double f = f_invariant_markov(spec);
    o.record = ctx.record("f_invariant", f * u, 0.0, "exact");
    ctx.scalar_row(o.table, "f_invariant", f * u, 0.0, "exact", ctx.p.units);
  } else {
    const auto values = f_invariant_ball(spec, ctx.p.radius, ctx.p.budget);
    o.record = ctx.record("f_invariant", values.back() * u, 0.0, "exact");
    Json per = Json::array();
    for (std::size_t r = 0; r < values.size(); ++r) {
      per.push_back(values[r] * u);
      ctx.scalar_row(o.table, "f_ball[r=" + std::to_string(r) + "]", values[r] * u, 0.0, "exact", ctx.p.units);
    }
    o.record["per_radius"] = per;
  }
  o.record["units"] = ctx.p.units;
  return o;
}

Outcome phase_cmd(const Context& ctx) {
  Outcome o;
  const MarkovTreeSpec spec = ctx.markov();
  const auto crit = phase_transition_criterion(spec);
  const double u = ctx.unit();
  o.record = ctx.record("f_invariant", crit.f * u, 0.0, "exact");
  o.record["nonpositive"] = crit.nonpositive;
  o.record["phase_transition_implied"] = crit.nonpositive;
  o.table = ctx.scalar_table();
  ctx.scalar_row(o.table, "f_invariant", crit.f * u, 0.0, "exact", crit.nonpositive ? "nonpositive" : "positive");
  if (ctx.model().kind == "ising" && spec.m() >= 2) {
    const double root = f_ising_root(spec.m());
    o.record["beta_root"] = root;
    ctx.scalar_row(o.table, "beta_root", root, 0.0, "bisection");
  }
  return o;
}

Outcome ising_scan(const Context& ctx) {
  Outcome o;
  const std::uint64_t master = ctx.seed();
  const int m = ctx.p.m;
  const FiniteWindow F = set_difference(ball(m, ctx.p.radius), FiniteWindow::identity());
  const int n = ctx.p.sizes.back();
  const double u = ctx.unit();
  o.table.columns = {"beta", "b_star", "attractive", "uniqueness_verdict", "f_markov", "f_nonpositive", "seward_value",
                     "seward_stderr", "sofic_value", "sofic_stderr", "seed", "method", "regime"};
  Json rows = Json::array();
  const auto betas = ctx.p.beta_grid.values();
  for (std::size_t j = 0; j < betas.size(); ++j) {
    const double beta = betas[j];
    const ShiftPotential phi = ising_potential(beta, m);
    const MarkovTreeSpec spec = ising_spec(beta, m);
    const double b_star = dobrushin_shift(phi, ctx.p.budget).b_star;
    auto local = local_structure(phi, FiniteWindow::identity());
    const std::vector<SiteOrder> orders(local.window.size(), SiteOrder::chain(2));
    const bool attractive = is_attractive(local.structure, orders).attractive;
    std::string verdict = "not_attractive";
    if (attractive) verdict = to_string(uniqueness_verdict(ising_tree(beta, m), SiteOrder::chain(2), ctx.p.tol, ctx.p.r_max).verdict);
    const double f = f_invariant_markov(spec);
    const auto sew = seward_bound(spec, F, ctx.p.samples, derive_seed(master, {j, 1}));
    const int sizes[] = {n};
    const std::uint64_t seeds[] = {derive_seed(master, {j, 2})};
    const auto sof = sofic_entropy_estimate(phi, sizes, seeds, {ctx.p.ti, ctx.p.exact_budget}).estimate;
    const std::string method = "seward=" + to_string(sew.method) + ";sofic=" + to_string(sof.method);
    const std::string regime = verdict == "unique" ? kInsideRegime : kOutsideRegime;
    o.table.rows.push_back({format_number(beta), format_number(b_star), attractive ? "true" : "false", verdict,
                            format_number(f * u), f <= 0.0 ? "true" : "false", format_number(sew.value * u),
                            format_number(sew.std_error * u), format_number(sof.value * u),
                            format_number(sof.std_error * u), std::to_string(master), method, regime});
    rows.push_back({{"beta", beta}, {"verdict", verdict}, {"f_markov", f * u}, {"seward", sew.value * u}, {"sofic", sof.value * u}});
  }
  o.record = ctx.record("ising_scan", static_cast<double>(betas.size()), 0.0, "composite");
  o.record["rows"] = rows;
  return o;
}

Outcome sofic_gen(const Context& ctx) {
  Outcome o;
  const int m = ctx.config.model ? ctx.model().m : ctx.p.m;
  const SoficMap sigma = random_sofic(m, ctx.p.n, ctx.seed());
  o.record = ctx.record("sofic_map", ctx.p.n, 0.0, "random_permutations");
  o.record["good_fraction_ball2"] = good_fraction(sigma, ball(m, 2));
  if (ctx.config.out.empty())
    o.record["map"] = to_json(sigma);
  else
    o.file = to_json(sigma).dump() + "\n";
  return o;
}

Outcome dispatch(const Context& ctx) {
  const std::string& c = ctx.config.command;
  if (c == "check-dobrushin") return check_dobrushin(ctx);
  if (c == "check-attractive") return check_attractive(ctx);
  if (c == "uniqueness") return uniqueness(ctx);
  if (c == "exact-gibbs") return exact_gibbs_cmd(ctx);
  if (c == "sample-glauber") return sample_glauber(ctx);
  if (c == "entropy") return entropy_cmd(ctx);
  if (c == "sofic-entropy") return sofic_entropy(ctx);
  if (c == "seward-bound") return seward_cmd(ctx);
  if (c == "f-invariant") return f_invariant_cmd(ctx);
  if (c == "phase-criterion") return phase_cmd(ctx);
  if (c == "ising-scan") return ising_scan(ctx);
  if (c == "sofic-gen") return sofic_gen(ctx);
  throw ParseError("unknown command '" + c + "'");
}

}  // namespace

std::string format_number(double x) {
  if (x == 0.0) return "0";  // folds -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp);
    f << content;
    if (!f.flush()) throw std::runtime_error("cannot write " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (config.params.threads > 0) omp_set_num_threads(config.params.threads);
  try {
    if (config.command == "selftest") return selftest(out);
    const Context ctx(config);
    Outcome o = dispatch(ctx);
    o.record["status"] = o.status;
    out << o.record.dump(2) << '\n';
    if (!config.out.empty()) {
      write_atomic(config.out, o.file ? *o.file : o.table.render());
      write_atomic(config.out + ".config.json", to_json(config).dump(2) + "\n");
    }
    if (o.status == kUndecided) err << "verdict undecided within r_max = " << config.params.r_max << '\n';
    return o.status;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  } catch (const SizeError& e) {
    err << "size error: " << e.what() << '\n';
    return kSizeError;
  } catch (const InvalidInput& e) {
    err << "invalid input: " << e.what() << '\n';
    return kParseError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace gibbsent::cli
