// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Usage: acceptance <path to gibbsent-cli>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "gibbsent/entropy.hpp"
#include "gibbsent/sofic.hpp"

using namespace gibbsent;

namespace {

struct Verdict_ {
  bool pass;
  std::string detail;
};

std::string fmt(double x, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

// Hand-rolled TV over identical domains.
double tv(const ProbTable& a, const ProbTable& b) {
  if (a.domain() != b.domain() || a.radices() != b.radices()) return 1.0;
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return 0.5 * s;
}

GibbsStructure random_structure(Rng& rng, int n, int terms) {
  std::vector<Alphabet> alph;
  for (int v = 0; v < n; ++v) alph.push_back(Alphabet::indexed(v < 2 ? 3 : 2));
  std::vector<EnergyTerm> list;
  for (int t = 0; t < terms; ++t) {
    std::vector<int> verts(static_cast<std::size_t>(n));
    std::iota(verts.begin(), verts.end(), 0);
    rng.shuffle(verts);
    verts.resize(1 + rng.below(3));
    std::size_t size = 1;
    for (int v : verts) size *= static_cast<std::size_t>(alph[static_cast<std::size_t>(v)].size());
    std::vector<double> table(size);
    for (double& x : table) x = 3.0 * rng.uniform() - 1.5;
    list.push_back({verts, table});
  }
  return GibbsStructure(alph, list);
}

std::vector<std::vector<int>> subsets(int n) {
  std::vector<std::vector<int>> out;
  for (int mask = 1; mask < (1 << n); ++mask) {
    std::vector<int> s;
    for (int v = 0; v < n; ++v)
      if (mask >> v & 1) s.push_back(v);
    out.push_back(s);
  }
  return out;
}

Verdict_ kernel_laws() {
  Rng rng(20240601);
  double worst_fixed = 0.0, worst_idem = 0.0, worst_comp = 0.0;
  const int structures = 6, n = 7;  // 3*3*2^5 = 288 configurations each
  for (int trial = 0; trial < structures; ++trial) {
    const auto G = random_structure(rng, n, 10);
    std::vector<int> all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), 0);
    const auto mu = exact_gibbs(G);
    std::vector<double> w(mu.size());
    for (double& x : w) x = rng.uniform();
    const auto nu = ProbTable::from_weights(all, G.radices(), w);
    const auto regions = subsets(n);
    for (const auto& region : regions) {
      worst_fixed = std::max(worst_fixed, tv(apply_kernel(G, region, mu), mu));
      const auto once = apply_kernel(G, region, nu);
      worst_idem = std::max(worst_idem, tv(apply_kernel(G, region, once), once));
    }
    for (int pair = 0; pair < 120; ++pair) {
      const auto& big = regions[rng.below(regions.size())];
      std::vector<int> small;
      for (int v : big)
        if (rng.uniform() < 0.5) small.push_back(v);
      if (small.empty()) small.push_back(big.front());
      const auto after_big = apply_kernel(G, big, nu);
      worst_comp = std::max(worst_comp, tv(apply_kernel(G, small, after_big), after_big));
      worst_comp = std::max(worst_comp, tv(apply_kernel(G, big, apply_kernel(G, small, nu)), after_big));
    }
  }
  const bool ok = worst_fixed <= 1e-12 && worst_idem <= 1e-12 && worst_comp <= 1e-12;
  return {ok, std::to_string(structures) + " structures; max TV fixed point " + fmt(worst_fixed) + ", idempotence " +
                  fmt(worst_idem) + ", composition " + fmt(worst_comp)};
}

Verdict_ gibbs_consistency_grid() {
  double worst = 0.0;
  bool ok = true;
  for (int m = 1; m <= 3; ++m)
    for (double beta : {0.0, 0.25, 0.5, 1.0}) {
      const auto rep = gibbs_consistency(ising_spec(beta, m), ising_potential(beta, m), 1e-10);
      ok = ok && rep.consistent;
      worst = std::max(worst, rep.max_deviation);
    }
  return {ok, "12 cases, max deviation " + fmt(worst)};
}

Verdict_ f_coherence() {
  double worst = 0.0;
  for (double beta : {0.0, 0.2, 0.5}) {
    const auto spec = ising_spec(beta, 2);
    const double f = f_invariant_markov(spec);
    for (double fb : f_invariant_ball(spec, 1)) worst = std::max(worst, std::abs(fb - f));
  }
  const double bern = f_invariant_markov(ising_spec(0.0, 2));
  const double bern_ball = f_invariant_ball(ising_spec(0.0, 2), 0).front();
  const double bern_dev = std::max(std::abs(bern - std::log(2.0)), std::abs(bern_ball - std::log(2.0)));
  return {worst <= 1e-10 && bern_dev <= 1e-15,
          "max |ball - markov| " + fmt(worst) + ", Bernoulli |f - ln 2| " + fmt(bern_dev)};
}

Verdict_ equality_chain() {
  SoficEstimateParams params;
  params.ti = {11, 30, 100, 10, 2};
  const int sizes[] = {10000};
  const std::uint64_t seeds[] = {derive_seed(77, {0}), derive_seed(77, {1}), derive_seed(77, {2})};
  bool ok = true;
  std::ostringstream d;
  for (double beta : {0.1, 0.2, 0.3}) {
    const double f = f_invariant_markov(ising_spec(beta, 2));
    const auto res = sofic_entropy_estimate(ising_potential(beta, 2), sizes, seeds, params);
    const auto& per = res.sizes.front().per_seed;
    double worst_f = 0.0, worst_pair = 0.0;
    for (std::size_t i = 0; i < per.size(); ++i) {
      worst_f = std::max(worst_f, std::abs(per[i].value - f));
      for (std::size_t j = i + 1; j < per.size(); ++j) worst_pair = std::max(worst_pair, std::abs(per[i].value - per[j].value));
    }
    ok = ok && worst_f <= 0.02 && worst_pair <= 0.02;
    d << "beta " << beta << ": f " << fmt(f) << ", mean " << fmt(res.sizes.front().mean) << ", max |H/n - f| "
      << fmt(worst_f, 3) << ", max seed gap " << fmt(worst_pair, 3) << "; ";
  }
  return {ok, d.str()};
}

Verdict_ seward() {
  const FiniteWindow e = FiniteWindow::identity();
  const FiniteWindow inner = set_difference(ball(2, 1), e);
  const FiniteWindow outer = set_difference(ball(2, 2), e);
  bool bound_ok = true, mono_ok = true;
  std::ostringstream d;
  for (double beta : {0.1, 0.2, 0.3}) {
    const auto spec = ising_spec(beta, 2);
    const double f = f_invariant_markov(spec);
    const auto small = seward_bound(spec, inner, 2000, derive_seed(5, {1}));
    const auto big = seward_bound(spec, outer, 2000, derive_seed(5, {2}));
    const bool above = big.value >= f - 3 * big.std_error;
    const bool close = std::abs(big.value - f) <= 0.02 + 3 * big.std_error;
    const bool nonincreasing = big.value <= small.value + 3 * std::hypot(small.std_error, big.std_error);
    bound_ok = bound_ok && above && close;
    mono_ok = mono_ok && nonincreasing;
    d << "beta " << beta << ": f " << fmt(f) << ", ball1 " << fmt(small.value) << "+-" << fmt(small.std_error, 2)
      << ", ball2 " << fmt(big.value) << "+-" << fmt(big.std_error, 2) << (above && close ? "" : " [bound clause fails]")
      << (nonincreasing ? "" : " [increases along nested windows]") << "; ";
  }
  return {bound_ok && mono_ok, d.str()};
}

Verdict_ uniqueness_criteria() {
  const double b0 = dobrushin_shift(ising_potential(0.0, 2)).b_star;
  const bool zero = b0 == 0.0;
  double prev = b0;
  bool monotone = true;
  for (int j = 1; j <= 40; ++j) {
    const double b = dobrushin_shift(ising_potential(0.05 * j, 2)).b_star;
    monotone = monotone && b >= prev;
    prev = b;
  }
  const auto verdict = [](double beta) { return uniqueness_verdict(ising_tree(beta, 2), SiteOrder::chain(2)).verdict; };
  const bool ends = verdict(0.2) == Verdict::unique && verdict(0.6) == Verdict::non_unique;
  // Scan for the flip; every grid verdict must be decided and the flip single.
  double last_unique = -1, first_non = -1;
  bool clean = true;
  for (int j = 0; j <= 40; ++j) {
    const double beta = 0.30 + 0.0025 * j;
    const Verdict v = verdict(beta);
    if (v == Verdict::undecided) clean = false;
    if (v == Verdict::unique) {
      if (first_non >= 0) clean = false;
      last_unique = beta;
    }
    if (v == Verdict::non_unique && first_non < 0) first_non = beta;
  }
  const double oracle = std::atanh(1.0 / 3.0);
  const double flip = 0.5 * (last_unique + first_non);
  const bool located = clean && last_unique >= 0 && first_non >= 0 && std::abs(flip - oracle) <= 0.02;
  return {zero && monotone && ends && located,
          "b*(0) = " + fmt(b0) + ", monotone " + (monotone ? "yes" : "no") +
              ", flip between " + fmt(last_unique, 4) + " and " + fmt(first_non, 4) + " vs oracle " + fmt(oracle)};
}

Verdict_ phase_criterion() {
  const double root = f_ising_root(2);
  const double f_root = f_invariant_markov(ising_spec(root, 2));
  const auto v_root = uniqueness_verdict(ising_tree(root, 2), SiteOrder::chain(2)).verdict;
  const double f_conv = f_invariant_markov(ising_spec(0.6, 2));
  const auto v_conv = uniqueness_verdict(ising_tree(0.6, 2), SiteOrder::chain(2)).verdict;
  const bool ok = std::abs(f_root) <= 1e-10 && v_root == Verdict::non_unique && f_conv > 0 && v_conv == Verdict::non_unique;
  return {ok, "root " + fmt(root, 10) + ", f " + fmt(f_root, 3) + ", verdict " + to_string(v_root) +
                  "; converse at beta 0.6: f " + fmt(f_conv) + ", verdict " + to_string(v_conv)};
}

Verdict_ ti_calibration() {
  // 20 vertices, 2^20 configurations: the default exact budget.
  Rng pick(99);
  double sum_dev = 0.0, sum_var = 0.0;
  for (int s = 0; s < 20; ++s) {
    const double beta = 0.1 + 0.3 * pick.uniform();
    const auto G = induced_structure(random_sofic(2, 20, derive_seed(31, {static_cast<std::uint64_t>(s)})), ising_potential(beta, 2));
    const double exact = gibbs_entropy_exact(G, 1ULL << 20).value;
    const auto est = gibbs_entropy_ti(G, TiParams{}, derive_seed(32, {static_cast<std::uint64_t>(s)}));
    sum_dev += std::abs(est.value - exact);
    sum_var += est.std_error * est.std_error;
  }
  const double mean_dev = sum_dev / 20, pooled = std::sqrt(sum_var / 20);
  const GibbsStructure flat(std::vector<Alphabet>(20, Alphabet::ising()), {});
  const auto zero = gibbs_entropy_ti(flat, TiParams{}, 1);
  const bool zero_exact = zero.value == 20 * std::log(2.0) && zero.std_error == 0.0;
  return {mean_dev <= 3 * pooled && zero_exact,
          "mean |dev| " + fmt(mean_dev, 3) + " vs 3*pooled stderr " + fmt(3 * pooled, 3) + ", zero potential " +
              (zero_exact ? "exact" : "inexact")};
}

Verdict_ goodness() {
  const FiniteWindow S = ball(2, 2);
  std::vector<double> medians;
  for (int n : {100, 1000, 10000}) {
    std::vector<double> fr;
    for (std::uint64_t s = 0; s < 20; ++s) fr.push_back(good_fraction(random_sofic(2, n, derive_seed(12, {s})), S));
    std::sort(fr.begin(), fr.end());
    medians.push_back(0.5 * (fr[9] + fr[10]));
  }
  const bool ok = medians[0] <= medians[1] && medians[1] <= medians[2] && medians[2] >= 0.9;
  return {ok, "medians " + fmt(medians[0]) + ", " + fmt(medians[1]) + ", " + fmt(medians[2])};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

Verdict_ reproducibility(const std::string& cli) {
  const auto dir = std::filesystem::temp_directory_path() / "gibbsent_acceptance";
  std::filesystem::create_directories(dir);
  const std::vector<std::pair<std::string, std::string>> runs = {
      {"sofic", "sofic-entropy --ising beta=0.25 m=2 --sizes 300,600 --seed 41 --ti-sweeps 40 --ti-grid 7"},
      {"seward", "seward-bound --ising beta=0.25 m=2 --samples 200 --seed 42"},
      {"glauber", "sample-glauber --ising beta=0.4 m=2 --n 200 --sweeps 50 --seed 43"},
      {"ti", "entropy --ising beta=0.3 m=2 --n 40 --method ti --seed 44"},
      {"scan", "ising-scan --m 2 --beta-grid 0.1:0.5:0.2 --samples 40 --sizes 200 --seed 45 --ti-sweeps 40 --ti-grid 7"},
      {"gen", "sofic-gen --m 3 --n 500 --seed 46"}};
  std::vector<std::string> diffs;
  for (const auto& [name, args] : runs) {
    std::string body[2];
    for (int t = 0; t < 2; ++t) {
      const auto path = dir / (name + "_t" + std::to_string(t + 1) + ".csv");
      std::filesystem::remove(path);
      const std::string cmd = "\"" + cli + "\" " + args + " --threads " + std::to_string(t + 1) + " --out \"" +
                              path.string() + "\" > /dev/null";
      if (std::system(cmd.c_str()) != 0) diffs.push_back(name + " (exit)");
      body[t] = slurp(path);
    }
    if (body[0].empty() || body[0] != body[1]) diffs.push_back(name);
  }
  std::string d = std::to_string(runs.size()) + " stochastic commands at 1 and 2 threads";
  for (const auto& x : diffs) d += "; differs: " + x;
  return {diffs.empty(), d};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <gibbsent-cli>\n";
    return 2;
  }
  const std::string cli = argv[1];
  struct Criterion {
    const char* name;
    double limit_s;
    std::function<Verdict_()> run;
  };
  const std::vector<Criterion> criteria = {
      {"kernel laws", 10, kernel_laws},
      {"Gibbs consistency of the tree Markov measure", 5, gibbs_consistency_grid},
      {"f-invariant coherence", 60, f_coherence},
      {"sofic entropy matches the f-invariant at n = 10^4", 900, equality_chain},
      {"random-past upper bound", 600, seward},
      {"uniqueness criteria", 120, uniqueness_criteria},
      {"phase-transition criterion", 120, phase_criterion},
      {"entropy estimator calibration", 300, ti_calibration},
      {"sofic goodness statistics", 120, goodness},
      {"reproducibility across thread counts", 600, [&] { return reproducibility(cli); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    const auto t0 = std::chrono::steady_clock::now();
    Verdict_ v{false, ""};
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.limit_s;
    const bool pass = v.pass && in_time;
    failed += pass ? 0 : 1;
    std::cout << (pass ? "PASS" : "FAIL") << " [" << i + 1 << "] " << c.name << " (" << fmt(secs, 3) << " s"
              << (in_time ? "" : ", over the " + fmt(c.limit_s) + " s limit") << "): " << v.detail << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed ? 1 : 0;
}
