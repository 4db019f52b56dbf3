#include <cmath>
#include <functional>
#include <ostream>

#include "gibbsent/cli.hpp"
#include "gibbsent/sofic.hpp"

namespace gibbsent::cli {

namespace {

struct Check {
  const char* name;
  std::function<bool()> body;
};

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

// Brute-force entropy of an explicit structure by direct enumeration.
double brute_entropy(const GibbsStructure& G) {
  const auto radices = G.radices();
  Configuration omega(radices.size(), 0);
  std::vector<double> w;
  for (;;) {
    w.push_back(std::exp(-energy(G, omega)));
    std::size_t i = omega.size();
    while (i-- > 0) {
      if (++omega[i] < radices[i]) break;
      omega[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  double z = 0.0;
  for (double x : w) z += x;
  double h = 0.0;
  for (double x : w)
    if (x > 0.0) h -= (x / z) * std::log(x / z);
  return h;
}

GibbsStructure cycle(int n, double beta) {
  std::vector<EnergyTerm> terms;
  for (int v = 0; v < n; ++v) terms.push_back({{v, (v + 1) % n}, {-beta, beta, beta, -beta}});
  return GibbsStructure(std::vector<Alphabet>(static_cast<std::size_t>(n), Alphabet::ising()), terms);
}

const std::vector<Check>& checks() {
  static const std::vector<Check> list = {
      {"group: ball sizes match closed form",
       [] {
         for (int m = 1; m <= 3; ++m)
           for (int r = 0; r <= 4; ++r)
             if (ball(m, r).size() != ball_size(m, r)) return false;
         return ball_size(2, 2) == 17;
       }},
      {"group: inverse law",
       [] {
         const GroupWord g = GroupWord::parse("s1 s2^-1 s1");
         return (g * g.inverse()).is_identity() && (g.inverse() * g).is_identity();
       }},
      {"gibbs: exact entropy of a 6-cycle matches enumeration",
       [] {
         const auto G = cycle(6, 0.4);
         return near(gibbs_entropy_exact(G).value, brute_entropy(G), 1e-10);
       }},
      {"gibbs: local kernel of an edge",
       [] {
         const GibbsStructure G({Alphabet::ising(), Alphabet::ising()}, {{{0, 1}, {-0.5, 0.5, 0.5, -0.5}}});
         const int region[] = {0};
         const ProbTable k = local_kernel(G, region, Configuration{kUnassigned, 1});
         return near(k[1], 1.0 / (1.0 + std::exp(-1.0)), 1e-12);
       }},
      {"entropy: shannon of uniform on 4 symbols",
       [] { return near(shannon(ProbTable::uniform({0}, {4})), std::log(4.0), 1e-12); }},
      {"sofic: random maps are bijective and the n = 1 map is trivial",
       [] {
         const SoficMap s = random_sofic(2, 50, 7);
         for (int v = 0; v < 50; ++v)
           if (s.apply_letter(-1, s.apply_letter(1, v)) != v) return false;
         return good_fraction(random_sofic(2, 1, 3), ball(2, 1)) == 0.0;
       }},
      {"order: shift Dobrushin coefficient equals 2 tanh(2 beta)",
       [] {
         for (double beta : {0.05, 0.2, 0.5})
           if (!near(dobrushin_shift(ising_potential(beta, 2)).b_star, 2.0 * std::tanh(2.0 * beta), 1e-10)) return false;
         return true;
       }},
      {"order: tree verdicts on both sides of the threshold",
       [] {
         return uniqueness_verdict(ising_tree(0.2, 2), SiteOrder::chain(2)).verdict == Verdict::unique &&
                uniqueness_verdict(ising_tree(0.6, 2), SiteOrder::chain(2)).verdict == Verdict::non_unique;
       }},
      {"markov: Ising invariant matches the closed form",
       [] {
         for (int m = 1; m <= 3; ++m)
           for (double beta : {0.0, 0.3, 1.0})
             if (!near(f_invariant_markov(ising_spec(beta, m)), f_ising(beta, m), 1e-12)) return false;
         return true;
       }},
      {"markov: Gibbs consistency of the Ising spec",
       [] { return gibbs_consistency(ising_spec(0.5, 2), ising_potential(0.5, 2)).consistent; }},
      {"entropy: f at beta = 0 is log 2",
       [] { return near(f_ising(0.0, 3), std::log(2.0), 1e-12); }},
      {"entropy: phase root is a zero of f",
       [] { return near(f_ising(f_ising_root(2), 2), 0.0, 1e-10); }},
  };
  return list;
}

}  // namespace

int selftest(std::ostream& out) {
  int failed = 0;
  for (const auto& c : checks()) {
    bool ok = false;
    try {
      ok = c.body();
    } catch (const std::exception& e) {
      out << "error in " << c.name << ": " << e.what() << '\n';
    }
    out << (ok ? "PASS " : "FAIL ") << c.name << '\n';
    failed += ok ? 0 : 1;
  }
  out << (failed ? "selftest failed: " + std::to_string(failed) : std::string("selftest passed")) << '\n';
  return failed ? kFailure : kOk;
}

}  // namespace gibbsent::cli
