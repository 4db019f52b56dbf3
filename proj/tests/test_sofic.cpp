#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "doctest.h"
#include "gibbsent/errors.hpp"
#include "gibbsent/sofic.hpp"

using namespace gibbsent;

namespace {

GroupWord w(const char* text) { return GroupWord::parse(text); }

// Literal reading of the four goodness conditions, quantifying over all of V for (4).
bool good_oracle(const SoficMap& s, const FiniteWindow& S, int v) {
  std::set<int> images;
  for (const auto& g : S)
    if (!images.insert(act(s, g, v)).second) return false;
  for (int x : images)
    for (const auto& g1 : S) {
      if (act(s, g1.inverse(), act(s, g1, x)) != x) return false;
      for (const auto& g2 : S)
        if (act(s, g1, act(s, g2, x)) != act(s, g1 * g2, x)) return false;
    }
  for (int x : images)
    for (const auto& g : S)
      for (int t = 0; t < s.n(); ++t)
        if (act(s, g, t) == x && t != act(s, g.inverse(), x)) return false;
  return true;
}

// Left-regular action of F_2 on ball(2, R), i.e. v -> s v, completed to a
// permutation by pairing the words that fall off the ball.
SoficMap truncated_regular(int R, FiniteWindow& points) {
  points = ball(2, R);
  const int n = static_cast<int>(points.size());
  std::vector<std::vector<int>> perms;
  for (int i = 1; i <= 2; ++i) {
    std::vector<int> p(static_cast<std::size_t>(n), -1);
    std::vector<bool> hit(static_cast<std::size_t>(n), false);
    for (int v = 0; v < n; ++v) {
      const int target = points.index_of(GroupWord::generator(i) * points[static_cast<std::size_t>(v)]);
      if (target >= 0) {
        p[static_cast<std::size_t>(v)] = target;
        hit[static_cast<std::size_t>(target)] = true;
      }
    }
    std::vector<int> free_targets;
    for (int t = 0; t < n; ++t)
      if (!hit[static_cast<std::size_t>(t)]) free_targets.push_back(t);
    std::size_t next = 0;
    for (int v = 0; v < n; ++v)
      if (p[static_cast<std::size_t>(v)] < 0) p[static_cast<std::size_t>(v)] = free_targets[next++];
    perms.push_back(p);
  }
  return SoficMap(n, perms);
}

double median(std::vector<double> x) {
  std::sort(x.begin(), x.end());
  return x[x.size() / 2];
}

}  // namespace

TEST_CASE("construction and determinism") {
  const auto one = random_sofic(3, 1, 99);
  for (const auto& p : one.perms()) CHECK(p == std::vector<int>{0});
  CHECK(random_sofic(2, 50, 7) == random_sofic(2, 50, 7));
  CHECK_FALSE(random_sofic(2, 50, 7) == random_sofic(2, 50, 8));
  CHECK_THROWS_AS(SoficMap(3, {{0, 0, 1}}), InvalidInput);
  CHECK_THROWS_AS(SoficMap(3, {{0, 1}}), InvalidInput);
}

TEST_CASE("act composes right to left") {
  const SoficMap s(5, {{1, 2, 3, 4, 0}, {0, 2, 4, 1, 3}});
  for (int v = 0; v < 5; ++v) {
    CHECK(act(s, GroupWord{}, v) == v);
    CHECK(act(s, w("s1") * w("s1^-1"), v) == v);
  }
  // perm1(perm2(v)) by hand: v=1 -> perm2 2 -> perm1 3; v=3 -> 1 -> 2.
  CHECK(act(s, w("s1 s2"), 1) == 3);
  CHECK(act(s, w("s1 s2"), 3) == 2);
  CHECK(act(s, w("s2^-1"), 4) == 2);
}

TEST_CASE("word actions are bijections") {
  const auto s = random_sofic(2, 40, 3);
  for (const auto& g : ball(2, 3)) {
    std::set<int> img;
    for (int v = 0; v < 40; ++v) img.insert(act(s, g, v));
    CHECK(img.size() == 40);
  }
}

TEST_CASE("goodness: trivial window, regular action and oracle") {
  const auto s = random_sofic(2, 10, 1);
  for (int v = 0; v < 10; ++v) CHECK(is_good(s, FiniteWindow::identity(), v));

  FiniteWindow points;
  const auto reg = truncated_regular(4, points);
  const auto S = ball(2, 2);
  // Words of length <= 2 act honestly on every point of length <= 2 inside ball(2, 4).
  for (const auto& g : ball(2, 2)) CHECK(is_good(reg, S, points.index_of(g)));

  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto r = random_sofic(2, 10, seed);
    for (int v = 0; v < 10; ++v) {
      CHECK(is_good(r, ball(2, 1), v) == good_oracle(r, ball(2, 1), v));
      CHECK(is_good(r, S, v) == good_oracle(r, S, v));
    }
  }
}

TEST_CASE("goodness is monotone in the window") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto r = random_sofic(2, 60, seed);
    for (int v = 0; v < 60; ++v)
      if (is_good(r, ball(2, 2), v)) {
        CHECK(is_good(r, ball(2, 1), v));
        CHECK(is_good(r, FiniteWindow({w("e"), w("s1 s2")}), v));
      }
  }
}

TEST_CASE("good fraction grows with n") {
  const auto S = ball(2, 2);
  std::vector<double> medians;
  for (int n : {100, 1000, 10000}) {
    std::vector<double> f;
    for (std::uint64_t seed = 0; seed < 20; ++seed) f.push_back(good_fraction(random_sofic(2, n, seed), S));
    medians.push_back(median(f));
  }
  CHECK(medians[0] <= medians[1]);
  CHECK(medians[1] <= medians[2]);
  CHECK(medians[2] >= 0.9);
}

TEST_CASE("pullback") {
  const SoficMap s(6, {{1, 2, 3, 4, 5, 0}, {5, 3, 1, 0, 2, 4}});
  const Configuration tau{0, 1, 1, 0, 1, 0};
  CHECK(pullback(s, 2, FiniteWindow::identity(), tau) == std::vector<int>{1});
  CHECK(pullback(s, 4, ball(2, 1), Configuration(6, 1)) == std::vector<int>(5, 1));
  // ball(2,1) in order e, s1, s1^-1, s2, s2^-1 at v = 2:
  // e -> 2, s1 -> 3, s1^-1 -> 1, s2 -> 1, s2^-1 -> 4.
  CHECK(pullback(s, 2, ball(2, 1), tau) == std::vector<int>{1, 0, 1, 1, 1});
}

TEST_CASE("empirical pullback") {
  const auto s = random_sofic(2, 30, 4);
  const auto flat = empirical_pullback(s, ball(2, 1), Configuration(30, 1), 2);
  CHECK(flat[flat.size() - 1] == 1.0);

  // n = 2 with s1 swapping the points and tau = (0, 1): atoms (0,1) and (1,0).
  const SoficMap two(2, {{1, 0}});
  const auto pair = empirical_pullback(two, FiniteWindow({w("e"), w("s1")}), {0, 1}, 2);
  CHECK(pair[1] == 0.5);
  CHECK(pair[2] == 0.5);
}

TEST_CASE("induced structure: single-site, collapse and the 8-cycle") {
  const auto site = single_site_potential(2, Alphabet::ising(), {0.3, -0.2});
  const auto G = induced_structure(random_sofic(2, 5, 2), site);
  CHECK(G.terms().size() == 5);
  const auto mu = exact_gibbs(G);
  const double p_plus = std::exp(0.2) / (std::exp(0.2) + std::exp(-0.3));
  CHECK(mu[mu.size() - 1] == doctest::Approx(std::pow(p_plus, 5)).epsilon(1e-12));

  const double beta = 0.35;
  const auto one = induced_structure(random_sofic(2, 1, 0), ising_potential(beta, 2));
  REQUIRE(one.terms().size() == 1);
  CHECK(one.terms()[0].table == std::vector<double>{-2 * beta, -2 * beta});

  std::vector<int> shift(8);
  for (int v = 0; v < 8; ++v) shift[static_cast<std::size_t>(v)] = (v + 1) % 8;
  const auto cycle = induced_structure(SoficMap(8, {shift}), ising_potential(beta, 1));
  const auto law = exact_gibbs(cycle);
  // Transfer matrix T(x, y) = exp(beta x y); Z = trace T^8 = (2 cosh b)^8 + (2 sinh b)^8.
  const double z = std::pow(2 * std::cosh(beta), 8) + std::pow(2 * std::sinh(beta), 8);
  for (std::size_t idx = 0; idx < law.size(); ++idx) {
    const auto x = law.digits(idx);
    double weight = 1.0;
    for (int v = 0; v < 8; ++v) {
      const int a = 2 * x[static_cast<std::size_t>(v)] - 1, b = 2 * x[static_cast<std::size_t>((v + 1) % 8)] - 1;
      weight *= std::exp(beta * a * b);
    }
    CHECK(law[idx] == doctest::Approx(weight / z).epsilon(1e-12));
  }
}

TEST_CASE("induced degree bound and boundary correspondence at good vertices") {
  const auto phi = ising_potential(0.2, 2);
  const auto s = random_sofic(2, 2000, 5);
  const auto G = induced_structure(s, phi);
  const std::size_t bound = 2 * 2 * phi.terms.size();
  for (int v = 0; v < G.num_vertices(); ++v) CHECK(G.terms_at(v).size() <= bound);

  const FiniteWindow F = ball(2, 1);
  const auto supports = phi.supports();
  const auto dF = potential_boundary(F, supports);
  const FiniteWindow S = ball(2, 2);
  int checked = 0;
  for (int v = 0; v < s.n(); ++v) {
    if (!is_good(s, S, v)) continue;
    std::vector<int> region;
    for (const auto& g : F) region.push_back(act(s, g, v));
    std::sort(region.begin(), region.end());
    std::vector<int> expect;
    for (const auto& g : dF) expect.push_back(act(s, g, v));
    std::sort(expect.begin(), expect.end());
    CHECK(G.boundary(region) == expect);
    ++checked;
  }
  CHECK(checked > 1000);
}
