#include <set>

#include "doctest.h"
#include "gibbsent/errors.hpp"
#include "gibbsent/group.hpp"
#include "gibbsent/rng.hpp"

using namespace gibbsent;

namespace {

GroupWord w(const char* text) { return GroupWord::parse(text); }

// Count reduced words of length <= r by extending with every non-cancelling letter.
std::size_t bfs_count(int m, int r) {
  std::set<std::vector<int>> seen{{}};
  std::vector<std::vector<int>> frontier{{}};
  for (int step = 0; step < r; ++step) {
    std::vector<std::vector<int>> next;
    for (const auto& word : frontier)
      for (int i = 1; i <= m; ++i)
        for (int s : {1, -1}) {
          if (!word.empty() && word.back() == -s * i) continue;
          auto ext = word;
          ext.push_back(s * i);
          if (seen.insert(ext).second) next.push_back(ext);
        }
    frontier = std::move(next);
  }
  return seen.size();
}

GroupWord random_word(Rng& rng, int m, int max_len) {
  std::vector<Letter> letters;
  const auto len = rng.below(static_cast<std::uint64_t>(max_len) + 1);
  for (std::uint64_t k = 0; k < len; ++k) {
    const int i = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(m)));
    letters.push_back(rng.below(2) ? i : -i);
  }
  return GroupWord::from_letters(letters);
}

}  // namespace

TEST_CASE("words reduce on construction") {
  const std::vector<Letter> raw{1, 2, -2, -1, 1};
  CHECK(GroupWord::from_letters(raw) == GroupWord::generator(1));
  CHECK_THROWS_AS(GroupWord::from_letters(std::vector<Letter>{0}), InvalidInput);
  CHECK(w("e").is_identity());
  CHECK(w("s1 s2^-1").str() == "s1 s2^-1");
  CHECK(w("s2^-1 s1").inverse() == w("s1^-1 s2"));
  CHECK_THROWS(GroupWord::parse("t1"));
}

TEST_CASE("multiply examples") {
  CHECK((w("s1") * w("s1^-1")).is_identity());
  CHECK(w("e") * w("s2") == w("s2"));
  CHECK(w("s1 s2") * w("s2^-1 s1") == w("s1 s1"));
}

TEST_CASE("group axioms on random triples") {
  Rng rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const auto a = random_word(rng, 3, 6), b = random_word(rng, 3, 6), c = random_word(rng, 3, 6);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * GroupWord{} == a);
    CHECK(GroupWord{} * a == a);
    CHECK((a * a.inverse()).is_identity());
  }
}

TEST_CASE("shortlex order is total and length first") {
  CHECK(w("e") < w("s1"));
  CHECK(w("s1") < w("s1^-1"));
  CHECK(w("s1^-1") < w("s2"));
  CHECK(w("s2^-1") < w("s1 s1"));
}

TEST_CASE("ball sizes") {
  CHECK(ball(2, 0).size() == 1);
  CHECK(ball(2, 1).size() == 5);
  CHECK(ball(2, 2).size() == 17);
  for (int m = 1; m <= 3; ++m)
    for (int r = 0; r <= 5; ++r) {
      CAPTURE(m);
      CAPTURE(r);
      CHECK(ball(m, r).size() == bfs_count(m, r));
      CHECK(ball_size(m, r) == bfs_count(m, r));
    }
  CHECK_THROWS_AS(ball(0, 1), InvalidInput);
}

TEST_CASE("translate examples and inverse law") {
  const FiniteWindow e = FiniteWindow::identity();
  CHECK(translate(e, w("s1")) == FiniteWindow({w("s1")}));
  CHECK(translate(ball(2, 1), GroupWord{}) == ball(2, 1));
  CHECK(translate(FiniteWindow({w("e"), w("s1")}), w("s1")) == FiniteWindow({w("s1"), w("s1 s1")}));
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = random_word(rng, 2, 4);
    CHECK(translate(translate(ball(2, 2), g), g.inverse()) == ball(2, 2));
  }
}

TEST_CASE("potential boundary examples") {
  const FiniteWindow e = FiniteWindow::identity();
  CHECK(potential_boundary(e, FiniteWindow({w("e"), w("s1")})) == FiniteWindow({w("s1"), w("s1^-1")}));
  CHECK(potential_boundary(ball(2, 2), e).empty());
  // Translates D s1^-1 and D s2^-1 also meet {e}, adding s2 s1^-1 and s1 s2^-1.
  CHECK(potential_boundary(e, FiniteWindow({w("e"), w("s1"), w("s2")})) ==
        FiniteWindow({w("s1"), w("s1^-1"), w("s2"), w("s2^-1"), w("s1 s2^-1"), w("s2 s1^-1")}));
}

TEST_CASE("potential boundary is disjoint from the window") {
  Rng rng(3);
  const FiniteWindow D({w("e"), w("s1"), w("s2 s1")});
  for (int trial = 0; trial < 50; ++trial) {
    FiniteWindow F;
    for (int k = 0; k < 5; ++k) F.insert(random_word(rng, 2, 3));
    const auto boundary = potential_boundary(F, D);
    CHECK(set_intersection(boundary, F).empty());
    // Every boundary element shares a translate Dg with F.
    for (const auto& b : boundary) {
      bool found = false;
      for (const auto& d : D) {
        const auto g = d.inverse() * b;
        for (const auto& d2 : D) found = found || F.contains(d2 * g);
      }
      CHECK(found);
    }
  }
}

TEST_CASE("set calculus") {
  const auto b1 = ball(2, 1), b2 = ball(2, 2);
  CHECK(set_union(b1, b2) == b2);
  CHECK(set_intersection(b1, b2) == b1);
  CHECK(set_difference(b2, b1).size() == 12);
  CHECK(b2.index_of(w("s1")) == 1);
  CHECK(b2.index_of(w("s3")) == -1);
  CHECK(inverse(b2) == b2);
  CHECK(product(b1, b1) == b2);
}
