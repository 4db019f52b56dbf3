#pragma once

// Reduced words in the rank-m free group and finite windows of group elements.

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gibbsent {

// +i stands for s_i, -i for s_i^{-1}; i >= 1.
using Letter = int;

class GroupWord {
 public:
  GroupWord() = default;

  // Freely reduces the given letters.
  static GroupWord from_letters(std::span<const Letter> letters);
  static GroupWord generator(int i, int sign = +1);
  // Accepts "e", "s1", "s1^-1 s2", "s1 s1"; whitespace separated.
  static GroupWord parse(std::string_view text);

  std::span<const Letter> letters() const { return letters_; }
  std::size_t length() const { return letters_.size(); }
  bool is_identity() const { return letters_.empty(); }
  Letter first() const { return letters_.front(); }
  GroupWord inverse() const;
  // Largest generator index used, 0 for e.
  int rank_used() const;
  std::string str() const;

  friend bool operator==(const GroupWord&, const GroupWord&) = default;
  // Shortlex, letters ordered s1 < s1^-1 < s2 < s2^-1 < ...
  friend std::strong_ordering operator<=>(const GroupWord& a, const GroupWord& b);

 private:
  std::vector<Letter> letters_;
};

GroupWord multiply(const GroupWord& a, const GroupWord& b);
inline GroupWord operator*(const GroupWord& a, const GroupWord& b) { return multiply(a, b); }

// Finite set of group elements in shortlex order without duplicates.
class FiniteWindow {
 public:
  FiniteWindow() = default;
  explicit FiniteWindow(std::vector<GroupWord> elements);
  static FiniteWindow identity();

  std::size_t size() const { return elements_.size(); }
  bool empty() const { return elements_.empty(); }
  const GroupWord& operator[](std::size_t i) const { return elements_[i]; }
  const std::vector<GroupWord>& elements() const { return elements_; }
  auto begin() const { return elements_.begin(); }
  auto end() const { return elements_.end(); }

  bool contains(const GroupWord& g) const;
  // Position in canonical order, or -1.
  int index_of(const GroupWord& g) const;

  void insert(const GroupWord& g);

  friend bool operator==(const FiniteWindow&, const FiniteWindow&) = default;

 private:
  std::vector<GroupWord> elements_;
};

FiniteWindow set_union(const FiniteWindow& a, const FiniteWindow& b);
FiniteWindow set_difference(const FiniteWindow& a, const FiniteWindow& b);
FiniteWindow set_intersection(const FiniteWindow& a, const FiniteWindow& b);

// All reduced words of length <= r over s_1..s_m.
FiniteWindow ball(int m, int r);
// |ball(m, r)| from the closed form 1 + 2m((2m-1)^r - 1)/(2m-2), m = 1 handled separately.
std::size_t ball_size(int m, int r);

// {f g : f in F}.
FiniteWindow translate(const FiniteWindow& F, const GroupWord& g);
// {g f : f in F}.
FiniteWindow left_translate(const GroupWord& g, const FiniteWindow& F);
FiniteWindow inverse(const FiniteWindow& F);
// {a b : a in A, b in B}.
FiniteWindow product(const FiniteWindow& A, const FiniteWindow& B);

// Union of Dg \ F over g with Dg meeting F. The search runs over g in D^{-1}F.
FiniteWindow potential_boundary(const FiniteWindow& F, const FiniteWindow& D);
// Same, for a potential with several term windows.
FiniteWindow potential_boundary(const FiniteWindow& F, std::span<const FiniteWindow> supports);

// Windows {e, s_i} for i = 1..m, the supports of a nearest-neighbour potential.
std::vector<FiniteWindow> nearest_neighbour_supports(int m);

}  // namespace gibbsent
