#include "gibbsent/group.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <set>

#include "gibbsent/errors.hpp"

namespace gibbsent {

namespace {

int letter_key(Letter l) { return 2 * (std::abs(l) - 1) + (l < 0 ? 1 : 0); }

void push_reduced(std::vector<Letter>& out, Letter l) {
  if (!out.empty() && out.back() == -l) {
    out.pop_back();
  } else {
    out.push_back(l);
  }
}

}  // namespace

GroupWord GroupWord::from_letters(std::span<const Letter> letters) {
  GroupWord w;
  for (Letter l : letters) {
    if (l == 0) throw InvalidInput("letter 0 is not a generator");
    push_reduced(w.letters_, l);
  }
  return w;
}

GroupWord GroupWord::generator(int i, int sign) {
  if (i < 1) throw InvalidInput("generator index must be >= 1");
  GroupWord w;
  w.letters_.push_back(sign >= 0 ? i : -i);
  return w;
}

GroupWord GroupWord::parse(std::string_view text) {
  std::vector<Letter> letters;
  std::size_t pos = 0;
  auto skip_space = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  skip_space();
  while (pos < text.size()) {
    if (text[pos] == 'e') {
      ++pos;
    } else if (text[pos] == 's') {
      ++pos;
      int idx = 0;
      std::size_t start = pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        idx = idx * 10 + (text[pos] - '0');
        ++pos;
      }
      if (pos == start || idx < 1) throw InvalidInput("bad generator in word: " + std::string(text));
      int sign = +1;
      if (text.substr(pos, 3) == "^-1") {
        sign = -1;
        pos += 3;
      }
      letters.push_back(sign * idx);
    } else {
      throw InvalidInput("bad word: " + std::string(text));
    }
    skip_space();
  }
  return from_letters(letters);
}

GroupWord GroupWord::inverse() const {
  GroupWord w;
  w.letters_.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) w.letters_.push_back(-*it);
  return w;
}

int GroupWord::rank_used() const {
  int r = 0;
  for (Letter l : letters_) r = std::max(r, std::abs(l));
  return r;
}

std::string GroupWord::str() const {
  if (letters_.empty()) return "e";
  std::string s;
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (i) s += ' ';
    s += 's' + std::to_string(std::abs(letters_[i]));
    if (letters_[i] < 0) s += "^-1";
  }
  return s;
}

std::strong_ordering operator<=>(const GroupWord& a, const GroupWord& b) {
  if (auto c = a.letters_.size() <=> b.letters_.size(); c != 0) return c;
  for (std::size_t i = 0; i < a.letters_.size(); ++i) {
    if (auto c = letter_key(a.letters_[i]) <=> letter_key(b.letters_[i]); c != 0) return c;
  }
  return std::strong_ordering::equal;
}

GroupWord multiply(const GroupWord& a, const GroupWord& b) {
  std::vector<Letter> out(a.letters().begin(), a.letters().end());
  for (Letter l : b.letters()) push_reduced(out, l);
  return GroupWord::from_letters(out);
}

FiniteWindow::FiniteWindow(std::vector<GroupWord> elements) : elements_(std::move(elements)) {
  std::sort(elements_.begin(), elements_.end());
  elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
}

FiniteWindow FiniteWindow::identity() { return FiniteWindow({GroupWord{}}); }

bool FiniteWindow::contains(const GroupWord& g) const {
  return std::binary_search(elements_.begin(), elements_.end(), g);
}

int FiniteWindow::index_of(const GroupWord& g) const {
  auto it = std::lower_bound(elements_.begin(), elements_.end(), g);
  if (it == elements_.end() || *it != g) return -1;
  return static_cast<int>(it - elements_.begin());
}

void FiniteWindow::insert(const GroupWord& g) {
  auto it = std::lower_bound(elements_.begin(), elements_.end(), g);
  if (it == elements_.end() || *it != g) elements_.insert(it, g);
}

FiniteWindow set_union(const FiniteWindow& a, const FiniteWindow& b) {
  std::vector<GroupWord> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return FiniteWindow(std::move(out));
}

FiniteWindow set_difference(const FiniteWindow& a, const FiniteWindow& b) {
  std::vector<GroupWord> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return FiniteWindow(std::move(out));
}

FiniteWindow set_intersection(const FiniteWindow& a, const FiniteWindow& b) {
  std::vector<GroupWord> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return FiniteWindow(std::move(out));
}

FiniteWindow ball(int m, int r) {
  if (m < 1 || r < 0) throw InvalidInput("ball needs m >= 1 and r >= 0");
  std::vector<GroupWord> all{GroupWord{}};
  std::vector<GroupWord> frontier{GroupWord{}};
  for (int step = 0; step < r; ++step) {
    std::vector<GroupWord> next;
    for (const auto& w : frontier) {
      for (int i = 1; i <= m; ++i) {
        for (int sign : {+1, -1}) {
          Letter l = sign * i;
          if (!w.is_identity() && w.letters().back() == -l) continue;
          next.push_back(w * GroupWord::generator(i, sign));
        }
      }
    }
    all.insert(all.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return FiniteWindow(std::move(all));
}

std::size_t ball_size(int m, int r) {
  if (m == 1) return static_cast<std::size_t>(2 * r + 1);
  std::size_t pow = 1;
  for (int i = 0; i < r; ++i) pow *= static_cast<std::size_t>(2 * m - 1);
  return 1 + static_cast<std::size_t>(2 * m) * (pow - 1) / static_cast<std::size_t>(2 * m - 2);
}

FiniteWindow translate(const FiniteWindow& F, const GroupWord& g) {
  std::vector<GroupWord> out;
  out.reserve(F.size());
  for (const auto& f : F) out.push_back(f * g);
  return FiniteWindow(std::move(out));
}

FiniteWindow left_translate(const GroupWord& g, const FiniteWindow& F) {
  std::vector<GroupWord> out;
  out.reserve(F.size());
  for (const auto& f : F) out.push_back(g * f);
  return FiniteWindow(std::move(out));
}

FiniteWindow inverse(const FiniteWindow& F) {
  std::vector<GroupWord> out;
  out.reserve(F.size());
  for (const auto& f : F) out.push_back(f.inverse());
  return FiniteWindow(std::move(out));
}

FiniteWindow product(const FiniteWindow& A, const FiniteWindow& B) {
  std::vector<GroupWord> out;
  out.reserve(A.size() * B.size());
  for (const auto& a : A)
    for (const auto& b : B) out.push_back(a * b);
  return FiniteWindow(std::move(out));
}

FiniteWindow potential_boundary(const FiniteWindow& F, const FiniteWindow& D) {
  std::vector<GroupWord> out;
  for (const auto& g : product(inverse(D), F)) {
    FiniteWindow T = translate(D, g);
    if (set_intersection(T, F).empty()) continue;
    for (const auto& t : T)
      if (!F.contains(t)) out.push_back(t);
  }
  return FiniteWindow(std::move(out));
}

FiniteWindow potential_boundary(const FiniteWindow& F, std::span<const FiniteWindow> supports) {
  FiniteWindow out;
  for (const auto& D : supports) out = set_union(out, potential_boundary(F, D));
  return out;
}

std::vector<FiniteWindow> nearest_neighbour_supports(int m) {
  std::vector<FiniteWindow> out;
  for (int i = 1; i <= m; ++i) out.push_back(FiniteWindow({GroupWord{}, GroupWord::generator(i)}));
  return out;
}

}  // namespace gibbsent
