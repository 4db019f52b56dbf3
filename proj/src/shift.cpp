#include "gibbsent/shift.hpp"

#include <cmath>
#include <string>

namespace gibbsent {

void ShiftPotential::validate() const {
  if (m < 1) throw InvalidInput("rank must be >= 1");
  if (alphabet.size() < 1) throw InvalidInput("potential needs an alphabet");
  for (const auto& term : terms) {
    if (!term.window.contains(GroupWord{})) throw InvalidInput("term window must contain e");
    for (const auto& g : term.window)
      if (g.rank_used() > m) throw InvalidInput("term window uses a generator above the rank");
    std::size_t cells = 1;
    for (std::size_t i = 0; i < term.window.size(); ++i) cells *= static_cast<std::size_t>(alphabet.size());
    if (term.table.size() != cells)
      throw InvalidInput("term table must have |A|^|D| = " + std::to_string(cells) + " entries");
    for (double x : term.table)
      if (!std::isfinite(x)) throw InvalidInput("term energies must be finite");
  }
}

std::vector<FiniteWindow> ShiftPotential::supports() const {
  std::vector<FiniteWindow> out;
  for (const auto& t : terms) out.push_back(t.window);
  return out;
}

ShiftPotential ShiftPotential::scaled(double t) const {
  ShiftPotential out = *this;
  for (auto& term : out.terms)
    for (double& x : term.table) x *= t;
  return out;
}

ShiftPotential ising_potential(double beta, int m) {
  ShiftPotential phi;
  phi.m = m;
  phi.alphabet = Alphabet::ising();
  for (auto D : nearest_neighbour_supports(m)) {
    // Coordinates (x_e, x_{s_i}); symbol 0 is -1, symbol 1 is +1.
    phi.terms.push_back({std::move(D), {-beta, beta, beta, -beta}});
  }
  phi.validate();
  return phi;
}

ShiftPotential single_site_potential(int m, Alphabet alphabet, std::vector<double> energies) {
  ShiftPotential phi;
  phi.m = m;
  phi.alphabet = std::move(alphabet);
  phi.terms.push_back({FiniteWindow::identity(), std::move(energies)});
  phi.validate();
  return phi;
}

WindowStructure window_structure(const ShiftPotential& phi, const FiniteWindow& core,
                                 const FiniteWindow& window) {
  phi.validate();
  std::vector<EnergyTerm> terms;
  for (const auto& term : phi.terms) {
    for (const auto& g : product(inverse(term.window), core)) {
      FiniteWindow T = translate(term.window, g);
      if (set_intersection(T, core).empty()) continue;
      EnergyTerm et;
      bool inside = true;
      for (const auto& d : term.window) {
        int idx = window.index_of(d * g);
        if (idx < 0) {
          inside = false;
          break;
        }
        et.support.push_back(idx);
      }
      if (!inside) continue;
      et.table = term.table;
      terms.push_back(std::move(et));
    }
  }
  std::vector<Alphabet> alphabets(window.size(), phi.alphabet);
  return {window, GibbsStructure(std::move(alphabets), std::move(terms))};
}

WindowStructure local_structure(const ShiftPotential& phi, const FiniteWindow& core) {
  const auto supports = phi.supports();
  return window_structure(phi, core, set_union(core, potential_boundary(core, supports)));
}

}  // namespace gibbsent
