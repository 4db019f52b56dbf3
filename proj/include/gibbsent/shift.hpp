#pragma once

// Shift-invariant potentials on the free group, given by finitely many
// window terms phi_D, and their restrictions to finite windows.

#include <vector>

#include "gibbsent/gibbs.hpp"
#include "gibbsent/group.hpp"

namespace gibbsent {

// Energy over configurations of the window D (canonical order), |A|^|D| entries.
struct ShiftTerm {
  FiniteWindow window;
  std::vector<double> table;
};

struct ShiftPotential {
  int m = 1;
  Alphabet alphabet;
  std::vector<ShiftTerm> terms;

  // Windows must contain e and tables must match |A|^|D|.
  void validate() const;
  std::vector<FiniteWindow> supports() const;
  ShiftPotential scaled(double t) const;
};

// phi(x) = -beta * sum_i x(e) x(s_i), one term per generator.
ShiftPotential ising_potential(double beta, int m);
ShiftPotential single_site_potential(int m, Alphabet alphabet, std::vector<double> energies);

struct WindowStructure {
  FiniteWindow window;  // vertex k of the structure is window[k]
  GibbsStructure structure;
};

// Translates Dg that meet `core` and lie inside `window`.
WindowStructure window_structure(const ShiftPotential& phi, const FiniteWindow& core,
                                 const FiniteWindow& window);
// Same, on core plus its potential boundary.
WindowStructure local_structure(const ShiftPotential& phi, const FiniteWindow& core);

}  // namespace gibbsent
