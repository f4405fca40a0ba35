#pragma once

#include <string>
#include <vector>

#include "qcmc/pauli.hpp"

namespace qcmc {

struct Term {
  double coeff;
  PauliString pauli;
};

class Hamiltonian {
 public:
  Hamiltonian() = default;
  // Throws on identity, duplicate, zero-coefficient or non-canonical terms.
  Hamiltonian(int n, std::vector<Term> terms);

  int n() const { return n_; }
  std::size_t size() const { return terms_.size(); }
  const std::vector<Term>& terms() const { return terms_; }
  const Term& operator[](std::size_t j) const { return terms_[j]; }
  double h_tot() const { return h_tot_; }
  PauliSum as_sum() const;

 private:
  int n_ = 0;
  std::vector<Term> terms_;
  double h_tot_ = 0.0;
};

inline double h_tot(const Hamiltonian& h) { return h.h_tot(); }

enum class Model { FermiHubbard, Heisenberg };

struct LatticeSpec {
  Model model = Model::FermiHubbard;
  int sites = 1;
  // Hubbard: chain hopping J unless `hopping` is set (sites x sites, symmetric).
  double J = 1.0;
  std::vector<std::vector<double>> hopping;
  double U = 0.0;
  // Heisenberg field.
  double h = 0.0;
  bool require_bipartite = true;
};

// Jordan-Wigner encoding with c = (Y - iZ)/2 * X-string. Site i spin-up is
// qubit 2i-1, spin-down is qubit 2i. The vacuum is |->^n and occupation
// n_q = (1 + X_q)/2. The on-site shift -U/2 N is absorbed, so the interaction
// reads U/4 X X per site.
Hamiltonian build_fermi_hubbard(const LatticeSpec& spec);

// -J sum (XX + YY + ZZ) on the open chain, then -h sum Z.
Hamiltonian build_heisenberg(const LatticeSpec& spec);

Hamiltonian build_model(const LatticeSpec& spec);

bool has_short_time_interference(const Hamiltonian& h);

// Qubit carrying the orbital (site, spin) with spin 0 = up, 1 = down.
inline int hubbard_qubit(int site, int spin) { return 2 * site - 1 + spin; }

}  // namespace qcmc
