#include "qcmc/hamiltonian.hpp"

#include <cmath>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace qcmc {

Hamiltonian::Hamiltonian(int n, std::vector<Term> terms) : n_(n), terms_(std::move(terms)) {
  if (n < 1) throw std::invalid_argument("Hamiltonian needs at least one qubit");
  std::unordered_set<PauliString, PauliHash> seen;
  for (const auto& t : terms_) {
    if (t.pauli.n() != n) throw std::invalid_argument("term " + t.pauli.to_string() + " has wrong qubit count");
    if (t.pauli.phase_exp() != 0) throw std::invalid_argument("term " + t.pauli.to_string() + " is not canonical");
    if (t.pauli.is_identity()) throw std::invalid_argument("identity term rejected: it only contributes a global phase");
    if (t.coeff == 0.0 || !std::isfinite(t.coeff)) throw std::invalid_argument("term " + t.pauli.to_string() + " has zero or non-finite coefficient");
    if (!seen.insert(t.pauli).second) throw std::invalid_argument("duplicate term " + t.pauli.to_string());
    h_tot_ += std::abs(t.coeff);
  }
  if (terms_.empty()) throw std::invalid_argument("Hamiltonian has no terms");
}

PauliSum Hamiltonian::as_sum() const {
  PauliSum s(n_);
  for (const auto& t : terms_) s.add(t.pauli, t.coeff);
  return s;
}

namespace {

std::vector<std::vector<double>> hopping_table(const LatticeSpec& spec) {
  int L = spec.sites;
  if (!spec.hopping.empty()) {
    if (static_cast<int>(spec.hopping.size()) != L) throw std::invalid_argument("hopping table must be sites x sites");
    for (int i = 0; i < L; ++i) {
      if (static_cast<int>(spec.hopping[i].size()) != L) throw std::invalid_argument("hopping table must be sites x sites");
      for (int j = 0; j < L; ++j)
        if (spec.hopping[i][j] != spec.hopping[j][i]) throw std::invalid_argument("hopping table must be symmetric");
    }
    return spec.hopping;
  }
  std::vector<std::vector<double>> t(L, std::vector<double>(L, 0.0));
  for (int i = 0; i + 1 < L; ++i) t[i][i + 1] = t[i + 1][i] = spec.J;
  return t;
}

PauliString hopping_string(int n, int a, int b, char end) {
  PauliString p(n);
  p.set_op(a, end);
  for (int q = a + 1; q < b; ++q) p.set_op(q, 'X');
  p.set_op(b, end);
  return p;
}

}  // namespace

Hamiltonian build_fermi_hubbard(const LatticeSpec& spec) {
  if (spec.sites < 1) throw std::invalid_argument("site count must be >= 1");
  int n = 2 * spec.sites;
  auto J = hopping_table(spec);
  std::vector<Term> terms;
  for (int i = 1; i <= spec.sites; ++i) {
    for (int j = i + 1; j <= spec.sites; ++j) {
      double Jij = J[i - 1][j - 1];
      if (Jij == 0.0) continue;
      if (spec.require_bipartite && (i + j) % 2 == 0)
        throw std::invalid_argument("coupling between sites " + std::to_string(i) + " and " + std::to_string(j) +
                                    " breaks the bipartite structure");
      for (int s = 0; s < 2; ++s) {
        int a = hubbard_qubit(i, s), b = hubbard_qubit(j, s);
        terms.push_back({-Jij / 2.0, hopping_string(n, a, b, 'Y')});
        terms.push_back({-Jij / 2.0, hopping_string(n, a, b, 'Z')});
      }
    }
  }
  if (spec.U != 0.0) {
    for (int i = 1; i <= spec.sites; ++i) {
      PauliString p(n);
      p.set_op(hubbard_qubit(i, 0), 'X');
      p.set_op(hubbard_qubit(i, 1), 'X');
      terms.push_back({spec.U / 4.0, p});
    }
  }
  return Hamiltonian(n, std::move(terms));
}

Hamiltonian build_heisenberg(const LatticeSpec& spec) {
  int n = spec.sites;
  if (n < 1) throw std::invalid_argument("spin count must be >= 1");
  std::vector<Term> terms;
  if (spec.J != 0.0) {
    for (int i = 1; i < n; ++i) {
      for (char c : {'X', 'Y', 'Z'}) {
        PauliString p(n);
        p.set_op(i, c);
        p.set_op(i + 1, c);
        terms.push_back({-spec.J, p});
      }
    }
  }
  if (spec.h != 0.0)
    for (int i = 1; i <= n; ++i) terms.push_back({-spec.h, PauliString::single(n, i, 'Z')});
  return Hamiltonian(n, std::move(terms));
}

Hamiltonian build_model(const LatticeSpec& spec) {
  return spec.model == Model::FermiHubbard ? build_fermi_hubbard(spec) : build_heisenberg(spec);
}

bool has_short_time_interference(const Hamiltonian& h) {
  std::set<std::vector<std::uint64_t>> xs;
  const PauliString id(h.n());
  xs.insert(std::vector<std::uint64_t>(id.x().begin(), id.x().end()));
  for (const auto& t : h.terms()) {
    std::vector<std::uint64_t> x(t.pauli.x().begin(), t.pauli.x().end());
    if (!xs.insert(x).second) return true;
  }
  return false;
}

}  // namespace qcmc
