#pragma once

#include <cmath>
#include <random>

#include "qcmc/circuit.hpp"

namespace fixture {

// H on the ancilla, a random block G with `cnots / 2` CNOTs over the whole
// register, then G^dagger. Noiseless, the ancilla ends in |+>.
inline qcmc::CircuitSpec random_mirror_circuit(int n, int cnots, std::uint64_t seed) {
  using namespace qcmc;
  std::mt19937_64 g(seed);
  std::uniform_real_distribution<double> ang(0, 2 * std::acos(-1.0));
  std::vector<Gate> half;
  const int bits = n + 1;
  for (int k = 0; k < cnots / 2; ++k) {
    const int t = int(g() % bits);
    const double a = ang(g), b = ang(g), c = ang(g), th = ang(g) / 2;
    Mat2 u{std::polar(std::cos(th), a), -std::polar(std::sin(th), b), std::polar(std::sin(th), c - b + a),
           std::polar(std::cos(th), c)};
    half.push_back(Gate::one_qubit(t, u, "U"));
    int x = int(g() % bits), y = int(g() % (bits - 1));
    if (y >= x) ++y;
    half.push_back(Gate::cnot(x, y));
  }
  CircuitSpec c;
  c.n = n;
  c.gates.push_back(Gate::one_qubit(0, mat2::hadamard(), "H"));
  for (const auto& gate : half) c.gates.push_back(gate);
  for (auto it = half.rbegin(); it != half.rend(); ++it) {
    Gate gate = *it;
    if (gate.kind == Gate::Kind::OneQubit) gate.u = mat2::adjoint(gate.u);
    c.gates.push_back(gate);
  }
  for (std::size_t k = 0; k < c.gates.size(); ++k)
    if (c.gates[k].kind == Gate::Kind::Cnot) {
      c.noise_locations.push_back(k);
      ++c.cnot_count;
    }
  return c;
}

}  // namespace fixture
