#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <string>

namespace qcmc {

// Pauli index for k <= 2 qubits: per-qubit code I=0, X=1, Y=2, Z=3, and for
// a pair (a, b) the index is 4*code(a) + code(b). p[0] is the identity weight.
struct PauliChannel {
  int qubits = 2;
  std::array<double, 16> p{1.0};

  static PauliChannel identity(int qubits = 2);
  static PauliChannel depolarizing(int qubits, double total);
  // Rates keyed by literal, e.g. {"XX": 1e-3}.
  static PauliChannel from_rates(int qubits, const std::map<std::string, double>& rates);

  int size() const { return qubits == 1 ? 4 : 16; }
  double error_rate() const;
  bool trivial() const { return error_rate() == 0.0; }
  // Throws unless rates are non-negative and sum below one.
  void validate() const;
};

std::string pauli_label(int qubits, int index);
int pauli_index(const std::string& label);

struct NoiseModel {
  PauliChannel two_qubit = PauliChannel::identity(2);
  PauliChannel one_qubit = PauliChannel::identity(1);
  // Keyed by two-qubit noise-location index in circuit order.
  std::map<std::size_t, PauliChannel> overrides;
  // Noise locations emitted per S1 block; negative keeps the natural ladder count.
  int s1_noise_sites = -1;

  bool noiseless() const;
  const PauliChannel& channel(std::size_t location) const;
  void validate() const;
};

}  // namespace qcmc
