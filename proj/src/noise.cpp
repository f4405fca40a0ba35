#include "qcmc/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace qcmc {

namespace {

int code_of(char c) {
  switch (c) {
    case 'I': return 0;
    case 'X': return 1;
    case 'Y': return 2;
    case 'Z': return 3;
    default: throw std::invalid_argument(std::string("bad Pauli character '") + c + "'");
  }
}

}  // namespace

PauliChannel PauliChannel::identity(int qubits) {
  if (qubits != 1 && qubits != 2) throw std::invalid_argument("Pauli channels act on one or two qubits");
  PauliChannel ch;
  ch.qubits = qubits;
  ch.p.fill(0.0);
  ch.p[0] = 1.0;
  return ch;
}

PauliChannel PauliChannel::depolarizing(int qubits, double total) {
  PauliChannel ch = identity(qubits);
  const int k = ch.size() - 1;
  for (int i = 1; i <= k; ++i) ch.p[i] = total / k;
  ch.p[0] = 1.0 - total;
  ch.validate();
  return ch;
}

PauliChannel PauliChannel::from_rates(int qubits, const std::map<std::string, double>& rates) {
  PauliChannel ch = identity(qubits);
  double total = 0.0;
  for (const auto& [label, r] : rates) {
    if (static_cast<int>(label.size()) != qubits) throw std::invalid_argument("rate label " + label + " has the wrong length");
    int idx = pauli_index(label);
    if (idx == 0) throw std::invalid_argument("identity rate is implied");
    ch.p[idx] = r;
    total += r;
  }
  ch.p[0] = 1.0 - total;
  ch.validate();
  return ch;
}

double PauliChannel::error_rate() const {
  double s = 0.0;
  for (int i = 1; i < size(); ++i) s += p[i];
  return s;
}

void PauliChannel::validate() const {
  double s = 0.0;
  for (int i = 1; i < size(); ++i) {
    if (!(p[i] >= 0.0)) throw std::invalid_argument("Pauli rates must be non-negative");
    s += p[i];
  }
  if (s >= 1.0) throw std::invalid_argument("Pauli rates sum to " + std::to_string(s) + ", must be below 1");
  if (std::abs(p[0] - (1.0 - s)) > 1e-12) throw std::invalid_argument("identity weight must equal 1 - total rate");
}

std::string pauli_label(int qubits, int index) {
  static const char ops[] = "IXYZ";
  if (qubits == 1) return std::string(1, ops[index & 3]);
  return std::string{ops[(index >> 2) & 3], ops[index & 3]};
}

int pauli_index(const std::string& label) {
  if (label.size() == 1) return code_of(label[0]);
  if (label.size() == 2) return 4 * code_of(label[0]) + code_of(label[1]);
  throw std::invalid_argument("Pauli channel labels have one or two characters");
}

bool NoiseModel::noiseless() const {
  if (!two_qubit.trivial() || !one_qubit.trivial()) return false;
  for (const auto& kv : overrides)
    if (!kv.second.trivial()) return false;
  return true;
}

const PauliChannel& NoiseModel::channel(std::size_t location) const {
  auto it = overrides.find(location);
  return it == overrides.end() ? two_qubit : it->second;
}

void NoiseModel::validate() const {
  if (two_qubit.qubits != 2 || one_qubit.qubits != 1) throw std::invalid_argument("noise model channel arity mismatch");
  two_qubit.validate();
  one_qubit.validate();
  for (const auto& kv : overrides) {
    if (kv.second.qubits != 2) throw std::invalid_argument("overrides must be two-qubit channels");
    kv.second.validate();
  }
}

}  // namespace qcmc
