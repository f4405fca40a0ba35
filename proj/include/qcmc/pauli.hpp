#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/container/small_vector.hpp>

namespace qcmc {

using cplx = std::complex<double>;
using Words = boost::container::small_vector<std::uint64_t, 1>;

// Exact i^k, k taken mod 4.
cplx i_pow(int k);
inline int mod4(int k) { return ((k % 4) + 4) % 4; }

// Computational basis state. Qubits are 1-based; qubit a is bit (a-1).
class BasisState {
 public:
  BasisState() = default;
  explicit BasisState(int n);
  // "0110": leftmost character is qubit 1.
  static BasisState parse(std::string_view bits);
  static BasisState from_index(int n, std::uint64_t index);

  int n() const { return n_; }
  bool get(int q) const;
  void set(int q, bool v);
  void flip(const Words& mask);
  const Words& words() const { return bits_; }
  // Only valid for n <= 64.
  std::uint64_t index() const { return bits_.empty() ? 0 : bits_[0]; }
  std::string to_string() const;

  bool operator==(const BasisState& o) const { return n_ == o.n_ && bits_ == o.bits_; }

 private:
  int n_ = 0;
  Words bits_;
};

struct BasisStateHash {
  std::size_t operator()(const BasisState& s) const;
};

// i^phase_exp * prod_a i^{x_a z_a} X^{x_a} Z^{z_a}.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(int n);
  // "XIZY" with optional prefix "+", "-", "+i", "-i", "i". Leftmost is qubit 1.
  static PauliString parse(std::string_view literal);
  static PauliString single(int n, int qubit, char op);
  static PauliString from_masks(int n, std::uint64_t x, std::uint64_t z, int phase_exp = 0);

  int n() const { return n_; }
  int phase_exp() const { return phase_; }
  cplx phase() const { return i_pow(phase_); }
  const Words& x() const { return x_; }
  const Words& z() const { return z_; }
  bool x_bit(int q) const;
  bool z_bit(int q) const;
  char op(int q) const;
  void set_op(int q, char op);

  PauliString canonical() const;
  PauliString with_phase(int k) const;
  PauliString adjoint() const;
  bool is_identity() const;
  bool is_hermitian() const { return phase_ % 2 == 0; }
  int weight() const;
  std::vector<int> support() const;
  std::vector<std::uint8_t> x_string() const;
  bool commutes(const PauliString& o) const;
  std::string to_string() const;

  PauliString& operator*=(const PauliString& o);
  friend PauliString operator*(PauliString a, const PauliString& b) { return a *= b; }
  bool operator==(const PauliString& o) const;
  bool operator!=(const PauliString& o) const { return !(*this == o); }
  std::size_t hash() const;

  std::uint64_t x_mask() const { return x_.empty() ? 0 : x_[0]; }
  std::uint64_t z_mask() const { return z_.empty() ? 0 : z_[0]; }

 private:
  int n_ = 0;
  int phase_ = 0;
  Words x_;
  Words z_;
};

struct PauliHash {
  std::size_t operator()(const PauliString& p) const { return p.hash(); }
};

PauliString multiply(const PauliString& p, const PauliString& q);

struct BasisImage {
  int phase_exp;
  BasisState state;
  cplx phase() const { return i_pow(phase_exp); }
};
BasisImage apply_to_basis(const PauliString& p, const BasisState& s);

// Linear combination of canonical Pauli strings.
class PauliSum {
 public:
  using Map = std::unordered_map<PauliString, cplx, PauliHash>;

  PauliSum() = default;
  explicit PauliSum(int n) : n_(n) {}

  int n() const { return n_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  const Map& terms() const { return terms_; }

  // Folds the phase of p into c.
  void add(const PauliString& p, cplx c);
  void add(const PauliSum& o, cplx scale = 1.0);
  cplx coeff(const PauliString& p) const;
  void prune(double tol = 0.0);
  PauliSum adjoint() const;
  PauliSum scaled(cplx s) const;
  // Right product by a single Pauli.
  PauliSum times(const PauliString& p) const;
  // Left product by a single Pauli.
  PauliSum left_times(const PauliString& p) const;
  double one_norm() const;
  // Terms sorted by literal, for deterministic iteration.
  std::vector<std::pair<PauliString, cplx>> sorted() const;

  friend PauliSum operator*(const PauliSum& a, const PauliSum& b);

 private:
  int n_ = 0;
  Map terms_;
};

}  // namespace qcmc
