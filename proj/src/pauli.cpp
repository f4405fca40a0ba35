#include "qcmc/pauli.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace qcmc {

namespace {

int word_count(int n) { return (n + 63) / 64; }

void check_qubit(int n, int q) {
  if (q < 1 || q > n) throw std::out_of_range("qubit index " + std::to_string(q) + " outside 1.." + std::to_string(n));
}

std::size_t mix(std::size_t h, std::uint64_t v) {
  v *= 0x9E3779B97F4A7C15ULL;
  v ^= v >> 29;
  return h ^ (v + 0x9E3779B9 + (h << 6) + (h >> 2));
}

int popcount_and(const Words& a, const Words& b) {
  int c = 0;
  for (std::size_t w = 0; w < a.size(); ++w) c += std::popcount(a[w] & b[w]);
  return c;
}

}  // namespace

cplx i_pow(int k) {
  switch (mod4(k)) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

BasisState::BasisState(int n) : n_(n), bits_(word_count(n), 0) {
  if (n < 0) throw std::invalid_argument("negative qubit count");
}

BasisState BasisState::parse(std::string_view bits) {
  BasisState s(static_cast<int>(bits.size()));
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') s.set(static_cast<int>(i) + 1, true);
    else if (bits[i] != '0') throw std::invalid_argument("basis literal must contain only 0/1: " + std::string(bits));
  }
  return s;
}

BasisState BasisState::from_index(int n, std::uint64_t index) {
  if (n > 64) throw std::invalid_argument("from_index supports n <= 64");
  BasisState s(n);
  if (n > 0) s.bits_[0] = n == 64 ? index : (index & ((1ULL << n) - 1));
  return s;
}

bool BasisState::get(int q) const {
  check_qubit(n_, q);
  return (bits_[(q - 1) / 64] >> ((q - 1) % 64)) & 1ULL;
}

void BasisState::set(int q, bool v) {
  check_qubit(n_, q);
  auto bit = 1ULL << ((q - 1) % 64);
  if (v) bits_[(q - 1) / 64] |= bit;
  else bits_[(q - 1) / 64] &= ~bit;
}

void BasisState::flip(const Words& mask) {
  if (mask.size() != bits_.size()) throw std::invalid_argument("basis/mask dimension mismatch");
  for (std::size_t w = 0; w < bits_.size(); ++w) bits_[w] ^= mask[w];
}

std::string BasisState::to_string() const {
  std::string s(n_, '0');
  for (int q = 1; q <= n_; ++q)
    if (get(q)) s[q - 1] = '1';
  return s;
}

std::size_t BasisStateHash::operator()(const BasisState& s) const {
  std::size_t h = static_cast<std::size_t>(s.n());
  for (auto w : s.words()) h = mix(h, w);
  return h;
}

PauliString::PauliString(int n) : n_(n), x_(word_count(n), 0), z_(word_count(n), 0) {
  if (n < 0) throw std::invalid_argument("negative qubit count");
}

PauliString PauliString::parse(std::string_view lit) {
  int phase = 0;
  if (lit.starts_with("+i")) { phase = 1; lit.remove_prefix(2); }
  else if (lit.starts_with("-i")) { phase = 3; lit.remove_prefix(2); }
  else if (lit.starts_with("i")) { phase = 1; lit.remove_prefix(1); }
  else if (lit.starts_with("-")) { phase = 2; lit.remove_prefix(1); }
  else if (lit.starts_with("+")) { lit.remove_prefix(1); }
  if (lit.empty()) throw std::invalid_argument("empty Pauli literal");
  PauliString p(static_cast<int>(lit.size()));
  for (std::size_t i = 0; i < lit.size(); ++i) p.set_op(static_cast<int>(i) + 1, lit[i]);
  p.phase_ = phase;
  return p;
}

PauliString PauliString::single(int n, int qubit, char op) {
  PauliString p(n);
  p.set_op(qubit, op);
  return p;
}

PauliString PauliString::from_masks(int n, std::uint64_t x, std::uint64_t z, int phase_exp) {
  if (n > 64) throw std::invalid_argument("from_masks supports n <= 64");
  PauliString p(n);
  if (n > 0) {
    std::uint64_t m = n == 64 ? ~0ULL : ((1ULL << n) - 1);
    p.x_[0] = x & m;
    p.z_[0] = z & m;
  }
  p.phase_ = mod4(phase_exp);
  return p;
}

bool PauliString::x_bit(int q) const {
  check_qubit(n_, q);
  return (x_[(q - 1) / 64] >> ((q - 1) % 64)) & 1ULL;
}

bool PauliString::z_bit(int q) const {
  check_qubit(n_, q);
  return (z_[(q - 1) / 64] >> ((q - 1) % 64)) & 1ULL;
}

char PauliString::op(int q) const {
  bool x = x_bit(q), z = z_bit(q);
  if (x && z) return 'Y';
  if (x) return 'X';
  if (z) return 'Z';
  return 'I';
}

void PauliString::set_op(int q, char op) {
  check_qubit(n_, q);
  bool x = false, z = false;
  switch (op) {
    case 'I': break;
    case 'X': x = true; break;
    case 'Y': x = z = true; break;
    case 'Z': z = true; break;
    default: throw std::invalid_argument(std::string("bad Pauli character '") + op + "'");
  }
  auto w = (q - 1) / 64;
  auto bit = 1ULL << ((q - 1) % 64);
  x_[w] = x ? (x_[w] | bit) : (x_[w] & ~bit);
  z_[w] = z ? (z_[w] | bit) : (z_[w] & ~bit);
}

PauliString PauliString::canonical() const { return with_phase(0); }

PauliString PauliString::with_phase(int k) const {
  PauliString p = *this;
  p.phase_ = mod4(k);
  return p;
}

PauliString PauliString::adjoint() const {
  // Canonical strings are Hermitian, so only the phase conjugates.
  return with_phase(-phase_);
}

bool PauliString::is_identity() const {
  for (std::size_t w = 0; w < x_.size(); ++w)
    if (x_[w] | z_[w]) return false;
  return true;
}

int PauliString::weight() const {
  int c = 0;
  for (std::size_t w = 0; w < x_.size(); ++w) c += std::popcount(x_[w] | z_[w]);
  return c;
}

std::vector<int> PauliString::support() const {
  std::vector<int> s;
  for (int q = 1; q <= n_; ++q)
    if (x_bit(q) || z_bit(q)) s.push_back(q);
  return s;
}

std::vector<std::uint8_t> PauliString::x_string() const {
  std::vector<std::uint8_t> s(n_);
  for (int q = 1; q <= n_; ++q) s[q - 1] = x_bit(q);
  return s;
}

bool PauliString::commutes(const PauliString& o) const {
  if (o.n_ != n_) throw std::invalid_argument("Pauli dimension mismatch");
  return (popcount_and(x_, o.z_) + popcount_and(z_, o.x_)) % 2 == 0;
}

std::string PauliString::to_string() const {
  static const char* prefix[] = {"", "+i", "-", "-i"};
  std::string s = prefix[phase_];
  for (int q = 1; q <= n_; ++q) s.push_back(op(q));
  return s;
}

PauliString& PauliString::operator*=(const PauliString& o) {
  if (o.n_ != n_) throw std::invalid_argument("Pauli dimension mismatch: " + std::to_string(n_) + " vs " + std::to_string(o.n_));
  int e = phase_ + o.phase_;
  e += popcount_and(x_, z_) + popcount_and(o.x_, o.z_) + 2 * popcount_and(z_, o.x_);
  for (std::size_t w = 0; w < x_.size(); ++w) {
    x_[w] ^= o.x_[w];
    z_[w] ^= o.z_[w];
  }
  e -= popcount_and(x_, z_);
  phase_ = mod4(e);
  return *this;
}

bool PauliString::operator==(const PauliString& o) const {
  return n_ == o.n_ && phase_ == o.phase_ && x_ == o.x_ && z_ == o.z_;
}

std::size_t PauliString::hash() const {
  std::size_t h = static_cast<std::size_t>(n_) * 4 + static_cast<std::size_t>(phase_);
  for (std::size_t w = 0; w < x_.size(); ++w) {
    h = mix(h, x_[w]);
    h = mix(h, z_[w]);
  }
  return h;
}

PauliString multiply(const PauliString& p, const PauliString& q) { return p * q; }

BasisImage apply_to_basis(const PauliString& p, const BasisState& s) {
  if (p.n() != s.n()) throw std::invalid_argument("Pauli/basis dimension mismatch");
  int e = p.phase_exp() + popcount_and(p.x(), p.z()) + 2 * popcount_and(p.z(), s.words());
  BasisState out = s;
  out.flip(p.x());
  return {mod4(e), std::move(out)};
}

void PauliSum::add(const PauliString& p, cplx c) {
  if (n_ == 0 && terms_.empty()) n_ = p.n();
  if (p.n() != n_) throw std::invalid_argument("PauliSum dimension mismatch");
  if (c == cplx(0.0)) return;
  terms_[p.canonical()] += c * p.phase();
}

void PauliSum::add(const PauliSum& o, cplx scale) {
  for (const auto& [p, c] : o.terms_) add(p, c * scale);
}

cplx PauliSum::coeff(const PauliString& p) const {
  auto it = terms_.find(p.canonical());
  return it == terms_.end() ? cplx(0.0) : it->second * std::conj(p.phase());
}

void PauliSum::prune(double tol) {
  std::erase_if(terms_, [tol](const auto& kv) { return std::abs(kv.second) <= tol; });
}

PauliSum PauliSum::adjoint() const {
  PauliSum r(n_);
  for (const auto& [p, c] : terms_) r.terms_[p] = std::conj(c);
  return r;
}

PauliSum PauliSum::scaled(cplx s) const {
  PauliSum r(n_);
  if (s == cplx(0.0)) return r;
  for (const auto& [p, c] : terms_) r.terms_[p] = c * s;
  return r;
}

PauliSum PauliSum::times(const PauliString& q) const {
  PauliSum r(n_);
  r.terms_.reserve(terms_.size());
  for (const auto& [p, c] : terms_) r.add(p * q, c);
  return r;
}

PauliSum PauliSum::left_times(const PauliString& q) const {
  PauliSum r(n_);
  r.terms_.reserve(terms_.size());
  for (const auto& [p, c] : terms_) r.add(q * p, c);
  return r;
}

double PauliSum::one_norm() const {
  double s = 0.0;
  for (const auto& kv : terms_) s += std::abs(kv.second);
  return s;
}

std::vector<std::pair<PauliString, cplx>> PauliSum::sorted() const {
  std::vector<std::pair<PauliString, cplx>> v(terms_.begin(), terms_.end());
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first.to_string() < b.first.to_string(); });
  return v;
}

PauliSum operator*(const PauliSum& a, const PauliSum& b) {
  if (a.n() != b.n() && !a.empty() && !b.empty()) throw std::invalid_argument("PauliSum dimension mismatch");
  PauliSum r(a.n() ? a.n() : b.n());
  for (const auto& [p, c] : a.terms())
    for (const auto& [q, d] : b.terms()) r.add(p * q, c * d);
  return r;
}

}  // namespace qcmc
