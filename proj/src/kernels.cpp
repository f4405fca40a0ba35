#include "qcmc/kernels.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace qcmc {

namespace mat2 {
Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
Mat2 hadamard() {
  const double r = 1.0 / std::sqrt(2.0);
  return {r, r, r, -r};
}
Mat2 pauli_x() { return {0.0, 1.0, 1.0, 0.0}; }
Mat2 pauli_y() { return {0.0, cplx(0, -1), cplx(0, 1), 0.0}; }
Mat2 pauli_z() { return {1.0, 0.0, 0.0, -1.0}; }
Mat2 s_gate() { return {1.0, 0.0, 0.0, cplx(0, 1)}; }
Mat2 s_dagger() { return {1.0, 0.0, 0.0, cplx(0, -1)}; }
Mat2 phase(cplx zeta) { return {1.0, 0.0, 0.0, zeta}; }
Mat2 rz(double theta) { return {std::polar(1.0, -theta), 0.0, 0.0, std::polar(1.0, theta)}; }
Mat2 multiply(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}
Mat2 adjoint(const Mat2& a) { return {std::conj(a[0]), std::conj(a[2]), std::conj(a[1]), std::conj(a[3])}; }
}  // namespace mat2

namespace kernels {

PauliMask mask_of(const PauliString& p, int offset) {
  if (p.n() + offset > 62) throw std::invalid_argument("statevector kernels support at most 62 qubits");
  return {p.x_mask() << offset, p.z_mask() << offset, p.phase_exp()};
}

namespace {

inline bool active(std::uint64_t k, int ctrl, int ctrl_value) {
  return ctrl < 0 || static_cast<int>((k >> ctrl) & 1ULL) == ctrl_value;
}

inline int base_exp(const PauliMask& p) { return p.phase_exp + std::popcount(p.x & p.z); }

inline cplx pauli_phase(int base, std::uint64_t z, std::uint64_t k) { return i_pow(base + 2 * std::popcount(z & k)); }

void check_ctrl(const PauliMask& p, int ctrl) {
  if (ctrl >= 0 && ((p.x >> ctrl) & 1ULL)) throw std::invalid_argument("Pauli flips its own control bit");
}

void check_hermitian(const PauliMask& p) {
  if (p.phase_exp % 2) throw std::invalid_argument("rotation axis must be Hermitian");
}

inline std::uint64_t insert_zero(std::uint64_t m, int bit) {
  std::uint64_t low = m & ((1ULL << bit) - 1);
  return ((m >> bit) << (bit + 1)) | low;
}

}  // namespace

namespace serial {

void apply_1q(Amplitudes& psi, int t, const Mat2& u, int ctrl, int ctrl_value) {
  if (ctrl == t) throw std::invalid_argument("control equals target");
  Amplitudes out = psi;
  const std::uint64_t bit = 1ULL << t;
  for (std::uint64_t i = 0; i < psi.size(); ++i) {
    if ((i & bit) || !active(i, ctrl, ctrl_value)) continue;
    cplx a = psi[i], b = psi[i | bit];
    out[i] = u[0] * a + u[1] * b;
    out[i | bit] = u[2] * a + u[3] * b;
  }
  psi.swap(out);
}

void apply_cnot(Amplitudes& psi, int c, int t) {
  if (c == t) throw std::invalid_argument("control equals target");
  Amplitudes out(psi.size());
  for (std::uint64_t i = 0; i < psi.size(); ++i) out[i] = psi[((i >> c) & 1ULL) ? i ^ (1ULL << t) : i];
  psi.swap(out);
}

void apply_pauli(Amplitudes& psi, const PauliMask& p, int ctrl, int ctrl_value) {
  check_ctrl(p, ctrl);
  const int b = base_exp(p);
  Amplitudes out(psi.size());
  for (std::uint64_t k = 0; k < psi.size(); ++k) {
    if (active(k, ctrl, ctrl_value)) out[k ^ p.x] = pauli_phase(b, p.z, k) * psi[k];
    else out[k] = psi[k];
  }
  psi.swap(out);
}

void apply_pauli_rotation(Amplitudes& psi, const PauliMask& p, double angle, int ctrl, int ctrl_value) {
  check_ctrl(p, ctrl);
  check_hermitian(p);
  const int b = base_exp(p);
  const double c = std::cos(angle), s = std::sin(angle);
  Amplitudes out(psi.size());
  for (std::uint64_t k = 0; k < psi.size(); ++k) out[k] = active(k, ctrl, ctrl_value) ? c * psi[k] : psi[k];
  for (std::uint64_t k = 0; k < psi.size(); ++k)
    if (active(k, ctrl, ctrl_value)) out[k ^ p.x] += cplx(0.0, -s) * pauli_phase(b, p.z, k) * psi[k];
  psi.swap(out);
}

double expect_pauli(const Amplitudes& psi, const PauliMask& p) {
  const int b = base_exp(p);
  cplx acc = 0.0;
  for (std::uint64_t k = 0; k < psi.size(); ++k) acc += std::conj(psi[k ^ p.x]) * pauli_phase(b, p.z, k) * psi[k];
  return acc.real();
}

}  // namespace serial

namespace omp {

void apply_1q(Amplitudes& psi, int t, const Mat2& u, int ctrl, int ctrl_value) {
  if (ctrl == t) throw std::invalid_argument("control equals target");
  const std::int64_t half = static_cast<std::int64_t>(psi.size() / 2);
  const std::uint64_t bit = 1ULL << t;
  cplx* a = psi.data();
#pragma omp parallel for if (psi.size() >= kParallelThreshold) schedule(static)
  for (std::int64_t m = 0; m < half; ++m) {
    std::uint64_t i = insert_zero(static_cast<std::uint64_t>(m), t);
    if (!active(i, ctrl, ctrl_value)) continue;
    cplx x0 = a[i], x1 = a[i | bit];
    a[i] = u[0] * x0 + u[1] * x1;
    a[i | bit] = u[2] * x0 + u[3] * x1;
  }
}

void apply_cnot(Amplitudes& psi, int c, int t) {
  if (c == t) throw std::invalid_argument("control equals target");
  const std::int64_t half = static_cast<std::int64_t>(psi.size() / 2);
  const std::uint64_t bit = 1ULL << t, cbit = 1ULL << c;
  cplx* a = psi.data();
#pragma omp parallel for if (psi.size() >= kParallelThreshold) schedule(static)
  for (std::int64_t m = 0; m < half; ++m) {
    std::uint64_t i = insert_zero(static_cast<std::uint64_t>(m), t);
    if (i & cbit) std::swap(a[i], a[i | bit]);
  }
}

void apply_pauli(Amplitudes& psi, const PauliMask& p, int ctrl, int ctrl_value) {
  check_ctrl(p, ctrl);
  const int b = base_exp(p);
  cplx* a = psi.data();
  if (p.x == 0) {
    const std::int64_t dim = static_cast<std::int64_t>(psi.size());
#pragma omp parallel for if (psi.size() >= kParallelThreshold) schedule(static)
    for (std::int64_t k = 0; k < dim; ++k)
      if (active(static_cast<std::uint64_t>(k), ctrl, ctrl_value)) a[k] *= pauli_phase(b, p.z, static_cast<std::uint64_t>(k));
    return;
  }
  const int hb = 63 - std::countl_zero(p.x);
  const std::int64_t half = static_cast<std::int64_t>(psi.size() / 2);
#pragma omp parallel for if (psi.size() >= kParallelThreshold) schedule(static)
  for (std::int64_t m = 0; m < half; ++m) {
    std::uint64_t i = insert_zero(static_cast<std::uint64_t>(m), hb);
    if (!active(i, ctrl, ctrl_value)) continue;
    std::uint64_t j = i ^ p.x;
    cplx ai = a[i], aj = a[j];
    a[j] = pauli_phase(b, p.z, i) * ai;
    a[i] = pauli_phase(b, p.z, j) * aj;
  }
}

void apply_pauli_rotation(Amplitudes& psi, const PauliMask& p, double angle, int ctrl, int ctrl_value) {
  check_ctrl(p, ctrl);
  check_hermitian(p);
  const int b = base_exp(p);
  const double c = std::cos(angle), s = std::sin(angle);
  cplx* a = psi.data();
  if (p.x == 0) {
    // Diagonal: phase e^{-i angle (+-1)}.
    const cplx plus = std::polar(1.0, -angle), minus = std::polar(1.0, angle);
    const bool flip = b % 4 == 2;
    const std::int64_t dim = static_cast<std::int64_t>(psi.size());
#pragma omp parallel for if (psi.size() >= kParallelThreshold) schedule(static)
    for (std::int64_t k = 0; k < dim; ++k) {
      if (!active(static_cast<std::uint64_t>(k), ctrl, ctrl_value)) continue;
      bool odd = (std::popcount(p.z & static_cast<std::uint64_t>(k)) & 1) != flip;
      a[k] *= odd ? minus : plus;
    }
    return;
  }
  const int hb = 63 - std::countl_zero(p.x);
  const std::int64_t half = static_cast<std::int64_t>(psi.size() / 2);
  const cplx ms(0.0, -s);
#pragma omp parallel for if (psi.size() >= kParallelThreshold) schedule(static)
  for (std::int64_t m = 0; m < half; ++m) {
    std::uint64_t i = insert_zero(static_cast<std::uint64_t>(m), hb);
    if (!active(i, ctrl, ctrl_value)) continue;
    std::uint64_t j = i ^ p.x;
    cplx ai = a[i], aj = a[j];
    a[i] = c * ai + ms * pauli_phase(b, p.z, j) * aj;
    a[j] = c * aj + ms * pauli_phase(b, p.z, i) * ai;
  }
}

double expect_pauli(const Amplitudes& psi, const PauliMask& p) {
  const int b = base_exp(p);
  const std::int64_t dim = static_cast<std::int64_t>(psi.size());
  const cplx* a = psi.data();
  double re = 0.0;
#pragma omp parallel for if (psi.size() >= kParallelThreshold) reduction(+ : re) schedule(static)
  for (std::int64_t k = 0; k < dim; ++k) {
    std::uint64_t kk = static_cast<std::uint64_t>(k);
    re += (std::conj(a[kk ^ p.x]) * pauli_phase(b, p.z, kk) * a[kk]).real();
  }
  return re;
}

}  // namespace omp
}  // namespace kernels
}  // namespace qcmc
