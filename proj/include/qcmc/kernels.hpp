#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "qcmc/pauli.hpp"

namespace qcmc {

using Amplitudes = std::vector<cplx>;
// Row-major 2x2 matrix {u00, u01, u10, u11}.
using Mat2 = std::array<cplx, 4>;

namespace mat2 {
Mat2 identity();
Mat2 hadamard();
Mat2 pauli_x();
Mat2 pauli_y();
Mat2 pauli_z();
Mat2 s_gate();
Mat2 s_dagger();
Mat2 phase(cplx zeta);
// e^{-i theta Z}
Mat2 rz(double theta);
Mat2 multiply(const Mat2& a, const Mat2& b);
Mat2 adjoint(const Mat2& a);
}  // namespace mat2

// Statevector kernels. Bit positions index the amplitude array directly.
// A Pauli is given by masks plus its phase exponent, with the string's
// i^{|x&z|} factor applied inside. `ctrl` < 0 means uncontrolled; otherwise
// the kernel acts only where bit `ctrl` equals `ctrl_value`.
//
// `serial` is the plain reference; `omp` is the in-place parallel version.
namespace kernels {

struct PauliMask {
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  int phase_exp = 0;
};

// Masks of a system Pauli with qubit a at bit (a - 1 + offset).
PauliMask mask_of(const PauliString& p, int offset);

namespace serial {
void apply_1q(Amplitudes& psi, int target, const Mat2& u, int ctrl = -1, int ctrl_value = 1);
void apply_cnot(Amplitudes& psi, int control, int target);
void apply_pauli(Amplitudes& psi, const PauliMask& p, int ctrl = -1, int ctrl_value = 1);
void apply_pauli_rotation(Amplitudes& psi, const PauliMask& p, double angle, int ctrl = -1, int ctrl_value = 1);
double expect_pauli(const Amplitudes& psi, const PauliMask& p);
}  // namespace serial

namespace omp {
void apply_1q(Amplitudes& psi, int target, const Mat2& u, int ctrl = -1, int ctrl_value = 1);
void apply_cnot(Amplitudes& psi, int control, int target);
void apply_pauli(Amplitudes& psi, const PauliMask& p, int ctrl = -1, int ctrl_value = 1);
void apply_pauli_rotation(Amplitudes& psi, const PauliMask& p, double angle, int ctrl = -1, int ctrl_value = 1);
double expect_pauli(const Amplitudes& psi, const PauliMask& p);
}  // namespace omp

// Arrays below this size skip the parallel region.
constexpr std::size_t kParallelThreshold = std::size_t(1) << 14;

}  // namespace kernels
}  // namespace qcmc
