#pragma once

// Dense references for sampled traces. Only the library's data types are
// used; every matrix is rebuilt from Kronecker products and expm.

#include "oracles.hpp"
#include "qcmc/hamiltonian.hpp"
#include "qcmc/sampler.hpp"

namespace oracle {

inline Mat op_matrix(const qcmc::CorrectionOp& w, int n) {
  const cplx i(0, 1);
  switch (w.kind) {
    case qcmc::CorrectionOp::Kind::Identity: return Mat::Identity(1 << n, 1 << n);
    case qcmc::CorrectionOp::Kind::Pauli: return kron_literal(w.pauli.to_string());
    default: return expm(-i * double(w.sign) * w.phi * kron_literal(w.pauli.to_string()));
  }
}

// Element 0 applied first.
inline Mat seq_matrix(const qcmc::RotationSequence& s, int n) {
  const cplx i(0, 1);
  Mat u = Mat::Identity(1 << n, 1 << n);
  for (const auto& r : s.rotations) u = expm(-i * r.angle * r.axis.phase() * kron_literal(r.axis.canonical().to_string())) * u;
  return u;
}

inline Mat hamiltonian(const qcmc::Hamiltonian& h) {
  Mat m = Mat::Zero(1 << h.n(), 1 << h.n());
  for (const auto& t : h.terms()) m += t.coeff * kron_literal(t.pauli.to_string());
  return m;
}

// Product state, character a-1 for qubit a.
inline Vec product_state(const std::string& chars) {
  const double r = 1.0 / std::sqrt(2.0);
  Vec v = Vec::Ones(1);
  for (char c : chars) {
    Vec q(2);
    switch (c) {
      case '0': q << 1, 0; break;
      case '1': q << 0, 1; break;
      case '+': q << r, r; break;
      default: q << r, -r; break;
    }
    Vec next = Eigen::kroneckerProduct(q, v);
    v = next;
  }
  return v;
}

// U(s) = prod_i K_L W_i K_R, step 0 applied first.
inline Mat trace_unitary(const qcmc::SampleTrace& t, const qcmc::StepSampler& s, bool backward) {
  const int n = s.hamiltonian().n();
  const Mat kr = seq_matrix(s.right_block(), n), kl = seq_matrix(s.left_block(), n);
  Mat u = Mat::Identity(1 << n, 1 << n);
  for (int i = 0; i < t.steps(); ++i) u = kl * op_matrix(backward ? t.backward(i) : t.forward(i), n) * kr * u;
  return u;
}

// <psi_f| U(s')^dagger O U(s) |psi_i>
inline cplx trace_amplitude(const qcmc::SampleTrace& t, const qcmc::StepSampler& s, const Vec& psi_i, const Vec& psi_f,
                            const Mat& O) {
  Vec a = O * trace_unitary(t, s, false) * psi_i;
  Vec b = trace_unitary(t, s, true) * psi_f;
  return b.dot(a);
}

}  // namespace oracle
