#include "qcmc/product_formula.hpp"

#include <cmath>
#include <stdexcept>

namespace qcmc {

RotationSequence RotationSequence::adjoint() const {
  RotationSequence a;
  a.direction = direction == Direction::Forward ? Direction::ReversedAdjoint : Direction::Forward;
  a.rotations.reserve(rotations.size());
  for (auto it = rotations.rbegin(); it != rotations.rend(); ++it) a.rotations.push_back({it->axis, -it->angle});
  return a;
}

RotationSequence& RotationSequence::then(const RotationSequence& later) {
  rotations.insert(rotations.end(), later.rotations.begin(), later.rotations.end());
  return *this;
}

SuzukiConstants suzuki_constants(int m, int r) {
  if (m < 1 || r < 1) throw std::invalid_argument("suzuki_constants needs m >= 1 and r >= 1");
  SuzukiConstants c;
  c.m = m;
  c.r = r;
  auto p_of = [r](int denom) { return 1.0 / (2.0 * r - std::pow(2.0 * r, 1.0 / denom)); };
  c.p = p_of(2 * m + 1);
  c.p_order = m > 1 ? p_of(2 * m - 1) : 0.0;
  double prod = 1.0, prod_order = 1.0;
  for (int k = 2; k <= m; ++k) {
    prod *= 4.0 * r * p_of(2 * k + 1) - 1.0;
    prod_order *= 4.0 * r * p_of(2 * k - 1) - 1.0;
  }
  c.lambda = 1.0 + prod;
  c.lambda_order = 1.0 + prod_order;
  return c;
}

double lambda_for_order(int l, int r) {
  if (l < 0) throw std::invalid_argument("negative order");
  if (l == 0) return 1.0;
  if (l <= 2) return 2.0;
  if (l % 2) throw std::invalid_argument("odd orders above 1 have no product formula");
  return suzuki_constants(l / 2, r).lambda;
}

RotationSequence first_order_sequence(const Hamiltonian& h, double dt) {
  RotationSequence s;
  s.rotations.reserve(h.size());
  for (const auto& t : h.terms()) s.rotations.push_back({t.pauli, t.coeff * dt});
  return s;
}

namespace {

RotationSequence s_sequence(const Hamiltonian& h, double dt, int m, int r, bool printed);

RotationSequence k_impl(const Hamiltonian& h, double dt, int m, int r, bool printed) {
  if (m == 1) return first_order_sequence(h, dt / 2.0);
  auto c = suzuki_constants(m, r);
  double p = printed ? c.p : c.p_order;
  RotationSequence out;
  auto inner = s_sequence(h, p * dt, m - 1, r, printed);
  for (int k = 0; k < r; ++k) out.then(inner);
  out.then(k_impl(h, (1.0 - 2.0 * r * p) * dt, m - 1, r, printed));
  return out;
}

RotationSequence s_sequence(const Hamiltonian& h, double dt, int m, int r, bool printed) {
  auto out = k_impl(h, dt, m, r, printed);
  out.then(k_impl(h, -dt, m, r, printed).adjoint());
  out.direction = RotationSequence::Direction::Forward;
  return out;
}

}  // namespace

RotationSequence k_sequence(const Hamiltonian& h, double dt, int m, int r, bool printed_exponent) {
  if (m < 1 || r < 1) throw std::invalid_argument("k_sequence needs m >= 1 and r >= 1");
  return k_impl(h, dt, m, r, printed_exponent);
}

RotationSequence higher_order_sequence(const Hamiltonian& h, double dt, int m, int r, bool printed_exponent) {
  if (m < 1 || r < 1) throw std::invalid_argument("higher_order_sequence needs m >= 1 and r >= 1");
  return s_sequence(h, dt, m, r, printed_exponent);
}

}  // namespace qcmc
