#pragma once

#include <vector>

#include "qcmc/hamiltonian.hpp"

namespace qcmc {

// e^{-i angle axis}.
struct Rotation {
  PauliString axis;
  double angle;
};

// Rotations in application order: element 0 acts on the state first, so the
// operator is rotations[k-1] ... rotations[0].
struct RotationSequence {
  enum class Direction { Forward, ReversedAdjoint };

  std::vector<Rotation> rotations;
  Direction direction = Direction::Forward;

  std::size_t size() const { return rotations.size(); }
  bool empty() const { return rotations.empty(); }
  RotationSequence adjoint() const;
  // Appends `later`, which acts after this sequence.
  RotationSequence& then(const RotationSequence& later);
};

struct SuzukiConstants {
  int m = 1;
  int r = 1;
  // Closed forms with exponent 1/(2m+1).
  double p = 0.0;
  double lambda = 2.0;
  // Exponent 1/(2m-1), which cancels the leading error of S_{2m-2}.
  double p_order = 0.0;
  double lambda_order = 2.0;
};

SuzukiConstants suzuki_constants(int m, int r = 1);
// 1 for order 0, 2 for orders 1 and 2, suzuki_constants(l/2).lambda otherwise.
double lambda_for_order(int l, int r = 1);

// S1(dt) = e^{-i h_M s_M dt} ... e^{-i h_1 s_1 dt}.
RotationSequence first_order_sequence(const Hamiltonian& h, double dt);

// K_{2m}(dt); K_2(dt) = S1(dt/2).
RotationSequence k_sequence(const Hamiltonian& h, double dt, int m, int r = 1, bool printed_exponent = false);

// S_{2m}(dt) = K_{2m}(-dt)^dagger K_{2m}(dt).
RotationSequence higher_order_sequence(const Hamiltonian& h, double dt, int m, int r = 1, bool printed_exponent = false);

}  // namespace qcmc
