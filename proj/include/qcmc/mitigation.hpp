#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <vector>

#include "qcmc/circuit.hpp"
#include "qcmc/noise.hpp"

namespace qcmc {

// Sign (+1/-1) of <sigma, tau> commutation for the channel index convention.
int pauli_commutation_sign(int qubits, int sigma, int tau);
// Pauli transfer eigenvalues lambda_tau = sum_sigma p_sigma (-1)^{<sigma,tau>}.
std::array<double, 16> pauli_eigenvalues(const PauliChannel& ch);

// Quasi-probability inverse of one Pauli channel.
struct QuasiProb {
  int qubits = 2;
  std::array<double, 16> q{};
  // sum |q_sigma|
  double norm = 1.0;
};

// Throws std::domain_error when some eigenvalue is below `min_eigenvalue`.
QuasiProb invert_pauli_channel(const PauliChannel& ch, double min_eigenvalue = 1e-9);

struct QuasiProbDecomp {
  QuasiProb default_inverse;
  std::map<std::size_t, QuasiProb> overrides;
  std::size_t locations = 0;
  // prod over locations of sum |q|
  double c_e = 1.0;

  const QuasiProb& at(std::size_t location) const;
};

QuasiProbDecomp build_quasi_prob(const CircuitSpec& c, const NoiseModel& noise);

// Correction Paulis for one PEC shot; `sign` receives the product of signs.
std::vector<Insertion> sample_pec(const CircuitSpec& c, const QuasiProbDecomp& d, Rng& rng, int* sign);

enum class ShotMode { Sampled, Expectation };

// Per-shot values C_E * sign * outcome. In Expectation mode each shot uses
// the trajectory's exact ancilla mean in place of the +-1 outcome.
std::vector<double> pec_evaluate(const TrajectorySimulator& sim, const NoiseModel& noise, const QuasiProbDecomp& d,
                                 double basis_angle, int shots, Rng& rng, ShotMode mode = ShotMode::Sampled);

struct PostselectedMeans {
  Bloch means;
  // Per basis X, Y, Z.
  std::array<long, 3> success{};
  std::array<long, 3> total{};
  bool failed = false;
  bool degenerate = false;

  double success_rate() const;
};

// Forward-backward circuits only. Sampled mode spends `shots` per Pauli
// basis; Expectation mode averages exact conditional means over `shots`
// noise trajectories.
PostselectedMeans postselect_measure(const TrajectorySimulator& sim, const NoiseModel* noise, int shots, Rng& rng,
                                     ShotMode mode = ShotMode::Sampled);
// (X + iY) / (1 + Z); flags degenerate when 1 + Z < 1e-6.
cplx postselected_amplitude(const Bloch& b, bool* degenerate = nullptr);

struct PostselectResult {
  cplx amplitude;
  PostselectedMeans means;
};
PostselectResult postselect_evaluate(const TrajectorySimulator& sim, const NoiseModel* noise, int shots, Rng& rng,
                                     ShotMode mode = ShotMode::Sampled);

struct Purified {
  Bloch means;
  bool degenerate = false;
};

// Bloch vectors outside the ball are rescaled onto it; the output is the
// Bloch vector of the dominant eigenvector.
Purified purify_ancilla(const Bloch& b);

}  // namespace qcmc
