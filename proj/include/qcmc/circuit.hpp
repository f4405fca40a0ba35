#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qcmc/dense.hpp"
#include "qcmc/kernels.hpp"
#include "qcmc/noise.hpp"
#include "qcmc/rng.hpp"
#include "qcmc/sampler.hpp"

namespace qcmc {

// Register layout: ancilla at bit 0, system qubit a at bit a.
enum class Topology { AllToAll, Linear };
enum class CircuitLayout { Compact, ForwardBackward };
enum class Backend { Serial, Parallel };

std::string to_string(Topology t);
Topology parse_topology(const std::string& s);

struct Gate {
  enum class Kind { OneQubit, Cnot, Rotation, ControlledDense, NoiseSite };

  Kind kind = Kind::OneQubit;
  // OneQubit: target, optional control. Cnot: control -> target.
  // NoiseSite: the qubit pair (control, target) hit by the modelled CNOT.
  int target = -1;
  int control = -1;
  int ctrl_value = 1;
  Mat2 u{};
  // Rotation: e^{-i angle P} on the full register, uncontrolled.
  kernels::PauliMask mask{};
  double angle = 0.0;
  // ControlledDense: system unitary applied where the ancilla equals ctrl_value.
  std::shared_ptr<const Mat> dense;
  std::string label;

  static Gate one_qubit(int target, const Mat2& u, std::string label, int control = -1, int ctrl_value = 1);
  static Gate cnot(int control, int target);
  static Gate rotation(const PauliString& axis, double angle);
  static Gate controlled_dense(std::shared_ptr<const Mat> u, int ctrl_value, std::string label);
  static Gate noise_site(int a, int b);

  bool is_noise_location() const { return kind == Kind::Cnot || kind == Kind::NoiseSite; }
};

struct Decomposition {
  std::vector<Gate> gates;
  int cnots = 0;
};

// Controlled-W with the control on the ancilla at `ctrl_value`. Pauli
// corrections use the CNOT fan-out (all-to-all) or the chain sweep onto
// qubit 1 (linear); rotations conjugate a controlled single-qubit rotation.
Decomposition decompose_controlled_correction(const CorrectionOp& w, int ctrl_value, Topology topology);
// W0 on ancilla |0>, W1 on |1>. Two Paulis merge into one controlled Pauli.
Decomposition decompose_controlled_pair(const CorrectionOp& w0, const CorrectionOp& w1, Topology topology, bool merge = true);
// Per-step maxima: POE n / 4n-3, LOR 4n / 8n-4.
int max_correction_cnots(bool rotation, Topology topology, int n);

// Product state from per-qubit characters 0, 1, +, -, or a dense vector.
struct StateSpec {
  std::string product;
  std::optional<Vec> dense;

  static StateSpec zeros(int n) { return {std::string(n, '0'), std::nullopt}; }
  static StateSpec from_product(std::string chars);
  static StateSpec from_dense(const Vec& v);
  static StateSpec from_basis(const BasisState& s);

  int n() const;
  bool is_product() const { return !dense.has_value(); }
  bool is_basis() const;
  // System-only amplitudes, qubit a at bit a-1.
  Amplitudes amplitudes() const;
};

// Unitary observable: a Pauli with any phase, or a dense system matrix.
struct Observable {
  std::optional<PauliString> pauli;
  std::shared_ptr<const Mat> dense;

  static Observable from_pauli(const PauliString& p);
  static Observable from_dense(const Mat& u);
  int n() const;
};

struct CircuitOptions {
  Topology topology = Topology::AllToAll;
  bool merge_pairs = true;
  // Modelled CNOTs per S1 block; negative keeps two per ladder link.
  int s1_noise_sites = -1;
};

struct CircuitSpec {
  int n = 0;
  Topology topology = Topology::AllToAll;
  CircuitLayout layout = CircuitLayout::Compact;
  std::vector<Gate> gates;
  // Explicit CNOT gates (corrections and observable).
  int cnot_count = 0;
  int s1_blocks = 0;
  // Modelled CNOTs inside S1 blocks.
  int s1_noise_sites = 0;
  // Largest per-step correction CNOT count.
  int max_step_cnots = 0;
  // Gate indices of two-qubit noise locations, in order.
  std::vector<std::size_t> noise_locations;

  int qubits() const { return n + 1; }
  int total_cnots() const { return cnot_count + s1_noise_sites; }
  std::string dump() const;
};

CircuitSpec build_compact_circuit(const SampleTrace& trace, const StepSampler& sampler, const StateSpec& psi_i,
                                  const StateSpec& psi_f, const Observable& obs, const CircuitOptions& opt = {});
CircuitSpec build_forward_backward_circuit(const SampleTrace& trace, const StepSampler& sampler, const StateSpec& psi_i,
                                           const StateSpec& psi_f, const Observable& obs, const CircuitOptions& opt = {});

void apply_gate(Amplitudes& psi, const Gate& g, Backend backend = Backend::Parallel);
Amplitudes initial_register(int n);
Amplitudes simulate(const CircuitSpec& c, Backend backend = Backend::Parallel);

// Register-wide Pauli inserted after gate `gate`.
struct Insertion {
  std::size_t gate;
  kernels::PauliMask mask;
};

// Pauli index per the channel convention on register bits (a, b).
kernels::PauliMask pair_pauli_mask(int a, int b, int index);
kernels::PauliMask single_pauli_mask(int a, int index);

// One trajectory of the stochastic Pauli channel; sorted by gate.
std::vector<Insertion> sample_noise(const CircuitSpec& c, const NoiseModel& noise, Rng& rng);

// Re-runs a fixed circuit with Pauli insertions, restarting from cached
// intermediate states.
class TrajectorySimulator {
 public:
  explicit TrajectorySimulator(CircuitSpec c, Backend backend = Backend::Parallel);

  const CircuitSpec& circuit() const { return c_; }
  const Amplitudes& noiseless() const { return final_; }
  Amplitudes run(std::vector<Insertion> insertions) const;

 private:
  CircuitSpec c_;
  Backend backend_;
  std::size_t stride_ = 1;
  std::vector<Amplitudes> checkpoints_;
  Amplitudes final_;
};

struct Bloch {
  double x = 0.0, y = 0.0, z = 0.0;
};

// Reduced ancilla Bloch vector.
Bloch ancilla_bloch(const Amplitudes& psi);
// Ancilla Bloch vector conditioned on the system register reading |0..0>.
Bloch postselected_bloch(const Amplitudes& psi, double* success = nullptr);
// Compact: X - iY. Forward-backward: X + iY.
cplx amplitude_from_bloch(CircuitLayout layout, const Bloch& b);
// Measurement angles giving Re and Im of e^{i theta} A as cos(a) X + sin(a) Y means.
std::pair<double, double> basis_angles(CircuitLayout layout, double theta);
inline double basis_mean(const Bloch& b, double angle) { return std::cos(angle) * b.x + std::sin(angle) * b.y; }

// M_s outcomes of cos(a) X + sin(a) Y on the ancilla, one trajectory per shot.
std::vector<int> run_shots(const TrajectorySimulator& sim, double basis_angle, int shots, const NoiseModel* noise, Rng& rng);

}  // namespace qcmc
