#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qcmc/circuit.hpp"
#include "qcmc/mitigation.hpp"
#include "qcmc/sampler.hpp"
#include "qcmc/summation.hpp"

namespace qcmc {

// Which summation formula a run samples from.
struct FormulaChoice {
  FormulaKind kind = FormulaKind::Taylor;
  Flavor flavor = Flavor::POE;
  int order = 0;

  // "poe0", "poe1", "poe2", "lor1", "lor2", "exact-lor1".
  static FormulaChoice parse(const std::string& s);
  std::string name() const;
};

FormulaSpec build_formula(const Hamiltonian& h, const FormulaChoice& choice, double dt);

struct Problem {
  Hamiltonian h;
  StateSpec psi_i;
  StateSpec psi_f;
  Observable obs;
};

// Direct evaluates each trace's amplitude on a system-only statevector and
// draws shots from it, which matches a noiseless compact circuit.
enum class EvalMode { Direct, Compact, ForwardBackward };
enum class Mitigation { None, Pec, Postselect, PostselectPurify };

std::string to_string(EvalMode m);
std::string to_string(Mitigation m);
EvalMode parse_eval_mode(const std::string& s);
Mitigation parse_mitigation(const std::string& s);

struct RunConfig {
  long N_s = 1000;
  int M_s = 1;
  std::uint64_t seed = 0;
  EvalMode mode = EvalMode::Direct;
  Mitigation mitigation = Mitigation::None;
  ShotMode shots = ShotMode::Sampled;
  CircuitOptions circuit;
  // 0 keeps the OpenMP default.
  int workers = 0;
  bool keep_samples = false;
};

struct SampleRecord {
  // a_R + i a_I before scaling.
  cplx value;
  // Noiseless e^{i theta} <psi_f|O_s|psi_i>.
  cplx exact;
};

struct Estimate {
  cplx A;
  double stderr_re = 0.0;
  double stderr_im = 0.0;
  cplx phase_average;
  // C_A^{2N}
  double scale = 1.0;
  double c_a = 1.0;
  int N = 0;
  long N_s = 0;
  int M_s = 0;
  // Per part (real and imaginary each).
  long shots = 0;
  // Mean C_E over samples under PEC, 1 otherwise.
  double mean_c_e = 1.0;
  double postselect_rate = 1.0;
  long postselect_failures = 0;
  std::vector<SampleRecord> samples;
};

// <psi_f| U_{s'}^dagger O U_s |psi_i> for one trace, without the phase.
cplx transition_amplitude(const SampleTrace& trace, const StepSampler& sampler, const Problem& p);

Estimate qcmc_run(const Problem& p, const FormulaChoice& formula, double t, int N, const RunConfig& cfg,
                  const NoiseModel* noise = nullptr);

// Zeroth-order POE by Pauli propagation on product states in a Pauli basis
// (0/1 or +/- per qubit, the same kind in both states); O must be a Pauli.
Estimate classical_run(const Problem& p, double t, int N, const RunConfig& cfg);
bool classical_supported(const Problem& p);

// Mean of the unit phases, zero amplitudes counted as 0.
cplx phase_average(const std::vector<cplx>& amplitudes);

// (2 C_A^{4N} - |A|^2) / M_tot.
double predict_variance(double c_a, int N, double m_tot, double abs_a);

// <psi_f| e^{iHt} O e^{-iHt} |psi_i> by dense diagonalization.
cplx exact_amplitude(const Problem& p, double t);

}  // namespace qcmc
