#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qcmc/estimator.hpp"
#include "qcmc/io.hpp"

namespace qcmc {

struct ExperimentConfig {
  Hamiltonian h;
  // Set when the model was given as a lattice.
  std::optional<LatticeSpec> lattice;
  FormulaChoice formula;
  std::vector<double> times;
  // Exactly one of N, dt.
  std::optional<int> N;
  std::optional<double> dt;
  StateSpec psi_i;
  StateSpec psi_f;
  std::string observable;
  RunConfig run;
  std::optional<NoiseModel> noise;
  bool exact_reference = true;

  int steps_for(double t) const;
  Problem problem() const;
  // Self-contained form: the Hamiltonian and noise are inlined.
  json to_json() const;
};

// Relative paths inside the config resolve against `base_dir`.
ExperimentConfig parse_experiment(const json& j, const std::string& base_dir = ".");
ExperimentConfig load_experiment(const std::string& path);

// t,re,im,stderr_re,stderr_im,phase_avg_re,phase_avg_im,C_A,N,N_s,M_s,seed,exact_re,exact_im
std::string csv_header();
std::string csv_row(double t, const Estimate& e, std::uint64_t seed, std::optional<cplx> exact);
// 12 significant digits.
std::string fmt(double v);

int run_cli(int argc, char** argv);

}  // namespace qcmc
