#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qcmc/hamiltonian.hpp"
#include "qcmc/product_formula.hpp"
#include "qcmc/rng.hpp"
#include "qcmc/summation.hpp"

namespace qcmc {

struct CorrectionOp {
  enum class Kind { Identity, Pauli, Rotation };

  Kind kind = Kind::Identity;
  // Canonical. For Rotation the operator is e^{-i sign phi pauli}.
  PauliString pauli;
  int sign = 1;
  double phi = 0.0;

  static CorrectionOp identity(int n);
  static CorrectionOp from_pauli(const PauliString& p);
  static CorrectionOp rotation(int sign, double phi, const PauliString& axis);

  CorrectionOp adjoint() const;
  std::string to_string() const;
  static CorrectionOp parse(std::string_view literal);
};

enum class Branch { Leading, HighOrder };

struct StepDraw {
  CorrectionOp op;
  // Phase theta in quarter turns, mod 4.
  int quarter = 0;
  Branch branch = Branch::Leading;
};

struct SampleTrace {
  // Forward W_1..W_N followed by backward W'_1..W'_N.
  std::vector<CorrectionOp> W;
  int quarter = 0;

  int steps() const { return static_cast<int>(W.size() / 2); }
  double theta() const;
  cplx phase() const { return i_pow(quarter); }
  const CorrectionOp& forward(int i) const { return W[i]; }
  const CorrectionOp& backward(int i) const { return W[steps() + i]; }
};

int poisson(double x, Rng& rng);

struct HighOrderDraw {
  PauliString w;
  int quarter = 0;
  long iterations = 0;
};

// Rejection loop until the total order reaches 2l + 2.
class HighOrderSampler {
 public:
  HighOrderSampler() = default;
  HighOrderSampler(const Hamiltonian& h, double dt, int l);
  HighOrderDraw draw(Rng& rng, long max_iterations = 1'000'000) const;

 private:
  int n_ = 0;
  int l_ = 0;
  double rate_ = 0.0;
  double exp_rate_ = 1.0;
  std::vector<PauliString> sigma_;
  std::vector<int> sign_;
  std::vector<double> cumulative_;
  std::vector<double> side_rate_;
  std::vector<double> side_exp_;
};

HighOrderDraw sample_high_order_term(const Hamiltonian& h, double dt, int l, Rng& rng, long max_iterations = 1'000'000);

// One-step distribution prepared from a formula.
class StepSampler {
 public:
  struct Entry {
    double weight;
    CorrectionOp op;
    int quarter;
  };

  StepSampler(const Hamiltonian& h, const FormulaSpec& formula);

  StepDraw draw(Rng& rng) const;

  const Hamiltonian& hamiltonian() const { return h_; }
  const FormulaSpec& formula() const { return formula_; }
  const std::vector<Entry>& entries() const { return entries_; }
  // Sum of leading-entry weights, C_A - C_T.
  double leading_weight() const { return lead_total_; }
  double c_a() const { return lead_total_ + formula_.c_t; }
  // U(s) = K_L W K_R: K_R acts first.
  const RotationSequence& right_block() const { return right_; }
  const RotationSequence& left_block() const { return left_; }
  int blocks_per_step() const { return static_cast<int>(!right_.empty()) + static_cast<int>(!left_.empty()); }

 private:
  Hamiltonian h_;
  FormulaSpec formula_;
  HighOrderSampler high_;
  std::vector<Entry> entries_;
  std::vector<double> cumulative_;
  double lead_total_ = 0.0;
  RotationSequence right_, left_;
};

struct SamplerConfig {
  FormulaSpec formula;
  int N = 0;
  std::uint64_t seed = 0;
};

SampleTrace sam_gen(const StepSampler& sampler, int N, Rng& rng);
// Trace for one sample index, drawn from its own stream.
SampleTrace sam_gen(const StepSampler& sampler, const SamplerConfig& cfg, std::uint64_t sample_index);
StepDraw sam_gen_one_step(const StepSampler& sampler, Rng& rng);

// "index quarter W_1 ... W_2N".
std::string dump_trace(std::uint64_t index, const SampleTrace& t);

}  // namespace qcmc
