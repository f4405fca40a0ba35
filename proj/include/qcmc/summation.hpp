#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qcmc/hamiltonian.hpp"
#include "qcmc/product_formula.hpp"

namespace qcmc {

enum class Flavor { POE, LOR };

// How C_L is obtained: closed-form bound, its simplified version (orders 1
// and 2 only), or the computed sum of |alpha_u|.
enum class LeadingMode { TableBound, SimplifiedBound, Instance };

std::string to_string(Flavor f);
std::string to_string(LeadingMode m);

struct LeadingTerm {
  double alpha;
  PauliString tau;
};

// L = sum_u alpha_u tau_u, terms sorted by literal.
struct LeadingOrderExpansion {
  std::vector<LeadingTerm> terms;

  double c_l() const;
  PauliSum as_sum(int n) const;
};

struct CorrectionSeries {
  int order = 0;
  double dt = 0.0;
  // orders[k] is the total-order-k part of V_l(dt).
  std::vector<PauliSum> orders;
  LeadingOrderExpansion leading;
  // Sum of orders 2l+2 .. k_max.
  PauliSum high;
};

// Symbolic expansion of V_0 = e^{-iH dt}, V_1 = e^{-iH dt} S1(dt)^dagger or
// V_2 = K2(-dt) e^{-iH dt} K2(dt)^dagger, truncated at total order k_max.
CorrectionSeries taylor_correction_series(const Hamiltonian& h, double dt, int l, int k_max,
                                          std::size_t term_ceiling = 4'000'000);

// sum_{k > k_last} y^k / k!
double taylor_tail(double y, int k_last);

struct Normalization {
  double c_l = 0.0;
  double c_t = 0.0;
  double c_a = 1.0;
};

// Closed-form leading-order bound for order l in {0, 1, 2} or even l.
double table_leading_bound(int l, double x, bool simplified = false, int r = 1);
double table_high_order(int l, double x, int r = 1);
double combine_normalization(Flavor f, double c_l, double c_t);

// `instance_c_l` is used only in Instance mode.
Normalization normalization_factors(Flavor f, int l, double h_tot, double dt, LeadingMode mode,
                                    double instance_c_l = 0.0, int r = 1);

struct RotationTerm {
  double beta;
  int sign;
  PauliString tau;
};

// 1 - iL = sum_u beta_u e^{-i sign_u phi tau_u}. Empty terms mean L = 0 and
// the bare identity carries weight 1.
struct RotationForm {
  double phi = 0.0;
  std::vector<RotationTerm> terms;

  double total_weight() const;
};

RotationForm to_rotation_form(const LeadingOrderExpansion& leading);

// V_1 = sum_sigma (a_sigma - i b_sigma) sigma from dense matrices.
PauliSum exact_correction_expansion(const Hamiltonian& h, double dt, double tol = 1e-15);

// V_1 = sum_{sigma != 1} (a_sigma sigma + beta_sigma e^{-i sgn(b_sigma) phi sigma}).
struct CustomLorFormula {
  std::vector<LeadingTerm> pauli_terms;
  RotationForm rotations;
  double a_identity = 1.0;
  double c_total = 1.0;
  bool degenerate = false;
};

CustomLorFormula custom_lor_formula(const PauliSum& expansion, double tol = 1e-14);

enum class FormulaKind { Taylor, ExactLor };

struct FormulaSpec {
  FormulaKind kind = FormulaKind::Taylor;
  Flavor flavor = Flavor::POE;
  int order = 0;
  double dt = 0.0;
  double h_tot = 0.0;
  LeadingMode mode = LeadingMode::Instance;
  LeadingOrderExpansion leading;
  double c_l = 0.0;
  double c_t = 0.0;
  double c_a = 1.0;
  double phi = 0.0;
  // Filled for FormulaKind::ExactLor.
  CustomLorFormula custom;

  std::string name() const;
};

// Sampling-ready Taylor formula with instance C_L.
FormulaSpec make_formula(const Hamiltonian& h, Flavor flavor, int order, double dt);
// First-order LOR built from the exact Pauli expansion of V_1.
FormulaSpec make_exact_lor_formula(const Hamiltonian& h, double dt);

}  // namespace qcmc
