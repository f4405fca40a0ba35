#pragma once

#include <string>
#include <vector>

#include "qcmc/summation.hpp"

namespace qcmc {

// Variance rate gamma(x) = [ln C_A(x) + ln sqrt(1 + 2(g + eta) eps)] / x with
// x = h_tot dt and C_A from the closed-form bounds (simplified leading bounds for
// orders 1 and 2).
struct GammaModel {
  Flavor flavor = Flavor::LOR;
  int order = 2;
  // S1 blocks per step; negative means the order's default (0, 1, 2).
  int g = -1;
  double eta = 1.0;
  double eps = 0.0;
  // Error rate outside the time steps; enters only the prefactor.
  double eps_fixed = 0.0;
  bool simplified = true;

  int blocks() const { return g >= 0 ? g : order; }
  std::string name() const;
  // (1 + 2 eps')^2
  double variance_prefactor() const { return (1.0 + 2.0 * eps_fixed) * (1.0 + 2.0 * eps_fixed); }
};

GammaModel parse_gamma_model(const std::string& formula, double eta, double eps);

// C_A(x) - 1, accurate for tiny x.
double c_a_minus_one(const GammaModel& m, double x);
double gamma(const GammaModel& m, double x);

// C_A(x) = 1 + xi x^k + ...
struct LeadingBehaviour {
  int k = 1;
  double xi = 1.0;
};
LeadingBehaviour leading_behaviour(const GammaModel& m);

// [(g + eta) eps / ((k - 1) xi)]^{1/k} in units of x; throws for k = 1.
double optimal_x_closed_form(const GammaModel& m);
// Delta t_opt for a given h_tot.
double optimal_dt(const GammaModel& m, double h_tot);

struct GammaMin {
  double x_opt = 0.0;
  double gamma_min = 0.0;
  // No interior optimum (zeroth order or eps = 0).
  bool boundary = false;
};

// Log grid with `per_decade` points over [x_lo, x_hi], then Brent refinement.
GammaMin gamma_min(const GammaModel& m, double x_lo = 1e-4, double x_hi = 1.0, int per_decade = 200);

struct GammaRow {
  std::string formula;
  double eps;
  double x_opt;
  double gamma_min;
};

std::vector<GammaRow> gamma_min_curve(const std::vector<GammaModel>& models, const std::vector<double>& eps_grid);

// y = a x^b by least squares on logs.
struct PowerLaw {
  double prefactor = 0.0;
  double exponent = 0.0;
};
PowerLaw fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

struct Advantage {
  double factor = 1.0;
  double crossover_eps = 0.0;
};

// factor = e^{4 (gamma_c - gamma) h_tot t}; crossover eps = (gamma_c / a)^{1/b}.
Advantage advantage_report(double gamma, double gamma_c, double htot_t, const PowerLaw& fit);

std::vector<double> log_grid(double lo, double hi, int per_decade);

}  // namespace qcmc
