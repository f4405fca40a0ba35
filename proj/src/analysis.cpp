#include "qcmc/analysis.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/tools/minima.hpp>

namespace qcmc {

std::string GammaModel::name() const { return (flavor == Flavor::POE ? "poe" : "lor") + std::to_string(order); }

GammaModel parse_gamma_model(const std::string& formula, double eta, double eps) {
  if (formula.size() != 4 || !(formula.starts_with("poe") || formula.starts_with("lor")) || formula[3] < '0' || formula[3] > '2')
    throw std::invalid_argument("formula must be one of poe0, poe1, poe2, lor1, lor2");
  GammaModel m;
  m.flavor = formula.starts_with("poe") ? Flavor::POE : Flavor::LOR;
  m.order = formula[3] - '0';
  if (m.flavor == Flavor::LOR && m.order == 0) throw std::invalid_argument("LOR needs order 1 or 2");
  m.eta = eta;
  m.eps = eps;
  return m;
}

double c_a_minus_one(const GammaModel& m, double x) {
  const bool simp = m.simplified && (m.order == 1 || m.order == 2);
  const double c_l = table_leading_bound(m.order, x, simp);
  const double c_t = table_high_order(m.order, x);
  if (m.flavor == Flavor::POE) return c_l + c_t;
  return c_l * c_l / (1.0 + std::hypot(1.0, c_l)) + c_t;
}

double gamma(const GammaModel& m, double x) {
  if (!(x > 0)) throw std::invalid_argument("gamma needs x > 0");
  const double noise = 0.5 * std::log1p(2.0 * (m.blocks() + m.eta) * m.eps);
  return (std::log1p(c_a_minus_one(m, x)) + noise) / x;
}

LeadingBehaviour leading_behaviour(const GammaModel& m) {
  const int l = m.order;
  // Taylor tail of e^{2x} past order 2l+1 starts at (2x)^{2l+2}/(2l+2)!.
  const double tail = l == 0 ? 0.5 : std::pow(2.0, 2 * l + 2) / std::tgamma(2 * l + 3);
  if (l == 0) return {1, 1.0};
  const bool simp = m.simplified;
  if (m.flavor == Flavor::POE) {
    if (l == 1) return {2, simp ? 0.5 : 2.0};
    return {3, simp ? 1.0 / 18.0 : 8.0 / 6.0};
  }
  if (l == 1) return {4, (simp ? 0.125 : 2.0) + tail};
  return {6, (simp ? 1.0 / 648.0 : 32.0 / 36.0) + tail};
}

double optimal_x_closed_form(const GammaModel& m) {
  auto lb = leading_behaviour(m);
  if (lb.k <= 1) throw std::invalid_argument("zeroth-order formulas have no finite optimal step");
  return std::pow((m.blocks() + m.eta) * m.eps / ((lb.k - 1) * lb.xi), 1.0 / lb.k);
}

double optimal_dt(const GammaModel& m, double h_tot) {
  if (!(h_tot > 0)) throw std::invalid_argument("h_tot must be positive");
  return optimal_x_closed_form(m) / h_tot;
}

std::vector<double> log_grid(double lo, double hi, int per_decade) {
  if (!(lo > 0) || !(hi > lo) || per_decade < 1) throw std::invalid_argument("bad log grid");
  const int n = static_cast<int>(std::ceil(std::log10(hi / lo) * per_decade));
  std::vector<double> g(n + 1);
  for (int i = 0; i <= n; ++i) g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / n);
  return g;
}

GammaMin gamma_min(const GammaModel& m, double x_lo, double x_hi, int per_decade) {
  for (int widen = 0; widen < 4; ++widen) {
    auto grid = log_grid(x_lo, x_hi, per_decade);
    std::size_t best = 0;
    double gbest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      double g = gamma(m, grid[i]);
      if (g < gbest) gbest = g, best = i;
    }
    if (best == grid.size() - 1 && m.order > 0 && m.eps > 0) {
      x_hi *= 10.0;
      continue;
    }
    GammaMin r{grid[best], gbest, best == 0 || best == grid.size() - 1};
    if (!r.boundary) {
      auto f = [&](double x) { return gamma(m, x); };
      auto [x, g] = boost::math::tools::brent_find_minima(f, grid[best - 1], grid[best + 1], 52);
      if (g <= gbest) r.x_opt = x, r.gamma_min = g;
    }
    return r;
  }
  throw std::runtime_error("gamma has no minimum below x = " + std::to_string(x_hi));
}

std::vector<GammaRow> gamma_min_curve(const std::vector<GammaModel>& models, const std::vector<double>& eps_grid) {
  std::vector<GammaRow> rows;
  for (const auto& base : models) {
    for (double eps : eps_grid) {
      if (!(eps > 0) || eps > 0.3) throw std::invalid_argument("eps grid must lie in (0, 0.3]");
      GammaModel m = base;
      m.eps = eps;
      auto r = gamma_min(m);
      rows.push_back({m.name(), eps, r.x_opt, r.gamma_min});
    }
  }
  return rows;
}

PowerLaw fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("power-law fit needs two or more points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) throw std::invalid_argument("power-law fit needs positive data");
    double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
  }
  const double b = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {std::exp((sy - b * sx) / n), b};
}

Advantage advantage_report(double gamma_q, double gamma_c, double htot_t, const PowerLaw& fit) {
  Advantage a;
  a.factor = std::exp(4.0 * (gamma_c - gamma_q) * htot_t);
  a.crossover_eps = std::pow(gamma_c / fit.prefactor, 1.0 / fit.exponent);
  return a;
}

}  // namespace qcmc
