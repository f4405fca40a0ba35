#include "qcmc/summation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <stdexcept>

#include "qcmc/dense.hpp"

namespace qcmc {

std::string to_string(Flavor f) { return f == Flavor::POE ? "poe" : "lor"; }

std::string to_string(LeadingMode m) {
  switch (m) {
    case LeadingMode::TableBound: return "table";
    case LeadingMode::SimplifiedBound: return "simplified";
    default: return "instance";
  }
}

double LeadingOrderExpansion::c_l() const {
  double s = 0.0;
  for (const auto& t : terms) s += std::abs(t.alpha);
  return s;
}

PauliSum LeadingOrderExpansion::as_sum(int n) const {
  PauliSum s(n);
  for (const auto& t : terms) s.add(t.tau, t.alpha);
  return s;
}

namespace {

using Series = std::vector<PauliSum>;

void check_ceiling(const Series& s, std::size_t ceiling) {
  std::size_t total = 0;
  for (const auto& p : s) total += p.size();
  if (total > ceiling)
    throw std::length_error("correction series holds " + std::to_string(total) + " terms, above the ceiling of " +
                            std::to_string(ceiling) + "; reduce the term count or k_max");
}

// Multiplies the series by e^{i a sigma} on the right (left = false) or left.
Series times_exp(const Series& s, const PauliString& sigma, double a, bool left, double drop) {
  const int kmax = static_cast<int>(s.size()) - 1;
  std::vector<cplx> c(kmax + 1);
  c[0] = 1.0;
  for (int j = 1; j <= kmax; ++j) c[j] = c[j - 1] * cplx(0.0, a) / static_cast<double>(j);
  Series odd(kmax + 1);
  for (int k = 0; k <= kmax; ++k) odd[k] = left ? s[k].left_times(sigma) : s[k].times(sigma);
  Series out(kmax + 1, PauliSum(sigma.n()));
  for (int k = 0; k <= kmax; ++k) {
    for (int j = 0; j <= k; ++j) out[k].add(j % 2 ? odd[k - j] : s[k - j], c[j]);
    out[k].prune(drop);
  }
  return out;
}

}  // namespace

CorrectionSeries taylor_correction_series(const Hamiltonian& h, double dt, int l, int k_max, std::size_t term_ceiling) {
  if (l < 0 || l > 2) throw std::invalid_argument("symbolic correction series supports orders 0, 1, 2");
  if (k_max < 2 * l + 1) throw std::invalid_argument("k_max must reach the leading orders (>= 2l+1)");
  const int n = h.n();
  const double x = h.h_tot() * std::abs(dt);
  const double drop = 1e-19 * std::pow(std::max(x, 1e-300), k_max);

  // e^{-iH dt} order by order.
  PauliSum gen = h.as_sum().scaled(cplx(0.0, -dt));
  Series v(k_max + 1, PauliSum(n));
  v[0].add(PauliString(n), 1.0);
  for (int k = 1; k <= k_max; ++k) {
    v[k] = (v[k - 1] * gen).scaled(1.0 / k);
    v[k].prune(drop);
    check_ceiling(v, term_ceiling);
  }

  if (l == 1) {
    for (const auto& t : h.terms()) {
      v = times_exp(v, t.pauli, t.coeff * dt, false, drop);
      check_ceiling(v, term_ceiling);
    }
  } else if (l == 2) {
    for (const auto& t : h.terms()) {
      v = times_exp(v, t.pauli, t.coeff * dt / 2.0, false, drop);
      check_ceiling(v, term_ceiling);
    }
    for (const auto& t : h.terms()) {
      v = times_exp(v, t.pauli, t.coeff * dt / 2.0, true, drop);
      check_ceiling(v, term_ceiling);
    }
  }

  const double lam = l == 0 ? 1.0 : 2.0;
  double fact = 1.0;
  for (int k = 0; k <= k_max; ++k) {
    if (k > 0) fact *= k;
    v[k].prune(1e-14 * std::pow(lam * x, k) / fact);
  }

  CorrectionSeries out;
  out.order = l;
  out.dt = dt;
  PauliSum lead(n);
  for (int k = l + 1; k <= 2 * l + 1; ++k) lead.add(v[k], cplx(0.0, 1.0));
  const double herm_tol = 1e-10 * std::max(std::pow(lam * x, l + 1), 1e-300);
  for (const auto& [p, c] : lead.sorted()) {
    if (std::abs(c.imag()) > herm_tol)
      throw std::logic_error("leading-order part is not Hermitian at " + p.to_string());
    if (c.real() != 0.0) out.leading.terms.push_back({c.real(), p});
  }
  out.high = PauliSum(n);
  for (int k = 2 * l + 2; k <= k_max; ++k) out.high.add(v[k]);
  out.orders = std::move(v);
  return out;
}

double taylor_tail(double y, int k_last) {
  if (y < 0) throw std::invalid_argument("taylor_tail needs y >= 0");
  if (y == 0.0) return 0.0;
  double term = 1.0;
  for (int k = 1; k <= k_last + 1; ++k) term *= y / k;
  double sum = 0.0;
  for (int k = k_last + 1; k < k_last + 2000; ++k) {
    sum += term;
    if (term < 1e-18 * sum && k > y) break;
    term *= y / (k + 1);
  }
  return sum;
}

double table_leading_bound(int l, double x, bool simplified, int r) {
  switch (l) {
    case 0: return x;
    case 1: return simplified ? 0.5 * x * x + std::pow(2 * x, 3) / 6.0 : 0.5 * std::pow(2 * x, 2) + std::pow(2 * x, 3) / 6.0;
    case 2: return simplified ? std::pow(x, 3) / 18.0 + std::pow(2 * x, 5) / 120.0 : std::pow(2 * x, 3) / 6.0 + std::pow(2 * x, 5) / 120.0;
    default: break;
  }
  if (l % 2) throw std::invalid_argument("order must be 0, 1 or even");
  if (simplified) throw std::invalid_argument("simplified bound exists for orders 1 and 2 only");
  const int m = l / 2;
  const double lx = lambda_for_order(l, r) * x;
  double s = 0.0;
  for (int k = m; k <= 2 * m; ++k) s += std::pow(lx, 2 * k + 1) / std::tgamma(2 * k + 2);
  return s;
}

double table_high_order(int l, double x, int r) { return taylor_tail(lambda_for_order(l, r) * x, 2 * l + 1); }

double combine_normalization(Flavor f, double c_l, double c_t) {
  return f == Flavor::POE ? 1.0 + c_l + c_t : std::hypot(1.0, c_l) + c_t;
}

Normalization normalization_factors(Flavor f, int l, double h_tot, double dt, LeadingMode mode, double instance_c_l, int r) {
  if (dt < 0 || h_tot < 0) throw std::invalid_argument("normalization needs dt >= 0 and h_tot >= 0");
  const double x = h_tot * dt;
  Normalization nf;
  switch (mode) {
    case LeadingMode::Instance: nf.c_l = instance_c_l; break;
    case LeadingMode::SimplifiedBound: nf.c_l = table_leading_bound(l, x, l == 1 || l == 2, r); break;
    default: nf.c_l = table_leading_bound(l, x, false, r); break;
  }
  nf.c_t = table_high_order(l, x, r);
  nf.c_a = combine_normalization(f, nf.c_l, nf.c_t);
  return nf;
}

double RotationForm::total_weight() const {
  if (terms.empty()) return 1.0;
  double s = 0.0;
  for (const auto& t : terms) s += t.beta;
  return s;
}

RotationForm to_rotation_form(const LeadingOrderExpansion& leading) {
  RotationForm f;
  const double c_l = leading.c_l();
  if (c_l == 0.0) return f;
  f.phi = std::atan(c_l);
  const double s = std::sin(f.phi);
  for (const auto& t : leading.terms) f.terms.push_back({std::abs(t.alpha) / s, t.alpha > 0 ? 1 : -1, t.tau});
  return f;
}

namespace {

void walsh_hadamard(std::vector<cplx>& v) {
  for (std::size_t len = 1; len < v.size(); len <<= 1)
    for (std::size_t i = 0; i < v.size(); i += 2 * len)
      for (std::size_t j = i; j < i + len; ++j) {
        cplx a = v[j], b = v[j + len];
        v[j] = a + b;
        v[j + len] = a - b;
      }
}

}  // namespace

PauliSum exact_correction_expansion(const Hamiltonian& h, double dt, double tol) {
  const int n = h.n();
  if (n > kDenseMaxQubits) throw std::invalid_argument("exact expansion is limited to " + std::to_string(kDenseMaxQubits) + " qubits");
  Mat M = expm_hermitian(hamiltonian_matrix(h), dt) * sequence_matrix(first_order_sequence(h, dt), n).adjoint();
  const std::uint64_t dim = 1ULL << n;
  const double norm = 1.0 / static_cast<double>(dim);
  PauliSum out(n);
  std::vector<cplx> g(dim);
  for (std::uint64_t x = 0; x < dim; ++x) {
    for (std::uint64_t k = 0; k < dim; ++k) g[k] = M(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k ^ x));
    walsh_hadamard(g);
    for (std::uint64_t z = 0; z < dim; ++z) {
      cplx c = g[z] * norm * i_pow(std::popcount(x & z));
      if (std::abs(c) > tol) out.add(PauliString::from_masks(n, x, z), c);
    }
  }
  return out;
}

CustomLorFormula custom_lor_formula(const PauliSum& expansion, double tol) {
  CustomLorFormula f;
  const int n = expansion.n();
  double b_sum = 0.0;
  std::vector<std::pair<double, PauliString>> bs;
  for (const auto& [p, c] : expansion.sorted()) {
    if (p.is_identity()) {
      f.a_identity = c.real();
      continue;
    }
    double a = c.real(), b = -c.imag();
    if (std::abs(a) > tol) f.pauli_terms.push_back({a, p});
    if (std::abs(b) > tol) {
      bs.emplace_back(b, p);
      b_sum += std::abs(b);
    }
  }
  double a_sum = 0.0;
  for (const auto& t : f.pauli_terms) a_sum += std::abs(t.alpha);
  if (bs.empty()) {
    // No rotations carry the identity component, so it stays a Pauli term.
    f.degenerate = f.pauli_terms.empty();
    if (!f.degenerate) f.pauli_terms.insert(f.pauli_terms.begin(), {f.a_identity, PauliString(n)});
    f.c_total = f.degenerate ? 1.0 : a_sum + std::abs(f.a_identity);
    return f;
  }
  f.rotations.phi = std::atan2(b_sum, f.a_identity);
  const double s = std::sin(f.rotations.phi);
  for (const auto& [b, p] : bs) f.rotations.terms.push_back({std::abs(b) / s, b > 0 ? 1 : -1, p});
  f.c_total = a_sum + std::hypot(f.a_identity, b_sum);
  return f;
}

std::string FormulaSpec::name() const {
  if (kind == FormulaKind::ExactLor) return "lor1-exact";
  return to_string(flavor) + std::to_string(order);
}

FormulaSpec make_formula(const Hamiltonian& h, Flavor flavor, int order, double dt) {
  if (dt < 0) throw std::invalid_argument("time step must be non-negative");
  FormulaSpec f;
  f.kind = FormulaKind::Taylor;
  f.flavor = flavor;
  f.order = order;
  f.dt = dt;
  f.h_tot = h.h_tot();
  f.mode = LeadingMode::Instance;
  if (dt > 0) f.leading = taylor_correction_series(h, dt, order, 2 * order + 1).leading;
  auto nf = normalization_factors(flavor, order, f.h_tot, dt, LeadingMode::Instance, f.leading.c_l());
  f.c_l = nf.c_l;
  f.c_t = nf.c_t;
  f.c_a = nf.c_a;
  f.phi = std::atan(f.c_l);
  return f;
}

FormulaSpec make_exact_lor_formula(const Hamiltonian& h, double dt) {
  FormulaSpec f;
  f.kind = FormulaKind::ExactLor;
  f.flavor = Flavor::LOR;
  f.order = 1;
  f.dt = dt;
  f.h_tot = h.h_tot();
  f.mode = LeadingMode::Instance;
  f.custom = custom_lor_formula(exact_correction_expansion(h, dt));
  f.c_t = 0.0;
  f.c_a = f.custom.c_total;
  f.phi = f.custom.rotations.phi;
  double b = 0.0;
  for (const auto& t : f.custom.rotations.terms) b += t.beta * std::sin(f.phi);
  f.c_l = b;
  return f;
}

}  // namespace qcmc
