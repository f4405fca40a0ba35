#include "qcmc/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace qcmc {

CorrectionOp CorrectionOp::identity(int n) { return {Kind::Identity, PauliString(n), 1, 0.0}; }

CorrectionOp CorrectionOp::from_pauli(const PauliString& p) {
  if (p.phase_exp() != 0) throw std::invalid_argument("correction Pauli must be canonical");
  if (p.is_identity()) return identity(p.n());
  return {Kind::Pauli, p, 1, 0.0};
}

CorrectionOp CorrectionOp::rotation(int sign, double phi, const PauliString& axis) {
  if (axis.phase_exp() != 0) throw std::invalid_argument("rotation axis must be canonical");
  if (sign != 1 && sign != -1) throw std::invalid_argument("rotation sign must be +-1");
  return {Kind::Rotation, axis, sign, phi};
}

CorrectionOp CorrectionOp::adjoint() const {
  CorrectionOp a = *this;
  if (kind == Kind::Rotation) a.sign = -sign;
  return a;
}

std::string CorrectionOp::to_string() const {
  switch (kind) {
    case Kind::Identity: return "I";
    case Kind::Pauli: return pauli.to_string();
    default: {
      std::ostringstream os;
      os.precision(17);
      os << (sign > 0 ? "R+" : "R-") << phi << ':' << pauli.to_string();
      return os.str();
    }
  }
}

CorrectionOp CorrectionOp::parse(std::string_view lit) {
  if (lit.starts_with("R+") || lit.starts_with("R-")) {
    auto colon = lit.find(':');
    if (colon == std::string_view::npos) throw std::invalid_argument("rotation literal needs ':'");
    double phi = std::stod(std::string(lit.substr(2, colon - 2)));
    return rotation(lit[1] == '+' ? 1 : -1, phi, PauliString::parse(lit.substr(colon + 1)));
  }
  if (lit == "I") throw std::invalid_argument("bare identity literal needs a qubit count; use an all-I string");
  return from_pauli(PauliString::parse(lit));
}

double SampleTrace::theta() const { return quarter * std::numbers::pi / 2.0; }

namespace {

// Inversion for small means with e^{-x} supplied.
int poisson_small(double x, double emx, Rng& rng) {
  double u = rng.uniform();
  double p = emx, f = emx;
  int k = 0;
  while (u > f) {
    ++k;
    p *= x / k;
    f += p;
    if (p < 1e-300 && k > x) break;
  }
  return k;
}

int quarter_of_sign(int base, double h) { return h > 0 ? base : mod4(-base); }

}  // namespace

int poisson(double x, Rng& rng) {
  if (x < 0 || !std::isfinite(x)) throw std::invalid_argument("poisson needs a finite x >= 0");
  if (x == 0.0) return 0;
  if (x < 30.0) return poisson_small(x, std::exp(-x), rng);
  std::poisson_distribution<int> d(x);
  return d(rng);
}

HighOrderSampler::HighOrderSampler(const Hamiltonian& h, double dt, int l) : n_(h.n()), l_(l) {
  if (l < 0 || l > 2) throw std::invalid_argument("high-order sampler supports orders 0, 1, 2");
  if (dt < 0) throw std::invalid_argument("time step must be non-negative");
  rate_ = h.h_tot() * dt;
  exp_rate_ = std::exp(-rate_);
  double acc = 0.0;
  for (const auto& t : h.terms()) {
    sigma_.push_back(t.pauli);
    sign_.push_back(t.coeff > 0 ? 1 : -1);
    acc += std::abs(t.coeff);
    cumulative_.push_back(acc);
    double side = l == 1 ? std::abs(t.coeff) * dt : std::abs(t.coeff) * dt / 2.0;
    side_rate_.push_back(side);
    side_exp_.push_back(std::exp(-side));
  }
}

HighOrderDraw HighOrderSampler::draw(Rng& rng, long max_iterations) const {
  const int threshold = 2 * l_ + 2;
  const std::size_t M = sigma_.size();
  std::vector<int> kr(M, 0), kl(M, 0);
  HighOrderDraw out;
  int k = 0;
  for (;;) {
    if (++out.iterations > max_iterations)
      throw std::runtime_error("high-order sampler exceeded " + std::to_string(max_iterations) +
                               " rejection iterations; the time step is far too small for this branch");
    k = rate_ > 0 ? poisson_small(rate_, exp_rate_, rng) : 0;
    int total = k;
    if (l_ >= 1)
      for (std::size_t j = 0; j < M; ++j) total += kr[j] = poisson_small(side_rate_[j], side_exp_[j], rng);
    if (l_ == 2)
      for (std::size_t j = 0; j < M; ++j) total += kl[j] = poisson_small(side_rate_[j], side_exp_[j], rng);
    if (total >= threshold) break;
  }

  // Product sigma_M^{k'_M}..sigma_1^{k'_1} sigma_{j_k}..sigma_{j_1} sigma_1^{k_1}..sigma_M^{k_M}.
  PauliString prod(n_);
  int q = 0;
  if (l_ == 2) {
    for (std::size_t j = M; j-- > 0;) {
      if (kl[j] % 2) prod *= sigma_[j];
      q += kl[j] * quarter_of_sign(1, sign_[j]);
    }
  }
  std::vector<std::size_t> picks(k);
  for (int a = 0; a < k; ++a) {
    double u = rng.uniform() * cumulative_.back();
    picks[a] = std::min<std::size_t>(std::upper_bound(cumulative_.begin(), cumulative_.end(), u) - cumulative_.begin(), M - 1);
  }
  for (int a = k; a-- > 0;) {
    prod *= sigma_[picks[a]];
    q += quarter_of_sign(3, sign_[picks[a]]);
  }
  if (l_ >= 1) {
    for (std::size_t j = 0; j < M; ++j) {
      if (kr[j] % 2) prod *= sigma_[j];
      q += kr[j] * quarter_of_sign(1, sign_[j]);
    }
  }
  out.quarter = mod4(q + prod.phase_exp());
  out.w = prod.canonical();
  return out;
}

HighOrderDraw sample_high_order_term(const Hamiltonian& h, double dt, int l, Rng& rng, long max_iterations) {
  return HighOrderSampler(h, dt, l).draw(rng, max_iterations);
}

StepSampler::StepSampler(const Hamiltonian& h, const FormulaSpec& f) : h_(h), formula_(f) {
  const int n = h.n();
  if (f.kind == FormulaKind::ExactLor) {
    const auto& c = f.custom;
    for (const auto& t : c.pauli_terms) entries_.push_back({std::abs(t.alpha), CorrectionOp::from_pauli(t.tau), t.alpha > 0 ? 0 : 2});
    for (const auto& t : c.rotations.terms) entries_.push_back({t.beta, CorrectionOp::rotation(t.sign, c.rotations.phi, t.tau), 0});
    if (entries_.empty()) entries_.push_back({1.0, CorrectionOp::identity(n), 0});
    right_ = first_order_sequence(h, f.dt);
  } else {
    if (f.order < 0 || f.order > 2) throw std::invalid_argument("sampling supports orders 0, 1, 2");
    if (f.flavor == Flavor::POE) {
      entries_.push_back({1.0, CorrectionOp::identity(n), 0});
      for (const auto& t : f.leading.terms)
        entries_.push_back({std::abs(t.alpha), CorrectionOp::from_pauli(t.tau), t.alpha > 0 ? 3 : 1});
    } else {
      auto rf = to_rotation_form(f.leading);
      for (const auto& t : rf.terms) entries_.push_back({t.beta, CorrectionOp::rotation(t.sign, rf.phi, t.tau), 0});
      if (entries_.empty()) entries_.push_back({1.0, CorrectionOp::identity(n), 0});
    }
    if (f.order == 1) right_ = first_order_sequence(h, f.dt);
    if (f.order == 2) {
      right_ = first_order_sequence(h, f.dt / 2.0);
      left_ = first_order_sequence(h, -f.dt / 2.0).adjoint();
    }
    if (f.c_t > 0) high_ = HighOrderSampler(h, f.dt, f.order);
  }
  for (const auto& e : entries_) {
    lead_total_ += e.weight;
    cumulative_.push_back(lead_total_);
  }
}

StepDraw StepSampler::draw(Rng& rng) const {
  const double u = rng.uniform() * (lead_total_ + formula_.c_t);
  if (u >= lead_total_ && formula_.c_t > 0) {
    auto d = high_.draw(rng);
    return {CorrectionOp::from_pauli(d.w), d.quarter, Branch::HighOrder};
  }
  auto i = std::min<std::size_t>(std::upper_bound(cumulative_.begin(), cumulative_.end(), u) - cumulative_.begin(), entries_.size() - 1);
  return {entries_[i].op, entries_[i].quarter, Branch::Leading};
}

StepDraw sam_gen_one_step(const StepSampler& sampler, Rng& rng) { return sampler.draw(rng); }

SampleTrace sam_gen(const StepSampler& sampler, int N, Rng& rng) {
  if (N < 0) throw std::invalid_argument("negative step count");
  SampleTrace t;
  t.W.reserve(2 * N);
  int q = 0;
  for (int i = 0; i < 2 * N; ++i) {
    auto d = sampler.draw(rng);
    q += i < N ? d.quarter : -d.quarter;
    t.W.push_back(std::move(d.op));
  }
  t.quarter = mod4(q);
  return t;
}

SampleTrace sam_gen(const StepSampler& sampler, const SamplerConfig& cfg, std::uint64_t sample_index) {
  Rng rng(cfg.seed, sample_index, StreamKind::Trace);
  return sam_gen(sampler, cfg.N, rng);
}

std::string dump_trace(std::uint64_t index, const SampleTrace& t) {
  std::ostringstream os;
  os << index << ' ' << t.quarter;
  for (const auto& w : t.W) os << ' ' << w.to_string();
  return os.str();
}

}  // namespace qcmc
