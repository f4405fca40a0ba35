#include "qcmc/mitigation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace qcmc {

namespace {

// (x, z) bits of a channel index: qubit j of the index has code (idx >> 2j) & 3.
std::pair<unsigned, unsigned> xz_of(int qubits, int idx) {
  unsigned x = 0, z = 0;
  for (int j = 0; j < qubits; ++j) {
    int c = (idx >> (2 * j)) & 3;
    if (c == 1 || c == 2) x |= 1u << j;
    if (c == 2 || c == 3) z |= 1u << j;
  }
  return {x, z};
}

}  // namespace

int pauli_commutation_sign(int qubits, int sigma, int tau) {
  auto [x1, z1] = xz_of(qubits, sigma);
  auto [x2, z2] = xz_of(qubits, tau);
  return (std::popcount((x1 & z2) ^ (z1 & x2)) & 1) ? -1 : 1;
}

std::array<double, 16> pauli_eigenvalues(const PauliChannel& ch) {
  std::array<double, 16> lam{};
  const int k = ch.size();
  for (int t = 0; t < k; ++t)
    for (int s = 0; s < k; ++s) lam[t] += ch.p[s] * pauli_commutation_sign(ch.qubits, s, t);
  return lam;
}

QuasiProb invert_pauli_channel(const PauliChannel& ch, double min_eigenvalue) {
  ch.validate();
  auto lam = pauli_eigenvalues(ch);
  const int k = ch.size();
  for (int t = 0; t < k; ++t)
    if (lam[t] < min_eigenvalue) throw std::domain_error("Pauli channel is not invertible (eigenvalue " + std::to_string(lam[t]) + ")");
  QuasiProb q;
  q.qubits = ch.qubits;
  q.norm = 0.0;
  for (int s = 0; s < k; ++s) {
    double acc = 0.0;
    for (int t = 0; t < k; ++t) acc += pauli_commutation_sign(ch.qubits, s, t) / lam[t];
    q.q[s] = acc / k;
    q.norm += std::abs(q.q[s]);
  }
  return q;
}

const QuasiProb& QuasiProbDecomp::at(std::size_t location) const {
  auto it = overrides.find(location);
  return it == overrides.end() ? default_inverse : it->second;
}

QuasiProbDecomp build_quasi_prob(const CircuitSpec& c, const NoiseModel& noise) {
  QuasiProbDecomp d;
  d.locations = c.noise_locations.size();
  d.default_inverse = invert_pauli_channel(noise.two_qubit);
  double log_ce = 0.0;
  std::size_t n_default = d.locations;
  for (const auto& [loc, ch] : noise.overrides) {
    if (loc >= d.locations) continue;
    auto q = invert_pauli_channel(ch);
    log_ce += std::log(q.norm);
    d.overrides.emplace(loc, q);
    --n_default;
  }
  log_ce += static_cast<double>(n_default) * std::log(d.default_inverse.norm);
  d.c_e = std::exp(log_ce);
  return d;
}

namespace {

int pick_nonidentity(const QuasiProb& q, double u) {
  double total = q.norm - std::abs(q.q[0]), target = u * total, acc = 0.0;
  const int k = q.qubits == 1 ? 4 : 16;
  int last = 1;
  for (int i = 1; i < k; ++i) {
    if (q.q[i] == 0.0) continue;
    last = i;
    acc += std::abs(q.q[i]);
    if (target < acc) return i;
  }
  return last;
}

}  // namespace

std::vector<Insertion> sample_pec(const CircuitSpec& c, const QuasiProbDecomp& d, Rng& rng, int* sign) {
  std::vector<Insertion> ins;
  int s = 1;
  const auto& locs = c.noise_locations;
  const std::size_t L = locs.size();
  auto push = [&](std::size_t loc, const QuasiProb& q) {
    int idx = pick_nonidentity(q, rng.uniform());
    if (q.q[idx] < 0) s = -s;
    const Gate& g = c.gates[locs[loc]];
    ins.push_back({locs[loc], pair_pauli_mask(g.control, g.target, idx)});
  };
  const QuasiProb& q0 = d.default_inverse;
  if (q0.q[0] < 0) throw std::logic_error("identity quasi-probability must be positive");
  const double p = 1.0 - std::abs(q0.q[0]) / q0.norm;
  if (p > 0.0) {
    const double log_q = std::log1p(-p);
    std::size_t pos = 0;
    for (;;) {
      double skip = std::floor(std::log1p(-rng.uniform()) / log_q);
      if (skip >= static_cast<double>(L - pos)) break;
      pos += static_cast<std::size_t>(skip);
      if (!d.overrides.count(pos)) push(pos, q0);
      if (++pos >= L) break;
    }
  }
  for (const auto& [loc, q] : d.overrides) {
    if (loc >= L) continue;
    const double pn = 1.0 - std::abs(q.q[0]) / q.norm;
    if (rng.uniform() < pn) push(loc, q);
    else if (q.q[0] < 0) s = -s;
  }
  if (sign) *sign = s;
  return ins;
}

std::vector<double> pec_evaluate(const TrajectorySimulator& sim, const NoiseModel& noise, const QuasiProbDecomp& d,
                                 double basis_angle, int shots, Rng& rng, ShotMode mode) {
  if (shots < 1) throw std::invalid_argument("need at least one shot");
  std::vector<double> out(shots);
  for (int s = 0; s < shots; ++s) {
    auto ins = sample_noise(sim.circuit(), noise, rng);
    int sign = 1;
    auto corr = sample_pec(sim.circuit(), d, rng, &sign);
    ins.insert(ins.end(), corr.begin(), corr.end());
    double m = basis_mean(ancilla_bloch(sim.run(std::move(ins))), basis_angle);
    double v = mode == ShotMode::Expectation ? m : (rng.uniform() < 0.5 * (1.0 + m) ? 1.0 : -1.0);
    out[s] = d.c_e * sign * v;
  }
  return out;
}

double PostselectedMeans::success_rate() const {
  long s = success[0] + success[1] + success[2], t = total[0] + total[1] + total[2];
  return t ? static_cast<double>(s) / t : 0.0;
}

cplx postselected_amplitude(const Bloch& b, bool* degenerate) {
  const double den = 1.0 + b.z;
  if (degenerate) *degenerate = den < 1e-6;
  if (den < 1e-6) return {0.0, 0.0};
  return cplx(b.x, b.y) / den;
}

PostselectedMeans postselect_measure(const TrajectorySimulator& sim, const NoiseModel* noise, int shots, Rng& rng, ShotMode mode) {
  if (sim.circuit().layout != CircuitLayout::ForwardBackward) throw std::invalid_argument("postselection needs a forward-backward circuit");
  if (shots < 1) throw std::invalid_argument("need at least one shot");
  const bool noisy = noise && !noise->noiseless();
  PostselectedMeans r;
  auto state = [&]() -> Amplitudes {
    if (!noisy) return sim.noiseless();
    auto ins = sample_noise(sim.circuit(), *noise, rng);
    return ins.empty() ? sim.noiseless() : sim.run(std::move(ins));
  };
  if (mode == ShotMode::Expectation) {
    // Average the unnormalized conditional Bloch components.
    double P = 0.0, x = 0.0, y = 0.0, z = 0.0;
    for (int s = 0; s < shots; ++s) {
      double ps = 0.0;
      Bloch b = postselected_bloch(state(), &ps);
      P += ps, x += ps * b.x, y += ps * b.y, z += ps * b.z;
    }
    r.total = {shots, shots, shots};
    if (P <= 0.0) {
      r.failed = true;
      return r;
    }
    r.means = {x / P, y / P, z / P};
    const long succ = std::lround(P);
    r.success = {succ, succ, succ};
    r.degenerate = 1.0 + r.means.z < 1e-6;
    return r;
  }
  std::array<double, 3> sum{};
  for (int basis = 0; basis < 3; ++basis) {
    for (int s = 0; s < shots; ++s) {
      double ps = 0.0;
      Bloch b = postselected_bloch(state(), &ps);
      ++r.total[basis];
      if (rng.uniform() >= ps) continue;
      ++r.success[basis];
      const double m = basis == 0 ? b.x : basis == 1 ? b.y : b.z;
      sum[basis] += rng.uniform() < 0.5 * (1.0 + m) ? 1.0 : -1.0;
    }
  }
  if (r.success[0] == 0 || r.success[1] == 0 || r.success[2] == 0) {
    r.failed = true;
    return r;
  }
  r.means = {sum[0] / r.success[0], sum[1] / r.success[1], sum[2] / r.success[2]};
  r.degenerate = 1.0 + r.means.z < 1e-6;
  return r;
}

PostselectResult postselect_evaluate(const TrajectorySimulator& sim, const NoiseModel* noise, int shots, Rng& rng, ShotMode mode) {
  PostselectResult r;
  r.means = postselect_measure(sim, noise, shots, rng, mode);
  if (!r.means.failed) {
    bool deg = false;
    r.amplitude = postselected_amplitude(r.means.means, &deg);
    r.means.degenerate = r.means.degenerate || deg;
  }
  return r;
}

Purified purify_ancilla(const Bloch& b) {
  const double r = std::sqrt(b.x * b.x + b.y * b.y + b.z * b.z);
  if (r < 1e-12) return {b, true};
  return {{b.x / r, b.y / r, b.z / r}, false};
}

}  // namespace qcmc
