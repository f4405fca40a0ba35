#include "qcmc/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace qcmc {

std::string to_string(Topology t) { return t == Topology::AllToAll ? "all-to-all" : "linear"; }

Topology parse_topology(const std::string& s) {
  if (s == "all-to-all" || s == "all_to_all" || s == "alltoall") return Topology::AllToAll;
  if (s == "linear") return Topology::Linear;
  throw std::invalid_argument("unknown topology '" + s + "'");
}

Gate Gate::one_qubit(int target, const Mat2& u, std::string label, int control, int ctrl_value) {
  Gate g;
  g.kind = Kind::OneQubit;
  g.target = target;
  g.control = control;
  g.ctrl_value = ctrl_value;
  g.u = u;
  g.label = std::move(label);
  return g;
}

Gate Gate::cnot(int control, int target) {
  Gate g;
  g.kind = Kind::Cnot;
  g.control = control;
  g.target = target;
  g.label = "CX";
  return g;
}

Gate Gate::rotation(const PauliString& axis, double angle) {
  Gate g;
  g.kind = Kind::Rotation;
  g.mask = kernels::mask_of(axis, 1);
  g.angle = angle;
  g.label = axis.to_string();
  return g;
}

Gate Gate::controlled_dense(std::shared_ptr<const Mat> u, int ctrl_value, std::string label) {
  Gate g;
  g.kind = Kind::ControlledDense;
  g.dense = std::move(u);
  g.control = 0;
  g.ctrl_value = ctrl_value;
  g.label = std::move(label);
  return g;
}

Gate Gate::noise_site(int a, int b) {
  Gate g;
  g.kind = Kind::NoiseSite;
  g.control = a;
  g.target = b;
  g.label = "NS";
  return g;
}

namespace {

Gate basis_in(int q, char op) {
  return op == 'Z' ? Gate::one_qubit(q, mat2::hadamard(), "H") : Gate::one_qubit(q, mat2::s_dagger(), "Sdg");
}
Gate basis_out(int q, char op) {
  return op == 'Z' ? Gate::one_qubit(q, mat2::hadamard(), "H") : Gate::one_qubit(q, mat2::s_gate(), "S");
}

Mat2 pauli_mat(char op) {
  switch (op) {
    case 'X': return mat2::pauli_x();
    case 'Y': return mat2::pauli_y();
    case 'Z': return mat2::pauli_z();
    default: return mat2::identity();
  }
}

// CNOTs mapping the X-string on `support` (sorted) onto X on qubit 1 under
// conjugation, moving along the chain from the top qubit downwards.
std::vector<Gate> chain_sweep(const std::vector<int>& support) {
  std::vector<Gate> g;
  std::vector<bool> has(support.back() + 1, false);
  for (int a : support) has[a] = true;
  for (int a = support.back(); a >= 2; --a) {
    if (!has[a - 1]) {
      g.push_back(Gate::cnot(a, a - 1));
      has[a - 1] = true;
    }
    g.push_back(Gate::cnot(a - 1, a));
    has[a] = false;
  }
  return g;
}

Decomposition controlled_pauli_core(const PauliString& sigma, int ctrl_value, Topology topo, bool rotation, double theta) {
  Decomposition d;
  auto support = sigma.support();
  if (support.empty()) return d;
  auto emit = [&](Gate g) {
    if (g.kind == Gate::Kind::Cnot) ++d.cnots;
    d.gates.push_back(std::move(g));
  };
  if (ctrl_value == 0) emit(Gate::one_qubit(0, mat2::pauli_x(), "X"));
  for (int a : support)
    if (sigma.op(a) != 'X') emit(basis_in(a, sigma.op(a)));

  std::vector<Gate> net;
  int hub = 1;
  if (topo == Topology::Linear) {
    net = chain_sweep(support);
  } else if (rotation) {
    hub = support.front();
    for (std::size_t k = 1; k < support.size(); ++k) net.push_back(Gate::cnot(hub, support[k]));
  }
  for (const auto& g : net) emit(g);
  if (!rotation) {
    if (topo == Topology::Linear) emit(Gate::cnot(0, 1));
    else
      for (int a : support) emit(Gate::cnot(0, a));
  } else {
    emit(Gate::one_qubit(hub, mat2::hadamard(), "H"));
    emit(Gate::one_qubit(hub, mat2::rz(theta / 2.0), "RZ"));
    emit(Gate::cnot(0, hub));
    emit(Gate::one_qubit(hub, mat2::rz(-theta / 2.0), "RZ"));
    emit(Gate::cnot(0, hub));
    emit(Gate::one_qubit(hub, mat2::hadamard(), "H"));
  }
  for (auto it = net.rbegin(); it != net.rend(); ++it) emit(*it);
  for (int a : support)
    if (sigma.op(a) != 'X') emit(basis_out(a, sigma.op(a)));
  if (ctrl_value == 0) emit(Gate::one_qubit(0, mat2::pauli_x(), "X"));
  return d;
}

void append(Decomposition& d, const Decomposition& e) {
  d.gates.insert(d.gates.end(), e.gates.begin(), e.gates.end());
  d.cnots += e.cnots;
}

// Phase zeta on the ancilla branch `ctrl_value`.
Gate ancilla_phase(cplx zeta, int ctrl_value) {
  Mat2 u = ctrl_value == 1 ? Mat2{1.0, 0.0, 0.0, zeta} : Mat2{zeta, 0.0, 0.0, 1.0};
  return Gate::one_qubit(0, u, "P");
}

// Controlled (zeta sigma) for a Pauli with any phase.
Decomposition controlled_phased_pauli(const PauliString& p, int ctrl_value, Topology topo) {
  Decomposition d = controlled_pauli_core(p.canonical(), ctrl_value, topo, false, 0.0);
  if (p.phase_exp() != 0) d.gates.push_back(ancilla_phase(p.phase(), ctrl_value));
  return d;
}

}  // namespace

Decomposition decompose_controlled_correction(const CorrectionOp& w, int ctrl_value, Topology topology) {
  switch (w.kind) {
    case CorrectionOp::Kind::Identity: return {};
    case CorrectionOp::Kind::Pauli: return controlled_pauli_core(w.pauli, ctrl_value, topology, false, 0.0);
    default:
      if (w.pauli.support().empty()) {
        // e^{-i angle} on the identity is a relative phase on the ancilla.
        const cplx z = std::polar(1.0, -w.sign * w.phi);
        const Mat2 u = ctrl_value ? mat2::phase(z) : Mat2{z, 0.0, 0.0, 1.0};
        return {{Gate::one_qubit(0, u, "P")}, 0};
      }
      return controlled_pauli_core(w.pauli, ctrl_value, topology, true, w.sign * w.phi);
  }
}

Decomposition decompose_controlled_pair(const CorrectionOp& w0, const CorrectionOp& w1, Topology topology, bool merge) {
  const bool paulis = w0.kind != CorrectionOp::Kind::Rotation && w1.kind != CorrectionOp::Kind::Rotation;
  if (!merge || !paulis || w0.kind == CorrectionOp::Kind::Identity || w1.kind == CorrectionOp::Kind::Identity) {
    Decomposition d = decompose_controlled_correction(w0, 0, topology);
    append(d, decompose_controlled_correction(w1, 1, topology));
    return d;
  }
  // tau uncontrolled, then controlled-(tau' tau) on |1>.
  Decomposition d;
  for (int a : w0.pauli.support()) d.gates.push_back(Gate::one_qubit(a, pauli_mat(w0.pauli.op(a)), std::string(1, w0.pauli.op(a))));
  append(d, controlled_phased_pauli(w1.pauli * w0.pauli, 1, topology));
  return d;
}

int max_correction_cnots(bool rotation, Topology topology, int n) {
  if (!rotation) return topology == Topology::AllToAll ? n : 4 * n - 3;
  return topology == Topology::AllToAll ? 4 * n : 8 * n - 4;
}

StateSpec StateSpec::from_product(std::string chars) {
  for (char c : chars)
    if (c != '0' && c != '1' && c != '+' && c != '-') throw std::invalid_argument("product state characters are 0, 1, +, -");
  return {std::move(chars), std::nullopt};
}

StateSpec StateSpec::from_dense(const Vec& v) {
  const auto dim = v.size();
  if (dim < 2 || (dim & (dim - 1))) throw std::invalid_argument("state length must be a power of two");
  if (std::abs(v.norm() - 1.0) > 1e-10) throw std::invalid_argument("state must be normalized");
  StateSpec s;
  s.dense = v;
  return s;
}

StateSpec StateSpec::from_basis(const BasisState& s) {
  std::string chars = s.to_string();
  return from_product(chars);
}

int StateSpec::n() const {
  if (!dense) return static_cast<int>(product.size());
  int n = 0;
  while ((Eigen::Index(1) << n) < dense->size()) ++n;
  return n;
}

bool StateSpec::is_basis() const {
  return !dense && std::all_of(product.begin(), product.end(), [](char c) { return c == '0' || c == '1'; });
}

Amplitudes StateSpec::amplitudes() const {
  if (dense) return Amplitudes(dense->data(), dense->data() + dense->size());
  Amplitudes a{1.0};
  const double r = 1.0 / std::sqrt(2.0);
  for (std::size_t q = 0; q < product.size(); ++q) {
    cplx v0, v1;
    switch (product[q]) {
      case '0': v0 = 1.0, v1 = 0.0; break;
      case '1': v0 = 0.0, v1 = 1.0; break;
      case '+': v0 = r, v1 = r; break;
      default: v0 = r, v1 = -r; break;
    }
    Amplitudes b(a.size() * 2);
    for (std::size_t k = 0; k < a.size(); ++k) {
      b[k] = a[k] * v0;
      b[k + a.size()] = a[k] * v1;
    }
    a.swap(b);
  }
  return a;
}

Observable Observable::from_pauli(const PauliString& p) { return {p, nullptr}; }

Observable Observable::from_dense(const Mat& u) {
  if (u.rows() != u.cols()) throw std::invalid_argument("observable must be square");
  if ((u.adjoint() * u - Mat::Identity(u.rows(), u.cols())).norm() > 1e-10) throw std::invalid_argument("observable must be unitary");
  return {std::nullopt, std::make_shared<const Mat>(u)};
}

int Observable::n() const {
  if (pauli) return pauli->n();
  int n = 0;
  while ((Eigen::Index(1) << n) < dense->rows()) ++n;
  return n;
}

namespace {

// Householder unitary with U|0> = psi.
Mat preparation_unitary(const Vec& psi) {
  const Eigen::Index d = psi.size();
  const double a0 = std::abs(psi(0));
  const cplx ph = a0 > 0 ? psi(0) / a0 : cplx(1.0);
  Vec phi = psi / ph;
  Vec w = -phi;
  w(0) += 1.0;
  Mat u = Mat::Identity(d, d);
  const double nw = w.squaredNorm();
  if (nw > 1e-300) u -= 2.0 * w * w.adjoint() / nw;
  return ph * u;
}

class Builder {
 public:
  Builder(int n, CircuitLayout layout, const CircuitOptions& opt) : opt_(opt) {
    c_.n = n;
    c_.layout = layout;
    c_.topology = opt.topology;
  }

  void add(Gate g) {
    if (g.kind == Gate::Kind::Cnot) {
      if (opt_.topology == Topology::Linear && std::abs(g.control - g.target) != 1)
        throw std::logic_error("non-adjacent CNOT on a linear chain");
      ++c_.cnot_count;
    }
    if (g.kind == Gate::Kind::NoiseSite) ++c_.s1_noise_sites;
    if (g.is_noise_location()) c_.noise_locations.push_back(c_.gates.size());
    c_.gates.push_back(std::move(g));
  }

  void add(const Decomposition& d) {
    c_.max_step_cnots = std::max(c_.max_step_cnots, d.cnots);
    for (const auto& g : d.gates) add(g);
  }

  void block(const RotationSequence& s) {
    if (s.empty()) return;
    ++c_.s1_blocks;
    struct Site {
      std::size_t rot;
      int a, b;
    };
    std::vector<Site> natural;
    for (std::size_t r = 0; r < s.size(); ++r) {
      auto sup = s.rotations[r].axis.support();
      for (std::size_t k = 0; k + 1 < sup.size(); ++k) natural.push_back({r, sup[k], sup[k + 1]});
      for (std::size_t k = sup.size(); k-- > 1;) natural.push_back({r, sup[k - 1], sup[k]});
    }
    std::vector<Site> sites;
    const int want = opt_.s1_noise_sites;
    if (want < 0) {
      sites = natural;
    } else if (!natural.empty()) {
      const std::size_t L = natural.size();
      for (int j = 0; j < want; ++j) {
        std::size_t idx = static_cast<std::size_t>(want) <= L ? static_cast<std::size_t>((j + 0.5) * L / want) : j % L;
        sites.push_back(natural[idx]);
      }
      std::stable_sort(sites.begin(), sites.end(), [](const Site& x, const Site& y) { return x.rot < y.rot; });
    } else if (c_.n >= 2) {
      for (int j = 0; j < want; ++j) sites.push_back({s.size() - 1, 1 + j % (c_.n - 1), 2 + j % (c_.n - 1)});
    }
    std::size_t next = 0;
    for (std::size_t r = 0; r < s.size(); ++r) {
      add(Gate::rotation(s.rotations[r].axis, s.rotations[r].angle));
      for (; next < sites.size() && sites[next].rot == r; ++next) add(Gate::noise_site(sites[next].a, sites[next].b));
    }
  }

  void prep(const StateSpec& st, int ctrl_value, bool inverse) {
    if (st.n() != c_.n) throw std::invalid_argument("state size does not match the Hamiltonian");
    if (st.dense) {
      Mat u = preparation_unitary(*st.dense);
      if (inverse) u.adjointInPlace();
      add(Gate::controlled_dense(std::make_shared<const Mat>(std::move(u)), ctrl_value, inverse ? "Uf^dag" : "U"));
      return;
    }
    for (int a = 1; a <= c_.n; ++a) {
      const char ch = st.product[a - 1];
      const bool flip = ch == '1' || ch == '-', had = ch == '+' || ch == '-';
      if (!inverse && flip) add(Gate::one_qubit(a, mat2::pauli_x(), "X", 0, ctrl_value));
      if (had) add(Gate::one_qubit(a, mat2::hadamard(), "H", 0, ctrl_value));
      if (inverse && flip) add(Gate::one_qubit(a, mat2::pauli_x(), "X", 0, ctrl_value));
    }
  }

  void observable(const Observable& o, int ctrl_value) {
    if (o.n() != c_.n) throw std::invalid_argument("observable size does not match the Hamiltonian");
    if (o.dense) {
      add(Gate::controlled_dense(o.dense, ctrl_value, "O"));
      return;
    }
    Decomposition d = controlled_phased_pauli(*o.pauli, ctrl_value, opt_.topology);
    for (const auto& g : d.gates) add(g);
  }

  CircuitSpec take() { return std::move(c_); }

 private:
  CircuitOptions opt_;
  CircuitSpec c_;
};

void check_inputs(const SampleTrace& trace, const StepSampler& sampler) {
  for (const auto& w : trace.W)
    if (w.pauli.n() != sampler.hamiltonian().n()) throw std::invalid_argument("trace size does not match the Hamiltonian");
  if (trace.W.size() % 2) throw std::invalid_argument("trace must have 2N entries");
}

}  // namespace

CircuitSpec build_compact_circuit(const SampleTrace& trace, const StepSampler& sampler, const StateSpec& psi_i,
                                  const StateSpec& psi_f, const Observable& obs, const CircuitOptions& opt) {
  check_inputs(trace, sampler);
  Builder b(sampler.hamiltonian().n(), CircuitLayout::Compact, opt);
  b.add(Gate::one_qubit(0, mat2::hadamard(), "H"));
  b.prep(psi_i, 0, false);
  b.prep(psi_f, 1, false);
  for (int i = 0; i < trace.steps(); ++i) {
    b.block(sampler.right_block());
    b.add(decompose_controlled_pair(trace.forward(i), trace.backward(i), opt.topology, opt.merge_pairs));
    b.block(sampler.left_block());
  }
  b.observable(obs, 0);
  return b.take();
}

CircuitSpec build_forward_backward_circuit(const SampleTrace& trace, const StepSampler& sampler, const StateSpec& psi_i,
                                           const StateSpec& psi_f, const Observable& obs, const CircuitOptions& opt) {
  check_inputs(trace, sampler);
  Builder b(sampler.hamiltonian().n(), CircuitLayout::ForwardBackward, opt);
  const RotationSequence right_adj = sampler.right_block().adjoint(), left_adj = sampler.left_block().adjoint();
  b.add(Gate::one_qubit(0, mat2::hadamard(), "H"));
  b.prep(psi_i, 1, false);
  for (int i = 0; i < trace.steps(); ++i) {
    b.block(sampler.right_block());
    b.add(decompose_controlled_correction(trace.forward(i), 1, opt.topology));
    b.block(sampler.left_block());
  }
  b.observable(obs, 1);
  for (int i = trace.steps(); i-- > 0;) {
    b.block(left_adj);
    b.add(decompose_controlled_correction(trace.backward(i).adjoint(), 1, opt.topology));
    b.block(right_adj);
  }
  b.prep(psi_f, 1, true);
  return b.take();
}

std::string CircuitSpec::dump() const {
  std::ostringstream os;
  os.precision(12);
  for (const auto& g : gates) {
    switch (g.kind) {
      case Gate::Kind::OneQubit:
        os << g.label << ' ' << g.target;
        if (g.control >= 0) os << " ctrl " << g.control << '=' << g.ctrl_value;
        break;
      case Gate::Kind::Cnot: os << "CX " << g.control << ' ' << g.target; break;
      case Gate::Kind::Rotation: os << "R " << g.label << ' ' << g.angle; break;
      case Gate::Kind::ControlledDense: os << g.label << " ctrl 0=" << g.ctrl_value; break;
      case Gate::Kind::NoiseSite: os << "NS " << g.control << ' ' << g.target; break;
    }
    os << '\n';
  }
  os << "# qubits " << qubits() << " cnots " << cnot_count << " s1_blocks " << s1_blocks << " s1_cnots " << s1_noise_sites
     << " total_cnots " << total_cnots() << '\n';
  return os.str();
}

Amplitudes initial_register(int n) {
  if (n + 1 > 30) throw std::invalid_argument("statevector register too large");
  Amplitudes psi(std::size_t(1) << (n + 1), 0.0);
  psi[0] = 1.0;
  return psi;
}

namespace {

void apply_dense(Amplitudes& psi, const Mat& u, int ctrl_value) {
  const Eigen::Index d = u.rows();
  if (static_cast<std::size_t>(2 * d) != psi.size()) throw std::invalid_argument("dense gate size mismatch");
  Vec v(d);
  for (Eigen::Index s = 0; s < d; ++s) v(s) = psi[2 * s + ctrl_value];
  Vec w = u * v;
  for (Eigen::Index s = 0; s < d; ++s) psi[2 * s + ctrl_value] = w(s);
}

}  // namespace

void apply_gate(Amplitudes& psi, const Gate& g, Backend backend) {
  const bool par = backend == Backend::Parallel;
  switch (g.kind) {
    case Gate::Kind::OneQubit:
      par ? kernels::omp::apply_1q(psi, g.target, g.u, g.control, g.ctrl_value)
          : kernels::serial::apply_1q(psi, g.target, g.u, g.control, g.ctrl_value);
      break;
    case Gate::Kind::Cnot:
      par ? kernels::omp::apply_cnot(psi, g.control, g.target) : kernels::serial::apply_cnot(psi, g.control, g.target);
      break;
    case Gate::Kind::Rotation:
      par ? kernels::omp::apply_pauli_rotation(psi, g.mask, g.angle) : kernels::serial::apply_pauli_rotation(psi, g.mask, g.angle);
      break;
    case Gate::Kind::ControlledDense: apply_dense(psi, *g.dense, g.ctrl_value); break;
    case Gate::Kind::NoiseSite: break;
  }
}

Amplitudes simulate(const CircuitSpec& c, Backend backend) {
  Amplitudes psi = initial_register(c.n);
  for (const auto& g : c.gates) apply_gate(psi, g, backend);
  return psi;
}

kernels::PauliMask single_pauli_mask(int a, int index) {
  kernels::PauliMask m;
  if (index == 1 || index == 2) m.x |= 1ULL << a;
  if (index == 2 || index == 3) m.z |= 1ULL << a;
  return m;
}

kernels::PauliMask pair_pauli_mask(int a, int b, int index) {
  auto ma = single_pauli_mask(a, (index >> 2) & 3), mb = single_pauli_mask(b, index & 3);
  return {ma.x | mb.x, ma.z | mb.z, 0};
}

namespace {

int pick_error(const PauliChannel& ch, double u) {
  double target = u * ch.error_rate(), acc = 0.0;
  const int k = ch.size();
  int last = 1;
  for (int i = 1; i < k; ++i) {
    if (ch.p[i] <= 0.0) continue;
    last = i;
    acc += ch.p[i];
    if (target < acc) return i;
  }
  return last;
}

}  // namespace

std::vector<Insertion> sample_noise(const CircuitSpec& c, const NoiseModel& noise, Rng& rng) {
  std::vector<Insertion> ins;
  const auto& locs = c.noise_locations;
  const std::size_t L = locs.size();
  auto push = [&](std::size_t loc, const PauliChannel& ch) {
    const Gate& g = c.gates[locs[loc]];
    ins.push_back({locs[loc], pair_pauli_mask(g.control, g.target, pick_error(ch, rng.uniform()))});
  };
  const double p = noise.two_qubit.error_rate();
  if (p > 0.0) {
    // Geometric gaps between error locations.
    const double log_q = std::log1p(-p);
    std::size_t pos = 0;
    for (;;) {
      double u = rng.uniform();
      double skip = std::floor(std::log1p(-u) / log_q);
      if (skip >= static_cast<double>(L - pos)) break;
      pos += static_cast<std::size_t>(skip);
      if (!noise.overrides.count(pos)) push(pos, noise.two_qubit);
      if (++pos >= L) break;
    }
  }
  for (const auto& [loc, ch] : noise.overrides) {
    if (loc >= L) continue;
    if (rng.uniform() < ch.error_rate()) push(loc, ch);
  }
  if (!noise.one_qubit.trivial()) {
    const double p1 = noise.one_qubit.error_rate();
    for (std::size_t g = 0; g < c.gates.size(); ++g) {
      const Gate& gate = c.gates[g];
      if (gate.kind != Gate::Kind::OneQubit || gate.control >= 0) continue;
      if (rng.uniform() < p1) ins.push_back({g, single_pauli_mask(gate.target, pick_error(noise.one_qubit, rng.uniform()))});
    }
  }
  std::stable_sort(ins.begin(), ins.end(), [](const Insertion& a, const Insertion& b) { return a.gate < b.gate; });
  return ins;
}

TrajectorySimulator::TrajectorySimulator(CircuitSpec c, Backend backend) : c_(std::move(c)), backend_(backend) {
  const std::size_t G = c_.gates.size();
  const std::size_t bytes = (std::size_t(1) << (c_.n + 1)) * sizeof(cplx);
  std::size_t max_cp = std::clamp<std::size_t>((std::size_t(256) << 20) / bytes, 1, 32);
  stride_ = std::max<std::size_t>(1, (G + max_cp - 1) / max_cp);
  Amplitudes psi = initial_register(c_.n);
  for (std::size_t g = 0; g < G; ++g) {
    if (g % stride_ == 0) checkpoints_.push_back(psi);
    apply_gate(psi, c_.gates[g], backend_);
  }
  if (checkpoints_.empty()) checkpoints_.push_back(psi);
  final_ = std::move(psi);
}

Amplitudes TrajectorySimulator::run(std::vector<Insertion> ins) const {
  if (ins.empty()) return final_;
  std::stable_sort(ins.begin(), ins.end(), [](const Insertion& a, const Insertion& b) { return a.gate < b.gate; });
  const std::size_t G = c_.gates.size();
  if (ins.back().gate >= G) throw std::out_of_range("insertion beyond the last gate");
  const std::size_t k = std::min(ins.front().gate / stride_, checkpoints_.size() - 1);
  Amplitudes psi = checkpoints_[k];
  std::size_t next = 0;
  for (std::size_t g = k * stride_; g < G; ++g) {
    apply_gate(psi, c_.gates[g], backend_);
    for (; next < ins.size() && ins[next].gate == g; ++next)
      backend_ == Backend::Parallel ? kernels::omp::apply_pauli(psi, ins[next].mask) : kernels::serial::apply_pauli(psi, ins[next].mask);
  }
  return psi;
}

Bloch ancilla_bloch(const Amplitudes& psi) {
  Bloch b;
  for (std::size_t s = 0; s + 1 < psi.size(); s += 2) {
    cplx c = std::conj(psi[s]) * psi[s + 1];
    b.x += 2.0 * c.real();
    b.y += 2.0 * c.imag();
    b.z += std::norm(psi[s]) - std::norm(psi[s + 1]);
  }
  return b;
}

Bloch postselected_bloch(const Amplitudes& psi, double* success) {
  const double P = std::norm(psi[0]) + std::norm(psi[1]);
  if (success) *success = P;
  if (P <= 0.0) return {};
  cplx c = std::conj(psi[0]) * psi[1];
  return {2.0 * c.real() / P, 2.0 * c.imag() / P, (std::norm(psi[0]) - std::norm(psi[1])) / P};
}

cplx amplitude_from_bloch(CircuitLayout layout, const Bloch& b) {
  return layout == CircuitLayout::Compact ? cplx(b.x, -b.y) : cplx(b.x, b.y);
}

std::pair<double, double> basis_angles(CircuitLayout layout, double theta) {
  const double h = std::numbers::pi / 2.0;
  if (layout == CircuitLayout::Compact) return {theta, theta - h};
  return {-theta, h - theta};
}

std::vector<int> run_shots(const TrajectorySimulator& sim, double basis_angle, int shots, const NoiseModel* noise, Rng& rng) {
  if (shots < 1) throw std::invalid_argument("need at least one shot");
  std::vector<int> out(shots);
  const bool noisy = noise && !noise->noiseless();
  const double m0 = basis_mean(ancilla_bloch(sim.noiseless()), basis_angle);
  for (int s = 0; s < shots; ++s) {
    double m = m0;
    if (noisy) {
      auto ins = sample_noise(sim.circuit(), *noise, rng);
      if (!ins.empty()) m = basis_mean(ancilla_bloch(sim.run(std::move(ins))), basis_angle);
    }
    out[s] = rng.uniform() < 0.5 * (1.0 + m) ? 1 : -1;
  }
  return out;
}

}  // namespace qcmc
