#include "qcmc/estimator.hpp"

#include <cmath>
#include <exception>
#include <stdexcept>

#include <omp.h>

namespace qcmc {

FormulaChoice FormulaChoice::parse(const std::string& s) {
  if (s == "exact-lor1" || s == "exact_lor1") return {FormulaKind::ExactLor, Flavor::LOR, 1};
  if (s.size() == 4 && (s.starts_with("poe") || s.starts_with("lor")) && s[3] >= '0' && s[3] <= '2') {
    Flavor f = s.starts_with("poe") ? Flavor::POE : Flavor::LOR;
    int l = s[3] - '0';
    if (f == Flavor::LOR && l == 0) throw std::invalid_argument("LOR needs order 1 or 2");
    return {FormulaKind::Taylor, f, l};
  }
  throw std::invalid_argument("unknown formula '" + s + "' (poe0, poe1, poe2, lor1, lor2, exact-lor1)");
}

std::string FormulaChoice::name() const {
  if (kind == FormulaKind::ExactLor) return "exact-lor1";
  return (flavor == Flavor::POE ? "poe" : "lor") + std::to_string(order);
}

FormulaSpec build_formula(const Hamiltonian& h, const FormulaChoice& c, double dt) {
  if (c.kind == FormulaKind::ExactLor) return make_exact_lor_formula(h, dt);
  return make_formula(h, c.flavor, c.order, dt);
}

std::string to_string(EvalMode m) {
  switch (m) {
    case EvalMode::Direct: return "direct";
    case EvalMode::Compact: return "compact";
    default: return "forward-backward";
  }
}

std::string to_string(Mitigation m) {
  switch (m) {
    case Mitigation::None: return "none";
    case Mitigation::Pec: return "pec";
    case Mitigation::Postselect: return "postselect";
    default: return "postselect-purify";
  }
}

EvalMode parse_eval_mode(const std::string& s) {
  if (s == "direct") return EvalMode::Direct;
  if (s == "compact") return EvalMode::Compact;
  if (s == "forward-backward" || s == "fb") return EvalMode::ForwardBackward;
  throw std::invalid_argument("unknown evaluation mode '" + s + "'");
}

Mitigation parse_mitigation(const std::string& s) {
  if (s == "none") return Mitigation::None;
  if (s == "pec") return Mitigation::Pec;
  if (s == "postselect") return Mitigation::Postselect;
  if (s == "postselect-purify") return Mitigation::PostselectPurify;
  throw std::invalid_argument("unknown mitigation '" + s + "'");
}

namespace {

void apply_sequence(Amplitudes& v, const RotationSequence& s) {
  for (const auto& r : s.rotations) kernels::omp::apply_pauli_rotation(v, kernels::mask_of(r.axis, 0), r.angle);
}

void apply_correction(Amplitudes& v, const CorrectionOp& w) {
  switch (w.kind) {
    case CorrectionOp::Kind::Identity: break;
    case CorrectionOp::Kind::Pauli: kernels::omp::apply_pauli(v, kernels::mask_of(w.pauli, 0)); break;
    default: kernels::omp::apply_pauli_rotation(v, kernels::mask_of(w.pauli, 0), w.sign * w.phi); break;
  }
}

void apply_observable(Amplitudes& v, const Observable& o) {
  if (o.pauli) {
    kernels::omp::apply_pauli(v, kernels::mask_of(*o.pauli, 0));
    return;
  }
  Eigen::Map<Vec> m(v.data(), static_cast<Eigen::Index>(v.size()));
  Vec w = *o.dense * m;
  m = w;
}

double shot_mean(double m, int shots, Rng& rng) {
  long plus = 0;
  const double p = 0.5 * (1.0 + m);
  for (int k = 0; k < shots; ++k) plus += rng.uniform() < p;
  return (2.0 * plus - shots) / shots;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

struct SampleOut {
  SampleRecord rec;
  double c_e = 1.0;
  double ps_success = 0.0;
  double ps_total = 0.0;
  bool failed = false;
};

struct Reduced {
  cplx mean;
  double sd_re, sd_im;
};

Reduced reduce(const std::vector<SampleOut>& out) {
  const double n = static_cast<double>(out.size());
  cplx m = 0.0;
  for (const auto& o : out) m += o.rec.value;
  m /= n;
  double vr = 0.0, vi = 0.0;
  for (const auto& o : out) {
    cplx d = o.rec.value - m;
    vr += d.real() * d.real();
    vi += d.imag() * d.imag();
  }
  const double den = n > 1 ? n - 1 : 1;
  return {m, std::sqrt(vr / den), std::sqrt(vi / den)};
}

template <class F>
void parallel_samples(long n, int workers, F&& f) {
  std::exception_ptr err;
  const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
  for (long s = 0; s < n; ++s) {
    try {
      f(s);
    } catch (...) {
#pragma omp critical(qcmc_sample_error)
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
}

void check_run(const Problem& p, double t, int N, const RunConfig& cfg) {
  if (N < 0) throw std::invalid_argument("N must be non-negative");
  if (N == 0 && t != 0.0) throw std::invalid_argument("N = 0 requires t = 0");
  if (cfg.N_s < 1 || cfg.M_s < 1) throw std::invalid_argument("N_s and M_s must be positive");
  if (p.psi_i.n() != p.h.n() || p.psi_f.n() != p.h.n() || p.obs.n() != p.h.n())
    throw std::invalid_argument("state and observable sizes must match the Hamiltonian");
}

Estimate finish(const std::vector<SampleOut>& out, const RunConfig& cfg, double c_a, int N) {
  Estimate e;
  e.c_a = c_a;
  e.N = N;
  e.scale = std::pow(c_a, 2.0 * N);
  e.N_s = cfg.N_s;
  e.M_s = cfg.M_s;
  e.shots = cfg.N_s * cfg.M_s;
  auto r = reduce(out);
  e.A = e.scale * r.mean;
  const double rt = std::sqrt(static_cast<double>(out.size()));
  e.stderr_re = e.scale * r.sd_re / rt;
  e.stderr_im = e.scale * r.sd_im / rt;
  std::vector<cplx> ex;
  ex.reserve(out.size());
  double ce = 0.0, succ = 0.0, tot = 0.0;
  for (const auto& o : out) {
    ex.push_back(o.rec.exact);
    ce += o.c_e;
    succ += o.ps_success;
    tot += o.ps_total;
    e.postselect_failures += o.failed;
  }
  e.phase_average = phase_average(ex);
  e.mean_c_e = ce / static_cast<double>(out.size());
  e.postselect_rate = tot > 0 ? succ / tot : 1.0;
  if (cfg.keep_samples) {
    e.samples.reserve(out.size());
    for (const auto& o : out) e.samples.push_back(o.rec);
  }
  return e;
}

}  // namespace

cplx transition_amplitude(const SampleTrace& trace, const StepSampler& sampler, const Problem& p) {
  Amplitudes a = p.psi_i.amplitudes(), b = p.psi_f.amplitudes();
  for (int i = 0; i < trace.steps(); ++i) {
    apply_sequence(a, sampler.right_block());
    apply_correction(a, trace.forward(i));
    apply_sequence(a, sampler.left_block());
    apply_sequence(b, sampler.right_block());
    apply_correction(b, trace.backward(i));
    apply_sequence(b, sampler.left_block());
  }
  apply_observable(a, p.obs);
  cplx acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += std::conj(b[k]) * a[k];
  return acc;
}

Estimate qcmc_run(const Problem& p, const FormulaChoice& choice, double t, int N, const RunConfig& cfg, const NoiseModel* noise) {
  check_run(p, t, N, cfg);
  const bool noisy = noise && !noise->noiseless();
  if (noise) noise->validate();
  if (cfg.mode == EvalMode::Direct && (noisy || cfg.mitigation != Mitigation::None))
    throw std::invalid_argument("noise and mitigation need a circuit evaluation mode");
  if ((cfg.mitigation == Mitigation::Postselect || cfg.mitigation == Mitigation::PostselectPurify) &&
      cfg.mode != EvalMode::ForwardBackward)
    throw std::invalid_argument("postselection needs forward-backward circuits");
  if (cfg.mitigation == Mitigation::Pec && !noise) throw std::invalid_argument("PEC needs a noise model");

  const double dt = N ? t / N : 0.0;
  const StepSampler sampler(p.h, build_formula(p.h, choice, dt));
  NoiseModel circuit_noise;
  if (noise) circuit_noise = *noise;
  CircuitOptions copt = cfg.circuit;
  if (noise && copt.s1_noise_sites < 0) copt.s1_noise_sites = noise->s1_noise_sites;

  std::vector<SampleOut> out(cfg.N_s);
  parallel_samples(cfg.N_s, cfg.workers, [&](long s) {
    const auto idx = static_cast<std::uint64_t>(s);
    Rng tr(cfg.seed, idx, StreamKind::Trace);
    SampleTrace trace = sam_gen(sampler, N, tr);
    const cplx ph = trace.phase();
    SampleOut& o = out[s];
    o.rec.exact = ph * transition_amplitude(trace, sampler, p);
    if (cfg.mode == EvalMode::Direct) {
      if (cfg.shots == ShotMode::Expectation) {
        o.rec.value = o.rec.exact;
      } else {
        Rng r0(cfg.seed, idx, StreamKind::Shots, 0), r1(cfg.seed, idx, StreamKind::Shots, 1);
        o.rec.value = {shot_mean(o.rec.exact.real(), cfg.M_s, r0), shot_mean(o.rec.exact.imag(), cfg.M_s, r1)};
      }
      return;
    }
    const bool compact = cfg.mode == EvalMode::Compact;
    CircuitSpec c = compact ? build_compact_circuit(trace, sampler, p.psi_i, p.psi_f, p.obs, copt)
                            : build_forward_backward_circuit(trace, sampler, p.psi_i, p.psi_f, p.obs, copt);
    const CircuitLayout layout = c.layout;
    TrajectorySimulator sim(std::move(c));
    const auto [ang_re, ang_im] = basis_angles(layout, trace.theta());
    switch (cfg.mitigation) {
      case Mitigation::None: {
        double parts[2];
        for (int part = 0; part < 2; ++part) {
          const double ang = part ? ang_im : ang_re;
          Rng r(cfg.seed, idx, StreamKind::Shots, part);
          if (cfg.shots == ShotMode::Expectation) {
            double acc = 0.0;
            for (int k = 0; k < cfg.M_s; ++k) {
              auto ins = noisy ? sample_noise(sim.circuit(), circuit_noise, r) : std::vector<Insertion>{};
              acc += basis_mean(ancilla_bloch(sim.run(std::move(ins))), ang);
            }
            parts[part] = acc / cfg.M_s;
          } else {
            auto shots = run_shots(sim, ang, cfg.M_s, noisy ? &circuit_noise : nullptr, r);
            double acc = 0.0;
            for (int v : shots) acc += v;
            parts[part] = acc / cfg.M_s;
          }
        }
        o.rec.value = {parts[0], parts[1]};
        break;
      }
      case Mitigation::Pec: {
        auto d = build_quasi_prob(sim.circuit(), circuit_noise);
        Rng r0(cfg.seed, idx, StreamKind::Pec, 0), r1(cfg.seed, idx, StreamKind::Pec, 1);
        o.rec.value = {mean_of(pec_evaluate(sim, circuit_noise, d, ang_re, cfg.M_s, r0, cfg.shots)),
                       mean_of(pec_evaluate(sim, circuit_noise, d, ang_im, cfg.M_s, r1, cfg.shots))};
        o.c_e = d.c_e;
        break;
      }
      default: {
        Rng r(cfg.seed, idx, StreamKind::Shots, 2);
        auto m = postselect_measure(sim, noisy ? &circuit_noise : nullptr, cfg.M_s, r, cfg.shots);
        o.ps_success = static_cast<double>(m.success[0] + m.success[1] + m.success[2]);
        o.ps_total = static_cast<double>(m.total[0] + m.total[1] + m.total[2]);
        if (m.failed) {
          o.failed = true;
          o.rec.value = 0.0;
          break;
        }
        Bloch b = m.means;
        if (cfg.mitigation == Mitigation::PostselectPurify) b = purify_ancilla(b).means;
        bool deg = false;
        cplx a = postselected_amplitude(b, &deg);
        o.failed = deg;
        o.rec.value = ph * a;
        break;
      }
    }
  });
  return finish(out, cfg, sampler.c_a(), N);
}

namespace {

enum class QubitBasis { Z, X };

std::vector<QubitBasis> product_bases(const Problem& p) {
  if (!p.psi_i.is_product() || !p.psi_f.is_product()) throw std::invalid_argument("classical engine needs product states");
  if (!p.obs.pauli) throw std::invalid_argument("classical engine needs a Pauli observable");
  std::vector<QubitBasis> b(p.h.n());
  for (int a = 0; a < p.h.n(); ++a) {
    auto kind = [](char c) { return c == '0' || c == '1' ? QubitBasis::Z : QubitBasis::X; };
    QubitBasis bi = kind(p.psi_i.product[a]), bf = kind(p.psi_f.product[a]);
    if (bi != bf) throw std::invalid_argument("classical engine needs both states in the same basis per qubit");
    b[a] = bi;
  }
  return b;
}

// H P H on the X-basis qubits: X <-> Z, Y -> -Y.
PauliString hadamard_conjugate(const PauliString& p, const std::vector<QubitBasis>& b) {
  PauliString q = p;
  int extra = 0;
  for (int a = 1; a <= p.n(); ++a) {
    if (b[a - 1] != QubitBasis::X) continue;
    char op = p.op(a);
    if (op == 'X') q.set_op(a, 'Z');
    else if (op == 'Z') q.set_op(a, 'X');
    else if (op == 'Y') extra += 2;
  }
  return q.with_phase(mod4(q.phase_exp() + extra));
}

BasisState rotated_state(const StateSpec& s) {
  BasisState out(static_cast<int>(s.product.size()));
  for (std::size_t a = 0; a < s.product.size(); ++a) out.set(static_cast<int>(a) + 1, s.product[a] == '1' || s.product[a] == '-');
  return out;
}

}  // namespace

bool classical_supported(const Problem& p) {
  try {
    product_bases(p);
    return true;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

Estimate classical_run(const Problem& p, double t, int N, const RunConfig& cfg) {
  check_run(p, t, N, cfg);
  const auto bases = product_bases(p);
  std::vector<Term> terms;
  for (const auto& term : p.h.terms()) {
    PauliString q = hadamard_conjugate(term.pauli, bases);
    terms.push_back({q.phase_exp() == 2 ? -term.coeff : term.coeff, q.canonical()});
  }
  const Hamiltonian h(p.h.n(), terms);
  const PauliString obs = hadamard_conjugate(*p.obs.pauli, bases);
  const BasisState si = rotated_state(p.psi_i), sf = rotated_state(p.psi_f);
  const double dt = N ? t / N : 0.0;
  const StepSampler sampler(h, make_formula(h, Flavor::POE, 0, dt));

  std::vector<SampleOut> out(cfg.N_s);
  parallel_samples(cfg.N_s, cfg.workers, [&](long s) {
    Rng tr(cfg.seed, static_cast<std::uint64_t>(s), StreamKind::Trace);
    SampleTrace trace = sam_gen(sampler, N, tr);
    PauliString left(h.n()), right(h.n());
    for (int i = 0; i < N; ++i) {
      left *= trace.backward(i).pauli;
      right = trace.forward(i).pauli * right;
    }
    PauliString prod = left * obs * right;
    BasisImage img = apply_to_basis(prod, si);
    cplx amp = img.state == sf ? img.phase() : cplx(0.0);
    out[s].rec.exact = out[s].rec.value = trace.phase() * amp;
  });
  return finish(out, cfg, sampler.c_a(), N);
}

cplx phase_average(const std::vector<cplx>& amplitudes) {
  if (amplitudes.empty()) return 0.0;
  cplx acc = 0.0;
  for (const auto& a : amplitudes) {
    const double r = std::abs(a);
    if (r > 1e-14) acc += a / r;
  }
  return acc / static_cast<double>(amplitudes.size());
}

double predict_variance(double c_a, int N, double m_tot, double abs_a) {
  if (c_a < 1.0) throw std::invalid_argument("C_A must be at least 1");
  if (m_tot <= 0) throw std::invalid_argument("M_tot must be positive");
  return (2.0 * std::pow(c_a, 4.0 * N) - abs_a * abs_a) / m_tot;
}

cplx exact_amplitude(const Problem& p, double t) {
  if (p.h.n() > kDenseMaxQubits) throw std::invalid_argument("exact reference limited to small systems");
  const Mat U = expm_hermitian(hamiltonian_matrix(p.h), t);
  auto vec = [](const Amplitudes& a) {
    Vec v(static_cast<Eigen::Index>(a.size()));
    for (std::size_t k = 0; k < a.size(); ++k) v(static_cast<Eigen::Index>(k)) = a[k];
    return v;
  };
  const Vec vi = vec(p.psi_i.amplitudes()), vf = vec(p.psi_f.amplitudes());
  const Mat O = p.obs.pauli ? to_matrix(*p.obs.pauli) : *p.obs.dense;
  return vf.dot(U.adjoint() * (O * (U * vi)));
}

}  // namespace qcmc
