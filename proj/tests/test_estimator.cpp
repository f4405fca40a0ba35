#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <tuple>

#include "trace_oracle.hpp"
#include "qcmc/estimator.hpp"

using namespace qcmc;

namespace {

Problem x_problem() {
  return {Hamiltonian(1, {{1.0, PauliString::parse("X")}}), StateSpec::zeros(1), StateSpec::zeros(1),
          Observable::from_pauli(PauliString::parse("Z"))};
}

Problem heisenberg2() {
  LatticeSpec s;
  s.model = Model::Heisenberg;
  s.sites = 2;
  s.J = 1;
  s.h = 1;
  return {build_model(s), StateSpec::from_product("01"), StateSpec::from_product("01"),
          Observable::from_pauli(PauliString::parse("ZI"))};
}

Problem hubbard(int sites, const std::string& occ) {
  LatticeSpec s;
  s.sites = sites;
  s.J = 2;
  s.U = 4;
  const int n = 2 * sites;
  return {build_model(s), StateSpec::from_product(occ), StateSpec::from_product(occ),
          Observable::from_pauli(PauliString::single(n, n - 1, 'X'))};
}

// Dense oracle for the full evolution.
cplx oracle_amplitude(const Problem& p, double t) {
  const cplx i(0, 1);
  oracle::Mat H = oracle::hamiltonian(p.h);
  oracle::Mat U = oracle::expm(-i * t * H);
  oracle::Mat O = p.obs.pauli->phase() * oracle::kron_literal(p.obs.pauli->canonical().to_string());
  oracle::Vec vi = oracle::product_state(p.psi_i.product), vf = oracle::product_state(p.psi_f.product);
  return vf.dot(U.adjoint() * O * U * vi);
}

RunConfig config(long N_s, std::uint64_t seed, int M_s = 1) {
  RunConfig c;
  c.N_s = N_s;
  c.M_s = M_s;
  c.seed = seed;
  return c;
}

}  // namespace

TEST(Estimator, ExactAmplitudeMatchesOracle) {
  auto p = x_problem();
  EXPECT_NEAR(exact_amplitude(p, std::numbers::pi / 8).real(), std::cos(std::numbers::pi / 4), 1e-14);
  for (auto q : {heisenberg2(), hubbard(2, "+--+")})
    for (double t : {0.3, 1.1}) EXPECT_LT(std::abs(exact_amplitude(q, t) - oracle_amplitude(q, t)), 1e-12);
}

TEST(Estimator, SingleQubitRotation) {
  auto p = x_problem();
  const double t = std::numbers::pi / 8;
  for (const char* f : {"poe0", "poe1", "lor1"}) {
    auto e = qcmc_run(p, FormulaChoice::parse(f), t, 8, config(20000, 1));
    EXPECT_NEAR(e.A.real(), 0.70711, 5 * e.stderr_re) << f;
    EXPECT_NEAR(e.A.imag(), 0.0, 5 * e.stderr_im + 1e-12) << f;
  }
  // One term: C_L = 0, so the formula collapses to the product formula with C_A = 1 + C_T.
  auto f = build_formula(p.h, FormulaChoice::parse("lor1"), t / 8);
  EXPECT_EQ(f.c_l, 0.0);
  EXPECT_GT(f.c_t, 0.0);
  EXPECT_NEAR(f.c_a, 1.0 + f.c_t, 1e-15);
}

TEST(Estimator, ZeroTime) {
  auto p = heisenberg2();
  p.obs = Observable::from_pauli(PauliString::parse("-ZZ"));
  auto e = qcmc_run(p, FormulaChoice::parse("poe1"), 0.0, 0, config(4000, 2));
  EXPECT_DOUBLE_EQ(e.scale, 1.0);
  EXPECT_EQ(e.N, 0);
  // <01|(-ZZ)|01> = 1.
  EXPECT_NEAR(e.A.real(), 1.0, 1e-12);
  EXPECT_EQ(e.shots, 4000);
}

TEST(Estimator, ScaleBookkeeping) {
  auto p = heisenberg2();
  RunConfig cfg = config(200, 3);
  cfg.shots = ShotMode::Expectation;
  auto a = qcmc_run(p, FormulaChoice::parse("poe1"), 0.4, 4, cfg);
  auto b = qcmc_run(p, FormulaChoice::parse("poe1"), 0.8, 8, cfg);
  EXPECT_NEAR(a.scale, std::pow(a.c_a, 8), 1e-14);
  EXPECT_NEAR(b.scale / (a.scale * a.scale), 1.0, 1e-13);
  double mean_re = 0;
  cfg.keep_samples = true;
  auto k = qcmc_run(p, FormulaChoice::parse("poe1"), 0.4, 4, cfg);
  for (const auto& s : k.samples) mean_re += s.value.real();
  EXPECT_NEAR(k.A.real(), k.scale * mean_re / k.samples.size(), 1e-12);
}

TEST(Estimator, PredictVarianceExamples) {
  EXPECT_DOUBLE_EQ(predict_variance(1.0, 5, 100, 1.0), 1.0 / 100);
  EXPECT_DOUBLE_EQ(predict_variance(1.0, 5, 100, 0.0), 2.0 / 100);
  EXPECT_NEAR(predict_variance(1.1, 2, 10, 0.5), (2 * std::pow(1.1, 8) - 0.25) / 10, 1e-15);
}

TEST(Estimator, PhaseAverage) {
  EXPECT_EQ(phase_average({{2, 0}, {0.5, 0}}), cplx(1, 0));
  EXPECT_EQ(phase_average({{0, 3}, {0, 0}}), cplx(0, 0.5));
  EXPECT_EQ(phase_average({}), cplx(0, 0));
}

// Var(A) = (2 C_A^{4N} - |A|^2) / M_tot at M_s = 1.
TEST(EstimatorProperty, VarianceLaw) {
  auto p = heisenberg2();
  const double t = 0.6;
  const int N = 6;
  const long Ns = 40000;
  auto e = qcmc_run(p, FormulaChoice::parse("lor1"), t, N, config(Ns, 4));
  const double var = Ns * (e.stderr_re * e.stderr_re + e.stderr_im * e.stderr_im);
  const double want = Ns * predict_variance(e.c_a, N, Ns, std::abs(exact_amplitude(p, t)));
  EXPECT_NEAR(var / want, 1.0, 0.2);
  EXPECT_LE(var, 2 * std::pow(e.c_a, 4 * N) * 1.05);
}

TEST(EstimatorProperty, SingleShotIsOptimal) {
  auto p = heisenberg2();
  const double t = 0.6;
  const int N = 6;
  const long M_tot = 100000;
  // Repeat runs for an empirical variance of A and its uncertainty.
  auto emp = [&](int M_s) {
    const int R = 100;
    std::vector<double> v;
    for (int r = 0; r < R; ++r) {
      auto e = qcmc_run(p, FormulaChoice::parse("poe1"), t, N, config(M_tot / M_s / R, 100 + r, M_s));
      v.push_back(std::norm(e.A - exact_amplitude(p, t)));
    }
    double m = 0, s = 0;
    for (double x : v) m += x;
    m /= R;
    for (double x : v) s += (x - m) * (x - m);
    return std::pair{m, std::sqrt(s / (R - 1) / R)};
  };
  auto [v1, s1] = emp(1);
  auto [v10, s10] = emp(10);
  EXPECT_LT(v1, v10);
  EXPECT_GT(v10 - v1, 4 * std::hypot(s1, s10)) << v1 << " vs " << v10;
}

// |A - exact| within 5 stderr in at least 95 of 100 repetitions, per benchmark and formula.
TEST(EstimatorProperty, Unbiased) {
  struct Case {
    Problem p;
    double t;
    int N;
  };
  std::vector<Case> cases{{x_problem(), 0.5, 4}, {heisenberg2(), 0.5, 4}, {hubbard(2, "+--+"), 0.4, 4}};
  for (const auto& c : cases) {
    const cplx exact = exact_amplitude(c.p, c.t);
    for (const char* f : {"poe0", "poe1", "poe2", "lor1", "lor2"}) {
      int ok = 0;
      for (int r = 0; r < 100; ++r) {
        auto e = qcmc_run(c.p, FormulaChoice::parse(f), c.t, c.N, config(300, 1000 + r));
        const bool re = std::abs(e.A.real() - exact.real()) <= 5 * e.stderr_re + 1e-12;
        const bool im = std::abs(e.A.imag() - exact.imag()) <= 5 * e.stderr_im + 1e-12;
        ok += re && im;
      }
      EXPECT_GE(ok, 95) << f << " n=" << c.p.h.n();
    }
  }
}

TEST(EstimatorProperty, CircuitModesAgreeWithDirect) {
  auto p = heisenberg2();
  RunConfig cfg = config(300, 5);
  cfg.shots = ShotMode::Expectation;
  cfg.keep_samples = true;
  auto d = qcmc_run(p, FormulaChoice::parse("lor2"), 0.5, 3, cfg);
  for (auto mode : {EvalMode::Compact, EvalMode::ForwardBackward}) {
    cfg.mode = mode;
    auto c = qcmc_run(p, FormulaChoice::parse("lor2"), 0.5, 3, cfg);
    ASSERT_EQ(c.samples.size(), d.samples.size());
    for (std::size_t k = 0; k < c.samples.size(); ++k) ASSERT_LT(std::abs(c.samples[k].value - d.samples[k].value), 1e-9);
    EXPECT_LT(std::abs(c.A - d.A), 1e-9);
  }
  cfg.mode = EvalMode::ForwardBackward;
  cfg.mitigation = Mitigation::Postselect;
  auto ps = qcmc_run(p, FormulaChoice::parse("lor2"), 0.5, 3, cfg);
  EXPECT_LT(std::abs(ps.A - d.A), 1e-9);
  EXPECT_EQ(ps.postselect_failures, 0);
}

TEST(Estimator, RejectsBadConfigs) {
  auto p = heisenberg2();
  NoiseModel noise;
  noise.two_qubit = PauliChannel::depolarizing(2, 0.01);
  EXPECT_THROW(qcmc_run(p, FormulaChoice::parse("poe1"), 0.5, 2, config(10, 1), &noise), std::invalid_argument);
  RunConfig cfg = config(10, 1);
  cfg.mode = EvalMode::Compact;
  cfg.mitigation = Mitigation::Postselect;
  EXPECT_THROW(qcmc_run(p, FormulaChoice::parse("poe1"), 0.5, 2, cfg), std::invalid_argument);
  cfg.mitigation = Mitigation::Pec;
  EXPECT_THROW(qcmc_run(p, FormulaChoice::parse("poe1"), 0.5, 2, cfg), std::invalid_argument);
  EXPECT_THROW(FormulaChoice::parse("poe3"), std::invalid_argument);
}

TEST(Classical, AmplitudesArePauliPhases) {
  auto p = hubbard(2, "+--+");
  ASSERT_TRUE(classical_supported(p));
  RunConfig cfg = config(2000, 6);
  cfg.keep_samples = true;
  auto e = classical_run(p, 0.4, 8, cfg);
  int nonzero = 0;
  for (const auto& s : e.samples) {
    const cplx v = s.value;
    const bool ok = v == cplx(0) || v == cplx(1) || v == cplx(-1) || v == cplx(0, 1) || v == cplx(0, -1);
    ASSERT_TRUE(ok) << v;
    nonzero += v != cplx(0);
  }
  EXPECT_GT(nonzero, 0);
  EXPECT_LE(std::abs(e.phase_average), 1.0);
  auto bad = p;
  bad.psi_f = StateSpec::from_product("0--+");
  EXPECT_FALSE(classical_supported(bad));
}

// In the computational basis both engines sample the same Hamiltonian, so
// identical seeds give identical traces and amplitudes.
TEST(ClassicalProperty, MatchesStatevectorTraceByTrace) {
  LatticeSpec spec;
  spec.model = Model::Heisenberg;
  spec.sites = 6;
  spec.J = 1;
  spec.h = 1;
  Problem p{build_model(spec), StateSpec::from_product("010101"), StateSpec::from_product("010101"),
            Observable::from_pauli(PauliString::single(6, 3, 'Z'))};
  RunConfig cfg = config(3000, 7);
  cfg.shots = ShotMode::Expectation;
  cfg.keep_samples = true;
  auto c = classical_run(p, 0.2, 10, cfg);
  auto q = qcmc_run(p, FormulaChoice::parse("poe0"), 0.2, 10, cfg);
  ASSERT_EQ(c.samples.size(), q.samples.size());
  for (std::size_t k = 0; k < c.samples.size(); ++k) ASSERT_LT(std::abs(c.samples[k].value - q.samples[k].exact), 1e-12) << k;
}

// X-basis states rotate the Hamiltonian, which reorders the sampled terms;
// the engines then agree only in distribution.
TEST(ClassicalProperty, AgreesWithStatevectorOnHubbard) {
  auto p = hubbard(3, "+--++-");
  for (auto [t, N, Ns] : {std::tuple{0.1, 5, 20000L}, std::tuple{0.5, 25, 20000L}}) {
    auto c = classical_run(p, t, N, config(Ns, 8));
    auto q = qcmc_run(p, FormulaChoice::parse("poe0"), t, N, config(Ns, 9));
    const cplx exact = exact_amplitude(p, t);
    EXPECT_NEAR(c.A.real(), q.A.real(), 5 * std::hypot(c.stderr_re, q.stderr_re)) << t;
    EXPECT_NEAR(c.A.imag(), q.A.imag(), 5 * std::hypot(c.stderr_im, q.stderr_im) + 1e-12) << t;
    EXPECT_NEAR(c.A.real(), exact.real(), 5 * c.stderr_re) << t;
  }
}
