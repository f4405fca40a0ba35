#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include <boost/math/distributions/chi_squared.hpp>

#include "trace_oracle.hpp"
#include "qcmc/sampler.hpp"

using namespace qcmc;

namespace {

const cplx I1(0, 1);

double poisson_tail(double mu, int k_min) {
  double s = 0, p = std::exp(-mu);
  for (int k = 0; k < k_min; ++k) {
    s += p;
    p *= mu / (k + 1);
  }
  return 1.0 - s;
}

const Hamiltonian kTwoQubit(2, {{0.5, PauliString::parse("XI")}, {-0.3, PauliString::parse("ZY")}, {0.2, PauliString::parse("YZ")}});

}  // namespace

TEST(Rng, PhiloxKnownAnswers) {
  auto a = philox4x32_10({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(a, (Philox4x32Block{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  auto b = philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff});
  EXPECT_EQ(b, (Philox4x32Block{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  auto c = philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0});
  EXPECT_EQ(c, (Philox4x32Block{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Rng, StreamsAreDistinctAndReproducible) {
  Rng a(7, 3), b(7, 3), c(7, 4), d(7, 3, StreamKind::Shots), e(8, 3);
  const auto x = a();
  EXPECT_EQ(x, b());
  EXPECT_NE(x, c());
  EXPECT_NE(x, d());
  EXPECT_NE(x, e());
  Rng u(1, 0);
  for (int i = 0; i < 1000; ++i) {
    double v = u.uniform();
    ASSERT_GE(v, 0.0);
    ASSERT_LT(v, 1.0);
  }
}

TEST(Poisson, ZeroMean) {
  Rng rng(1, 0);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(poisson(0.0, rng), 0);
  EXPECT_THROW(poisson(-0.1, rng), std::invalid_argument);
}

TEST(Poisson, SmallMeanStatistics) {
  Rng rng(2, 0);
  const int M = 1'000'000;
  const double x = 0.2, p0 = std::exp(-0.2);
  long zeros = 0, sum = 0;
  for (int i = 0; i < M; ++i) {
    int k = poisson(x, rng);
    zeros += k == 0;
    sum += k;
  }
  EXPECT_NEAR(p0, 0.8187, 5e-5);
  EXPECT_NEAR(double(zeros) / M, p0, 4 * std::sqrt(p0 * (1 - p0) / M));
  EXPECT_NEAR(double(sum) / M, x, 4 * std::sqrt(x / M));
}

TEST(Poisson, LargeMeanStatistics) {
  Rng rng(3, 0);
  const int M = 200'000;
  const double x = 45.0;
  double sum = 0;
  for (int i = 0; i < M; ++i) sum += poisson(x, rng);
  EXPECT_NEAR(sum / M, x, 4 * std::sqrt(x / M));
}

TEST(StepSampler, PoeIdentityFrequency) {
  auto f = make_formula(kTwoQubit, Flavor::POE, 1, 0.4);
  StepSampler s(kTwoQubit, f);
  Rng rng(4, 0);
  const int M = 100'000;
  int ids = 0;
  for (int i = 0; i < M; ++i) {
    // The T branch can also land on the identity; only the leading entry counts.
    auto d = s.draw(rng);
    ids += d.branch == Branch::Leading && d.op.kind == CorrectionOp::Kind::Identity;
  }
  const double p = 1.0 / f.c_a;
  EXPECT_NEAR(double(ids) / M, p, 4 * std::sqrt(p * (1 - p) / M));
  // Branch product form.
  EXPECT_NEAR(p, (f.c_a - f.c_t) / f.c_a / (1 + f.c_l), 1e-15);
}

TEST(StepSampler, SecondOrderHighBranchProbability) {
  // h_tot = 1, so x = dt = 0.1.
  Hamiltonian h(2, {{0.6, PauliString::parse("XZ")}, {-0.4, PauliString::parse("ZX")}});
  auto f = make_formula(h, Flavor::POE, 2, 0.1);
  // Poisson tail of rate 2x at order 6, from the summed rates of the three factors.
  const double c_t = poisson_tail(0.2, 6) * std::exp(0.2);
  EXPECT_NEAR(f.c_t / c_t, 1.0, 1e-8);
  const double p_t = f.c_t / f.c_a;
  // Frozen oracle value with instance C_L; 9.13e-8 is within 0.3%.
  EXPECT_NEAR(p_t, 9.14935e-8, 1e-13);
  EXPECT_NEAR(p_t / 9.13e-8, 1.0, 3e-3);
}

TEST(StepSampler, LorLeadingDrawsHaveZeroPhase) {
  auto f = make_formula(kTwoQubit, Flavor::LOR, 1, 0.4);
  StepSampler s(kTwoQubit, f);
  Rng rng(5, 0);
  for (int i = 0; i < 20000; ++i) {
    auto d = s.draw(rng);
    if (d.branch == Branch::Leading) {
      ASSERT_EQ(d.quarter, 0);
      ASSERT_EQ(d.op.kind, CorrectionOp::Kind::Rotation);
    } else {
      ASSERT_EQ(d.op.pauli.phase_exp(), 0);
    }
  }
}

TEST(StepSampler, PoePhaseFollowsCoefficientSign) {
  auto f = make_formula(kTwoQubit, Flavor::POE, 1, 0.4);
  StepSampler s(kTwoQubit, f);
  int neg = 0, pos = 0;
  for (const auto& e : s.entries()) {
    if (e.op.kind != CorrectionOp::Kind::Pauli) continue;
    double alpha = 0;
    for (const auto& t : f.leading.terms)
      if (t.tau == e.op.pauli) alpha = t.alpha;
    ASSERT_NE(alpha, 0.0);
    // arg(-i alpha): -pi/2 for alpha > 0, +pi/2 for alpha < 0.
    EXPECT_EQ(e.quarter, alpha > 0 ? 3 : 1);
    EXPECT_DOUBLE_EQ(e.weight, std::abs(alpha));
    (alpha > 0 ? pos : neg)++;
  }
  EXPECT_GT(neg + pos, 0);
}

TEST(HighOrder, OutputCanonicalAndOrderReached) {
  Rng rng(6, 0);
  for (int l : {0, 1, 2}) {
    HighOrderSampler hs(kTwoQubit, 0.5, l);
    for (int i = 0; i < 200; ++i) {
      auto d = hs.draw(rng);
      ASSERT_EQ(d.w.phase_exp(), 0);
      ASSERT_GE(d.iterations, 1);
    }
  }
  EXPECT_THROW(HighOrderSampler(kTwoQubit, 0.5, 3), std::invalid_argument);
}

TEST(HighOrder, RejectionIterationsMatchPoissonTail) {
  // l = 2 at x = 0.5: total order ~ Poisson(2x), accepted when >= 6.
  const double x = 0.5;
  Hamiltonian h(2, {{0.3, PauliString::parse("XZ")}, {-0.2, PauliString::parse("YY")}});
  HighOrderSampler hs(h, x / h.h_tot(), 2);
  Rng rng(7, 0);
  const int M = 8000;
  double iters = 0;
  for (int i = 0; i < M; ++i) iters += hs.draw(rng).iterations;
  const double want = 1.0 / poisson_tail(2 * x, 6);
  EXPECT_NEAR(iters / M / want, 1.0, 0.05);
}

TEST(HighOrder, IterationCeiling) {
  HighOrderSampler hs(kTwoQubit, 1e-4, 2);
  Rng rng(8, 0);
  EXPECT_THROW(hs.draw(rng, 100), std::runtime_error);
}

// One qubit, two terms, l = 1: categories are the leading entries and the T branch.
TEST(SamplerProperty, OneStepDistributionLaw) {
  Hamiltonian h(1, {{0.7, PauliString::parse("X")}, {-0.4, PauliString::parse("Z")}});
  auto f = make_formula(h, Flavor::POE, 1, 0.3);
  StepSampler s(h, f);
  std::vector<double> expect;
  for (const auto& e : s.entries()) expect.push_back(e.weight / f.c_a);
  expect.push_back(f.c_t / f.c_a);
  ASSERT_GE(expect.size(), 3u);

  const int M = 100'000;
  std::vector<long> count(expect.size(), 0);
  Rng rng(9, 0);
  for (int i = 0; i < M; ++i) {
    auto d = s.draw(rng);
    if (d.branch == Branch::HighOrder) {
      ++count.back();
      continue;
    }
    std::size_t k = 0;
    for (; k < s.entries().size(); ++k)
      if (s.entries()[k].op.to_string() == d.op.to_string() && s.entries()[k].quarter == d.quarter) break;
    ASSERT_LT(k, s.entries().size());
    ++count[k];
  }
  double chi2 = 0;
  for (std::size_t k = 0; k < expect.size(); ++k) {
    const double e = expect[k] * M;
    chi2 += (count[k] - e) * (count[k] - e) / e;
  }
  boost::math::chi_squared dist(double(expect.size() - 1));
  EXPECT_GT(boost::math::cdf(boost::math::complement(dist, chi2)), 0.01) << chi2;
}

// C_A E[e^{i theta} K_L W K_R] = e^{-iH dt}: the leading part summed exactly,
// the T branch by Monte Carlo.
TEST(SamplerProperty, WeightIdentityReconstructsEvolution) {
  const double dt = 0.5;
  const int n = 2;
  const oracle::Mat exact = oracle::expm(-I1 * dt * oracle::hamiltonian(kTwoQubit));
  for (Flavor fl : {Flavor::POE, Flavor::LOR}) {
    for (int l : {0, 1, 2}) {
      auto f = make_formula(kTwoQubit, fl, l, dt);
      StepSampler s(kTwoQubit, f);
      oracle::Mat w = oracle::Mat::Zero(1 << n, 1 << n);
      for (const auto& e : s.entries()) w += e.weight * std::pow(I1, e.quarter) * oracle::op_matrix(e.op, n);
      const int M = l == 2 ? 2000 : 100'000;
      HighOrderSampler hs(kTwoQubit, dt, l);
      Rng rng(10 + l, 0);
      oracle::Mat t = oracle::Mat::Zero(1 << n, 1 << n);
      for (int i = 0; i < M; ++i) {
        auto d = hs.draw(rng);
        t += std::pow(I1, d.quarter) * oracle::kron_literal(d.w.to_string());
      }
      w += f.c_t / M * t;
      oracle::Mat u = oracle::seq_matrix(s.left_block(), n) * w * oracle::seq_matrix(s.right_block(), n);
      const double tol = 5 * f.c_t / std::sqrt(double(M)) + 1e-12;
      EXPECT_LT((u - exact).cwiseAbs().maxCoeff(), tol) << to_string(fl) << " l=" << l;
    }
  }
}

TEST(SamGen, EmptyTrace) {
  StepSampler s(kTwoQubit, make_formula(kTwoQubit, Flavor::POE, 1, 0.1));
  Rng rng(11, 0);
  auto t = sam_gen(s, 0, rng);
  EXPECT_TRUE(t.W.empty());
  EXPECT_EQ(t.quarter, 0);
  EXPECT_THROW(sam_gen(s, -1, rng), std::invalid_argument);
}

TEST(SamGen, PhaseIsForwardMinusBackward) {
  StepSampler s(kTwoQubit, make_formula(kTwoQubit, Flavor::POE, 1, 0.4));
  for (std::uint64_t idx = 0; idx < 50; ++idx) {
    Rng a(12, idx), b(12, idx);
    auto t = sam_gen(s, 5, a);
    ASSERT_EQ(t.W.size(), 10u);
    int q = 0;
    for (int i = 0; i < 10; ++i) {
      auto d = s.draw(b);
      ASSERT_EQ(d.op.to_string(), t.W[i].to_string());
      q += i < 5 ? d.quarter : -d.quarter;
    }
    ASSERT_EQ(t.quarter, ((q % 4) + 4) % 4);
    ASSERT_NEAR(std::abs(t.theta() - t.quarter * std::acos(-1.0) / 2), 0.0, 1e-15);
  }
}

TEST(SamGen, DeterministicPerIndex) {
  StepSampler s(kTwoQubit, make_formula(kTwoQubit, Flavor::LOR, 2, 0.3));
  SamplerConfig cfg{s.formula(), 4, 99};
  for (std::uint64_t i = 0; i < 20; ++i) EXPECT_EQ(dump_trace(i, sam_gen(s, cfg, i)), dump_trace(i, sam_gen(s, cfg, i)));
  std::set<std::string> distinct;
  for (std::uint64_t i = 0; i < 20; ++i) distinct.insert(dump_trace(0, sam_gen(s, cfg, i)));
  EXPECT_GT(distinct.size(), 1u);
}

TEST(CorrectionOp, LiteralRoundTrip) {
  for (std::string lit : {"XZ", "R+0.125:YI", "R-0.5:ZZ"}) EXPECT_EQ(CorrectionOp::parse(lit).to_string(), lit);
  EXPECT_EQ(CorrectionOp::from_pauli(PauliString(2)).kind, CorrectionOp::Kind::Identity);
  EXPECT_EQ(CorrectionOp::parse("R+0.25:X").adjoint().sign, -1);
  EXPECT_THROW(CorrectionOp::parse("I"), std::invalid_argument);
  EXPECT_THROW(CorrectionOp::from_pauli(PauliString::parse("-X")), std::invalid_argument);
}
