#include <benchmark/benchmark.h>

#include <cmath>

#include "qcmc/kernels.hpp"

using namespace qcmc;

namespace {

Amplitudes random_state(int bits) {
  Amplitudes psi(std::size_t(1) << bits);
  for (std::size_t k = 0; k < psi.size(); ++k) psi[k] = {std::sin(0.37 * k), std::cos(0.11 * k)};
  return psi;
}

kernels::PauliMask dense_pauli(int bits) {
  // XYZ repeated across the register.
  kernels::PauliMask m;
  for (int b = 0; b < bits; ++b) {
    if (b % 3 != 2) m.x |= std::uint64_t(1) << b;
    if (b % 3 != 0) m.z |= std::uint64_t(1) << b;
  }
  return m;
}

template <bool Parallel>
void BM_OneQubit(benchmark::State& st) {
  const int bits = static_cast<int>(st.range(0));
  auto psi = random_state(bits);
  const auto u = mat2::hadamard();
  for (auto _ : st) {
    for (int t = 0; t < bits; ++t) {
      if constexpr (Parallel) kernels::omp::apply_1q(psi, t, u);
      else kernels::serial::apply_1q(psi, t, u);
    }
    benchmark::DoNotOptimize(psi.data());
  }
  st.SetItemsProcessed(st.iterations() * bits * static_cast<long>(psi.size()));
}

template <bool Parallel>
void BM_ControlledRotation(benchmark::State& st) {
  const int bits = static_cast<int>(st.range(0));
  auto psi = random_state(bits);
  auto m = dense_pauli(bits);
  m.x &= ~std::uint64_t(1);
  m.z &= ~std::uint64_t(1);
  for (auto _ : st) {
    if constexpr (Parallel) kernels::omp::apply_pauli_rotation(psi, m, 0.1, 0, 0);
    else kernels::serial::apply_pauli_rotation(psi, m, 0.1, 0, 0);
    benchmark::DoNotOptimize(psi.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<long>(psi.size()));
}

template <bool Parallel>
void BM_ExpectPauli(benchmark::State& st) {
  const int bits = static_cast<int>(st.range(0));
  auto psi = random_state(bits);
  const auto m = dense_pauli(bits);
  for (auto _ : st) {
    double v = Parallel ? kernels::omp::expect_pauli(psi, m) : kernels::serial::expect_pauli(psi, m);
    benchmark::DoNotOptimize(v);
  }
  st.SetItemsProcessed(st.iterations() * static_cast<long>(psi.size()));
}

}  // namespace

BENCHMARK(BM_OneQubit<false>)->DenseRange(12, 22, 5)->Name("serial/apply_1q");
BENCHMARK(BM_OneQubit<true>)->DenseRange(12, 22, 5)->Name("omp/apply_1q");
BENCHMARK(BM_ControlledRotation<false>)->DenseRange(12, 22, 5)->Name("serial/controlled_rotation");
BENCHMARK(BM_ControlledRotation<true>)->DenseRange(12, 22, 5)->Name("omp/controlled_rotation");
BENCHMARK(BM_ExpectPauli<false>)->DenseRange(12, 22, 5)->Name("serial/expect_pauli");
BENCHMARK(BM_ExpectPauli<true>)->DenseRange(12, 22, 5)->Name("omp/expect_pauli");

BENCHMARK_MAIN();
