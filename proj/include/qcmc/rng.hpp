#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace qcmc {

using Philox4x32Block = std::array<std::uint32_t, 4>;

// Philox4x32 with 10 rounds.
Philox4x32Block philox4x32_10(Philox4x32Block counter, std::array<std::uint32_t, 2> key);

// Stream purposes, so independent consumers never share counters.
enum class StreamKind : std::uint32_t { Trace = 1, Shots = 2, Noise = 3, Pec = 4, Aux = 5 };

// Counter-based generator keyed by the master seed; the counter holds
// (sample index, stream kind, block). Satisfies UniformRandomBitGenerator.
class Rng {
 public:
  using result_type = std::uint64_t;

  Rng(std::uint64_t seed, std::uint64_t index, StreamKind kind = StreamKind::Trace, std::uint32_t sub = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  // Uniform on [0, 1) with 53 random bits.
  double uniform();

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  Philox4x32Block ctr_;
  Philox4x32Block buf_{};
  int used_ = 4;
};

}  // namespace qcmc
