#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace sdc {

// Seedable pseudo-random source. A (seed, stream_id) pair fully determines
// the draw sequence; no std::*_distribution is used, so sequences are
// identical across standard library implementations.
//
// Stream-id discipline used throughout the library:
//   - Monte Carlo trial t draws from base.substream(t)
//   - inside a protocol run, shared randomness comes from substream(kSharedStream)
//     and Alice's private randomness from substream(kPrivateStream)
class RandomStream {
 public:
  static constexpr std::uint64_t kSharedStream = 0;
  static constexpr std::uint64_t kPrivateStream = 1;

  explicit RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  // Independent child stream; deterministic in (seed, stream_id, child).
  RandomStream substream(std::uint64_t child) const;

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform();

  // Uniform integer in [0, n); unbiased (rejection sampling). n >= 1.
  std::uint64_t uniform_index(std::uint64_t n);

  // Standard complex Gaussian: real and imaginary parts i.i.d. N(0, 1/2),
  // so E|z|^2 = 1.
  std::complex<double> complex_gaussian();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

}  // namespace sdc
