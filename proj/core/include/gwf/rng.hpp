#pragma once

#include <cstdint>

namespace gwf {

// Counter-based 64-bit generator. Output n of stream s under seed k is a
// keyed hash of (k, s, n), so streams are independent by construction and
// results are identical on every platform. Satisfies
// UniformRandomBitGenerator, but the members below should be preferred over
// <random> distributions, whose algorithms are implementation-defined.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept;

  // Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  // Uniform on (0, 1].
  double uniform_positive() noexcept;
  double exponential(double rate) noexcept;
  // Uniform integer on [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound) noexcept;
  bool bernoulli(double p) noexcept { return uniform() < p; }

  // Output number `index` of this stream, without advancing it.
  result_type draw_at(std::uint64_t index) const noexcept;
  double uniform_at(std::uint64_t index) const noexcept {
    return static_cast<double>(draw_at(index) >> 11) * 0x1.0p-53;
  }

  // Independent child stream; does not advance this generator.
  Rng split(std::uint64_t stream) const noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }
  std::uint64_t draws() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace gwf
