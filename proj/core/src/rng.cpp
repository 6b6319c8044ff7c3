#include "gwf/rng.hpp"

#include <cmath>

namespace gwf {

namespace {

__extension__ using Uint128 = unsigned __int128;

std::uint64_t derive_key(std::uint64_t seed, std::uint64_t stream) noexcept {
  return mix64(mix64(seed) ^ mix64(stream ^ 0x5851f42d4c957f2dULL));
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream) noexcept
    : seed_(seed), stream_(stream), key_(derive_key(seed, stream)) {}

Rng::result_type Rng::draw_at(std::uint64_t index) const noexcept {
  return mix64(key_ ^ mix64(index * 0xd1342543de82ef95ULL));
}

Rng::result_type Rng::operator()() noexcept { return draw_at(counter_++); }

double Rng::uniform() noexcept {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double Rng::uniform_positive() noexcept {
  return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53;
}

double Rng::exponential(double rate) noexcept {
  return -std::log(uniform_positive()) / rate;
}

std::uint64_t Rng::below(std::uint64_t bound) noexcept {
  // Lemire's nearly divisionless method.
  std::uint64_t x = (*this)();
  Uint128 m = static_cast<Uint128>(x) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      x = (*this)();
      m = static_cast<Uint128>(x) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

Rng Rng::split(std::uint64_t stream) const noexcept {
  return Rng(mix64(key_ + 0x632be59bd9b4e019ULL), stream);
}

}  // namespace gwf
