#include "kawasaki/rng.hpp"

#include <cmath>

namespace kawasaki {
namespace {

// splitmix64 finalizer
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

__extension__ using u128 = unsigned __int128;

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t counter) noexcept
    : seed_(seed), key_(mix64(seed ^ 0x6a09e667f3bcc909ULL)), counter_(counter) {}

CounterRng::result_type CounterRng::operator()() noexcept {
  const std::uint64_t c = counter_++;
  return mix64(mix64(c * kGolden + key_) ^ key_);
}

double CounterRng::uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

double CounterRng::exponential(double rate) noexcept { return -std::log(uniform_pos()) / rate; }

std::uint64_t CounterRng::below(std::uint64_t n) noexcept {
  // Lemire's multiply-shift with rejection of the biased zone
  std::uint64_t x = (*this)();
  u128 m = static_cast<u128>(x) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      x = (*this)();
      m = static_cast<u128>(x) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

}  // namespace kawasaki
