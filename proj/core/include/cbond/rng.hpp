#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace cbond {

// Seeded RNG with hand-rolled draw helpers. mt19937_64's output sequence is
// fixed by the standard, but std::*_distribution results are not; going
// through these helpers keeps seeded runs byte-identical across toolchains.
class rng {
 public:
  explicit rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform on [lo, hi], inclusive. Modulo bias is ~range/2^64, far below
  // anything observable here.
  int uniform_int(int lo, int hi) {
    const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(gen_() % range);
  }

  // Uniform on (0, 1): 53 random bits, never exactly 0 so log() is safe.
  double uniform01() {
    return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double exponential(double mean) { return -mean * std::log(uniform01()); }

  template <typename T>
  const T& pick(const std::vector<T>& items) {
    return items[static_cast<std::size_t>(uniform_int(0, static_cast<int>(items.size()) - 1))];
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace cbond
