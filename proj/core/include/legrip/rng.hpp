// Counter-based splittable PRNG (splitmix64 stream with random access).
// Every consumer derives values by (seed, counter), so results never depend
// on evaluation order or thread scheduling.
#pragma once

#include <cstdint>

namespace legrip {

inline constexpr const char* kRngAlgoId = "splitmix64";

struct SplitMix64 {
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // counter-th output of the splitmix64 stream keyed by seed.
  static std::uint64_t at(std::uint64_t seed, std::uint64_t counter) {
    return mix(seed + (counter + 1) * kGolden);
  }

  // Sub-seed for an independent stream; counter-splitting for parallel work.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    return at(mix(seed ^ 0x5851f42d4c957f2dULL), stream);
  }
};

// Sequential view over one splitmix64 stream.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next() { return SplitMix64::at(seed_, counter_++); }

  // Uniform in [0, n); n > 0. Modulo bias is irrelevant at the scales used.
  std::uint64_t next_below(std::uint64_t n) { return next() % n; }

  // Uniform in [0, 1) with 53 bits.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  int next_sign() { return (next() >> 63) ? -1 : +1; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace legrip
