#pragma once

#include <cstdint>

namespace mclt {

// splitmix64 finalizer; full-avalanche 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Derives an independent sub-seed from (seed, a, b). Used to give each
// grid point / estimation pass its own master seed.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                    std::uint64_t b = 0) noexcept {
  std::uint64_t s = mix64(seed);
  s = mix64(s ^ (a + 0xD1B54A32D192ED03ULL));
  s = mix64(s ^ (b + 0x8CB92BA72F3D8DD7ULL));
  return s;
}

// Counter-free splitmix64 stream. The initial state is a hash of
// (master_seed, stream, phase), so any worker can construct the stream for
// any unit of work independently; results never depend on thread count.
class RngStream {
 public:
  explicit RngStream(std::uint64_t master_seed, std::uint64_t stream = 0,
                     std::uint64_t phase = 0) noexcept
      : state_(derive_seed(master_seed, stream, phase)) {}

  std::uint64_t next_u64() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1), 53 random bits.
  double next_unit() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Fair coin.
  bool next_bit() noexcept { return (next_u64() >> 63) != 0; }

  double next_sign() noexcept { return next_bit() ? 1.0 : -1.0; }

  // UniformRandomBitGenerator interface, for <random> distributions in tests.
  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() noexcept { return next_u64(); }

 private:
  std::uint64_t state_;
};

// Buffered fair-sign source: one next_u64() feeds up to 64 steps.
class SignBuffer {
 public:
  explicit SignBuffer(RngStream& rng) noexcept : rng_(&rng) {}

  double next() noexcept {
    if (remaining_ == 0) {
      bits_ = rng_->next_u64();
      remaining_ = 64;
    }
    const double s = (bits_ & 1u) ? 1.0 : -1.0;
    bits_ >>= 1;
    --remaining_;
    return s;
  }

 private:
  RngStream* rng_;
  std::uint64_t bits_ = 0;
  int remaining_ = 0;
};

}  // namespace mclt
