#pragma once

#include <cstdint>

namespace scompress {

// SplitMix64. All corpus generation and sampling flows through this so runs
// are bit-reproducible from a single 64-bit seed.
//
// Split tree: child streams are derived as split(tag), never by sharing a
// stream. The harness uses seed -> split(entry index) per corpus entry and
// seed -> split(entry) -> split(sample index) per sample.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(mix(seed ^ kGamma)) {}

  std::uint64_t next_u64() {
    state_ += kGamma;
    return mix(state_);
  }

  // Uniform in [0, n). n must be > 0. Modulo bias is irrelevant here; the
  // contract is determinism, not statistical quality.
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

  Rng split(std::uint64_t tag) const {
    return Rng(mix(state_ ^ mix(tag + 0x632BE59BD9B4E019ULL)));
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
  std::uint64_t state_;
};

}  // namespace scompress
