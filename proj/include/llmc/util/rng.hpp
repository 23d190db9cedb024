#pragma once

#include <cstdint>
#include <string>

namespace llmc::util {

// Deterministic RNG (splitmix64). Self-contained so that seeded campaigns
// reproduce bit-for-bit regardless of standard library internals.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n). n must be > 0.
  uint64_t next_below(uint64_t n) {
    // Multiply-shift bound; bias is negligible at campaign scale and the
    // result is platform-stable, which is what matters here.
    return static_cast<uint64_t>((static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  // Uniform in [lo, hi] inclusive.
  int64_t next_in(int64_t lo, int64_t hi) {
    uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    return lo + static_cast<int64_t>(next_below(span));
  }

  bool next_bool() { return (next_u64() & 1) != 0; }

  double next_unit() {  // [0,1)
    return static_cast<double>(next_u64() >> 11) * (1.0 / 9007199254740992.0);
  }

 private:
  uint64_t state_;
};

}  // namespace llmc::util
