#pragma once
#include <cstdint>

namespace mkdv {

// splitmix64; used both as a generator and to derive independent
// per-cell streams from (seed, cell index) so parallel sampling stays
// deterministic under any scheduling.
struct SplitMix64 {
  uint64_t state;

  explicit SplitMix64(uint64_t seed) : state(seed) {}

  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in [0,1)
  double uniform() { return (next() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }
};

inline uint64_t derive_stream(uint64_t seed, uint64_t cell) {
  SplitMix64 g(seed ^ (0x632be59bd9b4e019ull * (cell + 1)));
  g.next();
  return g.next();
}

}  // namespace mkdv
