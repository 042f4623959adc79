#pragma once

#include <cstdint>
#include <random>

namespace qtrack {

// Finalizer from the splitmix64 generator. Used for seed derivation so that
// per-trial streams are independent of execution order.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Stable seed derivation: hash(master, stream, index). The exact mixing is
// part of the reproducibility contract; changing it changes every result.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                 std::uint64_t index = 0) {
  return mix64(mix64(mix64(master) ^ stream) ^ index);
}

// Seeded stream wrapper. mt19937_64 output is pinned by the standard, and the
// uniform/bernoulli mappings below avoid std::..._distribution (whose output
// is implementation-defined), so identical seeds give identical draws on any
// conforming platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform_in(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qtrack
