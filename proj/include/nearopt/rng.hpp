#pragma once
#include <cstdint>
#include <random>

namespace nearopt {

// splitmix64 step; used to derive independent substream seeds.
uint64_t splitmix64(uint64_t& state);

// Seed for an indexed substream (chain c, sample i, ...) of a master seed.
// Pure function of its inputs, so parallel consumers agree with serial ones.
uint64_t substream_seed(uint64_t master, uint64_t index);

// Deterministic RNG. std::uniform_real_distribution is implementation
// defined, so the uniform draws are done by hand on top of mt19937_64,
// whose output sequence is fixed by the standard.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  // uniform in [0,1)
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  // uniform in [lo,hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  // uniform integer in {0,...,n-1} via rejection (unbiased)
  uint64_t below(uint64_t n);
  // standard normal (Box-Muller, two draws per call, no caching)
  double normal();

  uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace nearopt
