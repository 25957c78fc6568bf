#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace xrp {

// splitmix64 finalizer, used to derive independent child seeds.
inline uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t derive_seed(uint64_t seed, uint64_t a) { return mix64(seed ^ mix64(a)); }

inline uint64_t derive_seed(uint64_t seed, uint64_t a, uint64_t b) {
  return mix64(derive_seed(seed, a) ^ mix64(b ^ 0x6a09e667f3bcc909ULL));
}

// Deterministic generator: std::mt19937_64 (output sequence fixed by the
// standard) with hand-rolled draws, so identical seeds give identical
// sequences on every platform. Splittable per (epoch, sample) via child().
class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed), gen_(seed) {}

  uint64_t seed() const { return seed_; }
  Rng child(uint64_t a) const { return Rng(derive_seed(seed_, a)); }
  Rng child(uint64_t a, uint64_t b) const { return Rng(derive_seed(seed_, a, b)); }

  uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform in [0, n). Modulo bias is < n / 2^64, irrelevant at our sizes.
  uint64_t uniform_int(uint64_t n) { return n ? next_u64() % n : 0; }

  bool bernoulli(double p) { return uniform() < p; }

  // Box-Muller; one fresh pair of uniforms per call.
  double normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(6.283185307179586 * u2);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      const size_t j = static_cast<size_t>(uniform_int(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  uint64_t seed_;
  std::mt19937_64 gen_;
};

}  // namespace xrp
