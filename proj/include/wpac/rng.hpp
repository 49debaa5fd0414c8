#ifndef WPAC_RNG_HPP
#define WPAC_RNG_HPP

#include <complex>
#include <cstdint>
#include <random>

namespace wpac {

// splitmix64 step; used to derive independent child seeds from a base seed
// plus a few tag integers (trial index, purpose), so trials are
// order-insensitive and reproducible.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t s = splitmix64(base);
  s = splitmix64(s ^ a);
  s = splitmix64(s ^ b);
  s = splitmix64(s ^ c);
  return s;
}

// Thin wrapper so all sampling goes through one engine type. Determinism is
// guaranteed per build (std::normal_distribution is implementation defined
// across standard libraries, which the reproducibility contract allows).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double normal() { return normal_(eng_); }
  // Uniform draw strictly inside (0,1).
  double uniform_open() {
    double v;
    do {
      v = uni_(eng_);
    } while (v <= 0.0 || v >= 1.0);
    return v;
  }
  // Circularly symmetric complex Gaussian, total variance var.
  std::complex<double> cnormal(double var) {
    double s = std::sqrt(var / 2.0);
    return {s * normal(), s * normal()};
  }

 private:
  std::mt19937_64 eng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uni_{0.0, 1.0};
};

}  // namespace wpac

#endif
