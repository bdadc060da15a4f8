#ifndef OSCLAB_RNG_HPP
#define OSCLAB_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>

namespace osclab {

/// Deterministic splitmix64 stream. Used for every seeded sweep so that runs
/// are reproducible independent of the standard library's distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform01() { return double(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  double log_uniform(double a, double b) { return a * std::pow(b / a, uniform01()); }

  /// Inclusive integer range.
  long uniform_int(long lo, long hi) {
    return lo + long(next_u64() % std::uint64_t(hi - lo + 1));
  }

  int sign() { return (next_u64() & 1) ? 1 : -1; }

  /// Uniform direction on the 2-sphere.
  std::array<double, 3> unit_sphere() {
    double z = uniform(-1.0, 1.0);
    double phi = uniform(0.0, 2.0 * 3.14159265358979323846);
    double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {s * std::cos(phi), s * std::sin(phi), z};
  }

 private:
  std::uint64_t state_;
};

}  // namespace osclab

#endif
