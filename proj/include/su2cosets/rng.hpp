#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace su2cosets {

// Seedable deterministic pseudo-random stream. Uniform and normal variates
// are produced from the raw 64-bit engine output instead of the standard
// distribution adapters, whose sequences are implementation-defined; this
// keeps a (seed -> sample stream) contract that survives compiler changes.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in (0, 1], 53-bit resolution. The half-open side keeps log()
  // finite in the Box-Muller transform below.
  double uniform01() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Standard normal via the trigonometric Box-Muller transform. Generates
  // pairs; the spare value is cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  // Derives a statistically independent stream seed from (master, stream).
  // Used to hand each concurrent worker its own generator.
  static std::uint64_t derive(std::uint64_t master, std::uint64_t stream) {
    return splitmix64(master ^ splitmix64(stream + 0x9E3779B97F4A7C15ULL));
  }

 private:
  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }

  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace su2cosets
