#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace hsvar {

// Deterministic random stream. All distributions are generated from raw
// mt19937_64 output through fixed inline transforms, so a given (seed,
// draw order) pair produces the same values on every platform; the
// implementation-defined std::*_distribution adapters are avoided on
// purpose. Worker threads each own a stream derived from the master seed.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : gen_(seed) {}

  // Child stream for the given index, decorrelated via splitmix64.
  static RngStream derive(std::uint64_t master_seed, std::uint64_t index) {
    std::uint64_t z = master_seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z = z ^ (z >> 31);
    return RngStream(z);
  }

  std::uint64_t raw() { return gen_(); }

  // Uniform on (0,1), never exactly 0 or 1.
  double uniform() {
    const double u = (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
    return u;
  }

  // Standard normal, Marsaglia polar method with one cached spare.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  // Gamma(shape, scale = 1), Marsaglia–Tsang squeeze method.
  double gamma(double shape) {
    if (shape < 1.0) {
      const double u = uniform();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = gaussian();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  double chi_square(double dof) { return 2.0 * gamma(0.5 * dof); }

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace hsvar
