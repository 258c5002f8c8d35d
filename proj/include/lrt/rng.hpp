#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include "lrt/errors.hpp"

namespace lrt {

// One reproducible random stream. The (seed, lane, index) triple fully
// determines the output, so any number of streams can be created in any
// order and on any thread: simulation replication r draws from
// RngStream(seed, lane, r) without touching other replications' state.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t lane = 0, std::uint64_t index = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(lane),
                      static_cast<std::uint32_t>(lane >> 32),
                      static_cast<std::uint32_t>(index),
                      static_cast<std::uint32_t>(index >> 32)};
    engine_.seed(seq);
  }

  // Raw 64-bit engine output.
  std::uint64_t raw() { return engine_(); }

  // Uniform on the open interval (0, 1).
  double uniform() {
    double u;
    do {
      u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    } while (u <= 0.0);
    return u;
  }

  // Standard normal via the Marsaglia polar method.
  double normal() {
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
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * factor;
    has_spare_ = true;
    return u * factor;
  }

  // Gamma(shape, 1) via the Marsaglia-Tsang squeeze method, exact for all
  // shape > 0 (shape < 1 is boosted through Gamma(shape + 1) * U^(1/shape)).
  double gamma(double shape) {
    if (!(shape > 0.0)) {
      throw DomainError("gamma requires shape > 0; got shape = " + std::to_string(shape));
    }
    if (shape < 1.0) {
      const double boost = std::pow(uniform(), 1.0 / shape);
      return gamma(shape + 1.0) * boost;
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  // Beta(a, b) as Ga/(Ga + Gb) from two independent Gamma draws.
  double beta(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) {
      throw DomainError("beta requires a > 0 and b > 0; got a = " + std::to_string(a) +
                        ", b = " + std::to_string(b));
    }
    for (;;) {
      const double ga = gamma(a);
      const double gb = gamma(b);
      const double sum = ga + gb;
      if (sum > 0.0) return ga / sum;
    }
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace lrt
