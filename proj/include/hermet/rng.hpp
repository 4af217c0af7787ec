// Deterministic RNG: raw mt19937_64 bits mapped to doubles by hand so that a
// seed pins byte-identical output across standard libraries.

#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace hermet {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() {  // [0, 1)
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  std::complex<double> complex_in_disc(double radius = 1.0) {
    // Rejection keeps the distribution exactly rotation-invariant.
    for (;;) {
      const double x = uniform(-1.0, 1.0);
      const double y = uniform(-1.0, 1.0);
      if (x * x + y * y <= 1.0) return {radius * x, radius * y};
    }
  }

  Eigen::VectorXcd unit_vector(int n) {
    Eigen::VectorXcd v(n);
    for (;;) {
      for (int i = 0; i < n; ++i) v(i) = complex_in_disc();
      const double nrm = v.norm();
      if (nrm > 1e-3) return v / nrm;
    }
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace hermet
