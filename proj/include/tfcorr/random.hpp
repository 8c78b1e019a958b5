#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "tfcorr/density.hpp"

namespace tfcorr {

// Seeded sampler for test states. Normal deviates come from Box-Muller over
// 53-bit uniforms, so sequences do not depend on the standard library vendor.
class StateSampler {
 public:
  explicit StateSampler(std::uint64_t seed) : rng_(seed) {}

  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  CMatrix ginibre(std::size_t n) {
    CMatrix g(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) g(i, j) = Cplx(normal(), normal());
    return g;
  }

  // G G^dagger / tr, G a 4x4 complex Ginibre matrix (full-rank Hilbert-Schmidt measure).
  DensityMatrix density() {
    const CMatrix g = ginibre(4);
    CMatrix r = g * dagger(g);
    r = (r + dagger(r)) * Cplx(0.5 / r.trace().real());
    return DensityMatrix(r);
  }

  CMatrix hermitian(std::size_t n) {
    const CMatrix g = ginibre(n);
    return (g + dagger(g)) * Cplx(0.5);
  }

  // Haar-random 2x2 unitary.
  CMatrix unitary2() {
    double a[4];
    double norm = 0.0;
    for (double& x : a) {
      x = normal();
      norm += x * x;
    }
    norm = std::sqrt(norm);
    const Cplx alpha(a[0] / norm, a[1] / norm);
    const Cplx beta(a[2] / norm, a[3] / norm);
    const Cplx phase = std::polar(1.0, 2.0 * std::numbers::pi * uniform());
    return CMatrix{{alpha, -std::conj(beta) * phase}, {beta, std::conj(alpha) * phase}};
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace tfcorr
