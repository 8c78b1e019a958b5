#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>
#include <vector>

#include "tfcorr/qmeasure.hpp"

namespace tfcorr {

using Qubit = std::array<Cplx, 2>;

// Standard protocol: Bell measurement on (input, qubit 1), Pauli correction on qubit 2.
namespace teleport {

inline std::array<std::array<Cplx, 4>, 4> bell_basis() {
  const double h = 1.0 / std::sqrt(2.0);
  return {{{h, 0.0, 0.0, h},     // Phi+
           {0.0, h, h, 0.0},     // Psi+
           {h, 0.0, 0.0, -h},    // Phi-
           {0.0, h, -h, 0.0}}};  // Psi-
}

inline std::array<CMatrix, 4> corrections() {
  return {CMatrix::identity(2), pauli::x(), pauli::z(), pauli::x() * pauli::z()};
}

struct Outcome {
  double probability;
  CMatrix corrected;  // Bob's corrected state, unnormalized (trace = probability)
};

inline void require_normalized(const Qubit& psi) {
  const double n = std::norm(psi[0]) + std::norm(psi[1]);
  if (std::abs(n - 1.0) > 1e-12) throw DomainError("teleport: input state is not normalized");
}

inline std::array<Outcome, 4> outcomes(const DensityMatrix& shared, const Qubit& psi) {
  require_normalized(psi);
  // Input is the slow factor: index (in, q1, q2) -> 4*in + 2*q1 + q2.
  const CMatrix total = kron(CMatrix::outer({psi[0], psi[1]}), shared.mat());
  const auto basis = bell_basis();
  const auto fix = corrections();
  std::array<Outcome, 4> out{};
  for (std::size_t k = 0; k < 4; ++k) {
    CMatrix bob(2, 2);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t x = 0; x < 4; ++x)
          for (std::size_t y = 0; y < 4; ++y)
            bob(i, j) += std::conj(basis[k][x]) * basis[k][y] * total(2 * x + i, 2 * y + j);
    out[k] = {bob.trace().real(), fix[k] * bob * dagger(fix[k])};
  }
  return out;
}

}  // namespace teleport

// Average over outcomes of the fidelity between the input and Bob's corrected state.
inline double standard_teleport_fidelity(const DensityMatrix& shared, const Qubit& psi) {
  double f = 0.0;
  for (const auto& o : teleport::outcomes(shared, psi)) {
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) f += (std::conj(psi[i]) * o.corrected(i, j) * psi[j]).real();
  }
  return f;
}

enum class EnsembleKind { SIX_CARDINAL, HAAR_MC };

struct InputEnsemble {
  EnsembleKind kind = EnsembleKind::SIX_CARDINAL;
  int samples = 0;
  std::uint64_t seed = 0;
};

// Recorded next to Monte-Carlo output so runs can be reproduced.
inline constexpr std::string_view kSamplerId = "mt19937_64/u53:z~U[-1,1],phi~U[0,2pi)";

struct TeleportResult {
  double avg_fidelity;
  std::vector<double> per_input;
  double std_error;
};

inline Qubit bloch_state(double z, double phi) {
  const double theta = std::acos(std::clamp(z, -1.0, 1.0));
  return {Cplx(std::cos(theta / 2.0), 0.0), std::polar(std::sin(theta / 2.0), phi)};
}

inline std::vector<Qubit> six_cardinal_states() {
  const double h = 1.0 / std::sqrt(2.0);
  return {{1.0, 0.0},           {0.0, 1.0},           {h, h}, {h, -h},
          {h, Cplx(0.0, h)}, {h, Cplx(0.0, -h)}};
}

inline TeleportResult average_fidelity(const DensityMatrix& shared, const InputEnsemble& ensemble) {
  TeleportResult r{0.0, {}, 0.0};
  if (ensemble.kind == EnsembleKind::SIX_CARDINAL) {
    for (const auto& psi : six_cardinal_states()) r.per_input.push_back(standard_teleport_fidelity(shared, psi));
  } else {
    if (ensemble.samples < 1000) throw DomainError("average_fidelity: HAAR_MC needs at least 1000 samples");
    std::mt19937_64 rng(ensemble.seed);
    // 53-bit uniform in [0, 1), independent of the standard library's distribution classes.
    auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    r.per_input.reserve(static_cast<std::size_t>(ensemble.samples));
    for (int s = 0; s < ensemble.samples; ++s) {
      const double z = 2.0 * unit() - 1.0;
      const double phi = 2.0 * std::numbers::pi * unit();
      r.per_input.push_back(standard_teleport_fidelity(shared, bloch_state(z, phi)));
    }
  }
  double sum = 0.0;
  for (double f : r.per_input) sum += f;
  const auto n = static_cast<double>(r.per_input.size());
  r.avg_fidelity = sum / n;
  if (ensemble.kind == EnsembleKind::HAAR_MC) {
    double ss = 0.0;
    for (double f : r.per_input) ss += (f - r.avg_fidelity) * (f - r.avg_fidelity);
    r.std_error = std::sqrt(ss / (n - 1.0) / n);
  }
  return r;
}

// Unitary V for qubit 2 such that (I x V) rho (I x V)^dagger has <Phi+|.|Phi+> = fef(rho).
// The maximizing state (I x U)|Phi+> comes from the magic-basis eigenvector and V = U^dagger.
inline CMatrix optimal_prerotation(const DensityMatrix& shared) {
  const auto spec = fef_spectral(shared);
  const CMatrix m = magic_basis();
  std::array<Cplx, 4> phi{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t k = 0; k < 4; ++k) phi[i] += m(i, k) * spec.magic_coeffs[k];
  const double s = std::sqrt(2.0);
  // phi[2i + j] = U(j, i) / sqrt2
  CMatrix u{{s * phi[0], s * phi[2]}, {s * phi[1], s * phi[3]}};
  return dagger(u);
}

inline DensityMatrix prerotated(const DensityMatrix& shared) {
  const CMatrix v = lift(optimal_prerotation(shared), 2);
  CMatrix r = v * shared.mat() * dagger(v);
  return DensityMatrix((r + dagger(r)) * Cplx(0.5));
}

}  // namespace tfcorr
