#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "tfcorr/density.hpp"
#include "tfcorr/optimize.hpp"

namespace tfcorr {

// (sigma_y x sigma_y) rho^* (sigma_y x sigma_y)
inline CMatrix spin_flip(const DensityMatrix& rho) {
  const CMatrix yy = kron(pauli::y(), pauli::y());
  return yy * conj(rho.mat()) * yy;
}

// Wootters concurrence. The lambdas are the singular values of
// sqrt(rho) sqrt(rho~), read off the Hermitian dilation [[0, A], [A^dagger, 0]]
// so that no square root of a near-zero eigenvalue is taken.
inline double concurrence(const DensityMatrix& rho) {
  const CMatrix s = psd_sqrt(rho.mat());
  const CMatrix yy = kron(pauli::y(), pauli::y());
  const CMatrix a = s * (yy * conj(s) * yy);
  CMatrix dil(8, 8);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      dil(i, j + 4) = a(i, j);
      dil(j + 4, i) = std::conj(a(i, j));
    }
  const auto sv = herm_eig(dil).eigenvalues;
  return std::max(0.0, sv[0] - sv[1] - sv[2] - sv[3]);
}

// Closed form for states supported on the diagonal and anti-diagonal.
inline double concurrence_x_state(const DensityMatrix& rho) {
  auto re = [&](std::size_t i, std::size_t j) { return rho(i, j).real(); };
  const double a = std::abs(rho(0, 3)) - std::sqrt(std::max(0.0, re(1, 1) * re(2, 2)));
  const double b = std::abs(rho(1, 2)) - std::sqrt(std::max(0.0, re(0, 0) * re(3, 3)));
  return 2.0 * std::max({0.0, a, b});
}

// Columns: (|00>+|11>)/sqrt2, i(|00>-|11>)/sqrt2, i(|01>+|10>)/sqrt2, (|01>-|10>)/sqrt2.
// Real unit vectors in this basis are exactly the maximally entangled states.
inline CMatrix magic_basis() {
  const double h = 1.0 / std::sqrt(2.0);
  const Cplx ih(0.0, h);
  return CMatrix{{h, ih, 0.0, 0.0}, {0.0, 0.0, ih, h}, {0.0, 0.0, ih, -h}, {h, -ih, 0.0, 0.0}};
}

struct FefSpectral {
  double value;
  std::array<double, 4> magic_coeffs;  // real maximizer in the magic basis
};

inline FefSpectral fef_spectral(const DensityMatrix& rho) {
  const CMatrix m = magic_basis();
  const CMatrix in_magic = dagger(m) * rho.mat() * m;
  CMatrix re(4, 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) re(i, j) = in_magic(i, j).real();
  // Re(in_magic) is symmetric; average out round-off before the eigensolve.
  re = (re + dagger(re)) * Cplx(0.5);
  const EigDecomp e = herm_eig(re);

  // Real symmetric input gives eigenvectors real up to a common phase; strip it.
  std::size_t pivot = 0;
  for (std::size_t i = 1; i < 4; ++i)
    if (std::abs(e.eigenvectors(i, 0)) > std::abs(e.eigenvectors(pivot, 0))) pivot = i;
  const Cplx phase = std::conj(e.eigenvectors(pivot, 0)) / std::abs(e.eigenvectors(pivot, 0));
  FefSpectral out{e.eigenvalues[0], {}};
  double norm = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    out.magic_coeffs[i] = (e.eigenvectors(i, 0) * phase).real();
    norm += out.magic_coeffs[i] * out.magic_coeffs[i];
  }
  for (auto& c : out.magic_coeffs) c /= std::sqrt(norm);
  return out;
}

// Fully entangled fraction: max over maximally entangled |phi> of <phi|rho|phi>.
inline double fef(const DensityMatrix& rho) { return fef_spectral(rho).value; }

// Amplitudes of (I x U)|Phi+>.
inline std::array<Cplx, 4> mes_from_unitary(const CMatrix& u) {
  const double h = 1.0 / std::sqrt(2.0);
  std::array<Cplx, 4> v{};
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) v[2 * i + j] = h * u(j, i);
  return v;
}

// Rz(a) Ry(b) Rz(c)
inline CMatrix euler_unitary(double a, double b, double c) {
  const Cplx e_plus = std::polar(1.0, -(a + c) / 2.0);
  const Cplx e_minus = std::polar(1.0, -(a - c) / 2.0);
  const double cb = std::cos(b / 2.0);
  const double sb = std::sin(b / 2.0);
  return CMatrix{{e_plus * cb, -e_minus * sb}, {std::conj(e_minus) * sb, std::conj(e_plus) * cb}};
}

inline double expectation(const DensityMatrix& rho, const std::array<Cplx, 4>& v) {
  Cplx s = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) s += std::conj(v[i]) * rho(i, j) * v[j];
  return s.real();
}

inline double phi_plus_overlap(const DensityMatrix& rho) {
  return expectation(rho, mes_from_unitary(CMatrix::identity(2)));
}

// Direct maximization over (I x U)|Phi+> on an Euler-angle grid, refined by simplex.
inline double fef_bruteforce(const DensityMatrix& rho, int grid_per_angle = 16) {
  if (grid_per_angle < 8) throw DomainError("fef_bruteforce: grid_per_angle must be >= 8");
  const double two_pi = 2.0 * std::numbers::pi;
  auto overlap = [&](const std::vector<double>& x) {
    return expectation(rho, mes_from_unitary(euler_unitary(x[0], x[1], x[2])));
  };
  std::vector<double> best{0.0, 0.0, 0.0};
  double best_v = -1.0;
  const int g = grid_per_angle;
  for (int i = 0; i < g; ++i)
    for (int j = 0; j <= g; ++j)
      for (int k = 0; k < g; ++k) {
        std::vector<double> x{two_pi * i / g, std::numbers::pi * j / g, two_pi * k / g};
        const double v = overlap(x);
        if (v > best_v) {
          best_v = v;
          best = std::move(x);
        }
      }
  const double step = two_pi / g;
  const auto refined = opt::nelder_mead_max(overlap, best, {step, step / 2.0, step}, 1e-14, 1e-9, 2000);
  return std::max(best_v, refined.value);
}

inline double teleportation_fidelity(const DensityMatrix& rho) { return (2.0 * fef(rho) + 1.0) / 3.0; }

// Eigenvalues of a 2x2 Hermitian matrix, descending.
inline std::array<double, 2> eig2_hermitian(const CMatrix& m) {
  const double a = m(0, 0).real();
  const double d = m(1, 1).real();
  const double half_gap = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(m(0, 1)));
  const double mid = 0.5 * (a + d);
  return {mid + half_gap, mid - half_gap};
}

inline double entropy_term(double lam) { return lam > 0.0 ? -lam * std::log2(lam) : 0.0; }

// -sum lambda log2 lambda, with 0 log 0 = 0.
inline double von_neumann_entropy(const CMatrix& rho) {
  if (std::abs(rho.trace() - 1.0) > kStateTol) throw DomainError("von_neumann_entropy: trace is not 1");
  double s = 0.0;
  if (rho.rows() == 2) {
    if (hermiticity_defect(rho) > kHermitianTol) throw DomainError("von_neumann_entropy: not Hermitian");
    for (double lam : eig2_hermitian(rho)) s += entropy_term(lam);
  } else {
    for (double lam : herm_eig(rho).eigenvalues) s += entropy_term(lam);
  }
  return s;
}

inline double mutual_information(const DensityMatrix& rho) {
  return von_neumann_entropy(partial_trace(rho.mat(), 1)) + von_neumann_entropy(partial_trace(rho.mat(), 2)) -
         von_neumann_entropy(rho.mat());
}

// Measurement axis on qubit 2.
struct BlochVector {
  double theta = 0.0;  // [0, pi]
  double phi = 0.0;    // [0, 2pi)

  static BlochVector from_angles(double theta, double phi) {
    const double x = std::sin(theta) * std::cos(phi);
    const double y = std::sin(theta) * std::sin(phi);
    const double z = std::cos(theta);
    BlochVector b;
    b.theta = std::acos(std::clamp(z, -1.0, 1.0));
    b.phi = std::atan2(y, x);
    if (b.phi < 0.0) b.phi += 2.0 * std::numbers::pi;
    if (b.phi >= 2.0 * std::numbers::pi) b.phi = 0.0;
    return b;
  }

  std::array<double, 3> axis() const {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
  }
};

// (I + s n.sigma) / 2
inline CMatrix projector(const std::array<double, 3>& n, int outcome) {
  const double s = outcome >= 0 ? 0.5 : -0.5;
  return CMatrix{{0.5 + s * n[2], s * Cplx(n[0], -n[1])}, {s * Cplx(n[0], n[1]), 0.5 - s * n[2]}};
}

// Tr_B[(I x P) rho (I x P)] for a projector P on qubit 2, unnormalized.
inline CMatrix project_qubit2(const CMatrix& rho, const CMatrix& proj) {
  CMatrix r(2, 2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l) r(i, j) += proj(l, k) * rho(2 * i + k, 2 * j + l);
  return r;
}

struct ConditionalState {
  CMatrix state;  // 2x2 state of qubit 1
  double probability;
};

inline ConditionalState conditional_state(const DensityMatrix& rho, const BlochVector& n, int outcome) {
  if (outcome != 1 && outcome != -1) throw DomainError("conditional_state: outcome must be +1 or -1");
  CMatrix r = project_qubit2(rho.mat(), projector(n.axis(), outcome));
  const double p = r.trace().real();
  if (!(p > kDegenerateProb)) throw DegenerateNormalization("conditional_state: outcome has zero probability");
  return {r * Cplx(1.0 / p), p};
}

// S(rho_A) - sum_j p_j S(rho_A|j) for the projective measurement along n on qubit 2.
inline double cc_objective(const CMatrix& rho, double s_a, const std::array<double, 3>& n) {
  double cond = 0.0;
  for (int outcome : {1, -1}) {
    const CMatrix r = project_qubit2(rho, projector(n, outcome));
    const double p = r.trace().real();
    if (p <= kDegenerateProb) continue;
    for (double lam : eig2_hermitian(r)) cond += p * entropy_term(std::max(lam, 0.0) / p);
  }
  return s_a - cond;
}

struct ClassicalCorrelation {
  double value;
  BlochVector argmax;
};

inline constexpr int kCcThetaGrid = 64;
inline constexpr int kCcPhiGrid = 128;

// Maximum over rank-1 projective measurements on qubit 2. The coarse grid is
// scanned in row-major (theta, phi) order; the first strict maximum seeds the
// simplex refinement.
inline ClassicalCorrelation classical_correlation(const DensityMatrix& rho) {
  const CMatrix& m = rho.mat();
  const double s_a = von_neumann_entropy(partial_trace(m, 1));
  auto objective = [&](const std::vector<double>& x) {
    return cc_objective(m, s_a, BlochVector{x[0], x[1]}.axis());
  };
  const double dtheta = std::numbers::pi / (kCcThetaGrid - 1);
  const double dphi = 2.0 * std::numbers::pi / kCcPhiGrid;
  std::vector<double> best{0.0, 0.0};
  double best_v = -INFINITY;
  for (int i = 0; i < kCcThetaGrid; ++i)
    for (int j = 0; j < kCcPhiGrid; ++j) {
      std::vector<double> x{dtheta * i, dphi * j};
      const double v = objective(x);
      if (v > best_v) {
        best_v = v;
        best = std::move(x);
      }
    }
  const auto refined = opt::nelder_mead_max(objective, best, {dtheta, dphi}, 1e-8, 1e-6, 500);
  ClassicalCorrelation out{best_v, BlochVector::from_angles(best[0], best[1])};
  if (refined.value > best_v) {
    out.value = refined.value;
    out.argmax = BlochVector::from_angles(refined.x[0], refined.x[1]);
  }
  out.value = std::max(out.value, 0.0);
  return out;
}

struct CorrelationReport {
  double concurrence;
  double fef;
  double tf;
  double entropy_a;
  double entropy_b;
  double entropy_ab;
  double mutual_info;
  double cc;
  BlochVector cc_argmax;
};

inline CorrelationReport correlation_report(const DensityMatrix& rho) {
  CorrelationReport r{};
  r.concurrence = concurrence(rho);
  r.fef = fef(rho);
  r.tf = (2.0 * r.fef + 1.0) / 3.0;
  r.entropy_a = von_neumann_entropy(partial_trace(rho.mat(), 1));
  r.entropy_b = von_neumann_entropy(partial_trace(rho.mat(), 2));
  r.entropy_ab = von_neumann_entropy(rho.mat());
  r.mutual_info = r.entropy_a + r.entropy_b - r.entropy_ab;
  const auto cc = classical_correlation(rho);
  r.cc = cc.value;
  r.cc_argmax = cc.argmax;
  return r;
}

}  // namespace tfcorr
