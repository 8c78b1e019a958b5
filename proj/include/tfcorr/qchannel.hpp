#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "tfcorr/density.hpp"

namespace tfcorr {

// A 2x2 operator and the qubit (1 or 2) it acts on.
struct LocalKraus {
  CMatrix op;
  int qubit;

  LocalKraus(CMatrix op_, int qubit_) : op(std::move(op_)), qubit(qubit_) {
    if (op.rows() != 2 || op.cols() != 2) throw DimensionError("LocalKraus: operator must be 2x2");
    if (qubit != 1 && qubit != 2) throw DomainError("LocalKraus: qubit must be 1 or 2");
  }

  CMatrix lifted() const { return lift(op, qubit); }
};

inline constexpr double kCompletenessTol = 1e-12;

// Deviation of sum_j K_j^dagger K_j from the identity.
inline double completeness_defect(const std::vector<LocalKraus>& elements) {
  CMatrix sum(2, 2);
  for (const auto& k : elements) sum += dagger(k.op) * k.op;
  return max_abs_diff(sum, CMatrix::identity(2));
}

// Trace-preserving channel on one qubit.
class KrausChannel {
 public:
  explicit KrausChannel(std::vector<LocalKraus> elements) : elements_(std::move(elements)) {
    if (elements_.empty()) throw DomainError("KrausChannel: no elements");
    for (const auto& k : elements_) {
      if (k.qubit != elements_.front().qubit) throw DomainError("KrausChannel: elements act on different qubits");
    }
    if (completeness_defect(elements_) > kCompletenessTol) {
      throw DomainError("KrausChannel: sum K^dagger K != I");
    }
  }

  const std::vector<LocalKraus>& elements() const { return elements_; }
  int qubit() const { return elements_.front().qubit; }

 private:
  std::vector<LocalKraus> elements_;
};

inline void require_unit_interval(double x, const char* name) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError(std::string(name) + " must lie in [0, 1]");
}

inline void require_half_open(double x, const char* name) {
  if (!(x >= 0.0 && x < 1.0)) throw DomainError(std::string(name) + " must lie in [0, 1)");
}

// Amplitude damping with decay probability d.
inline KrausChannel adc_kraus(double d, int qubit = 2) {
  require_unit_interval(d, "damping strength");
  CMatrix w0{{1.0, 0.0}, {0.0, std::sqrt(1.0 - d)}};
  CMatrix w1{{0.0, std::sqrt(d)}, {0.0, 0.0}};
  return KrausChannel({LocalKraus(std::move(w0), qubit), LocalKraus(std::move(w1), qubit)});
}

inline DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& ch) {
  CMatrix out(4, 4);
  for (const auto& k : ch.elements()) {
    const CMatrix u = k.lifted();
    out += u * rho.mat() * dagger(u);
  }
  return DensityMatrix(out);
}

// Weak measurement, no-click branch: diag(1, sqrt(1-p)).
inline LocalKraus weak_measurement_op(double p, int qubit) {
  require_half_open(p, "weak measurement strength");
  return LocalKraus(CMatrix::diag({1.0, std::sqrt(1.0 - p)}), qubit);
}

// Reverse weak measurement: diag(sqrt(1-q), 1).
inline LocalKraus reverse_weak_op(double q, int qubit) {
  require_half_open(q, "reverse measurement strength");
  return LocalKraus(CMatrix::diag({std::sqrt(1.0 - q), 1.0}), qubit);
}

inline SelectiveOutcome apply_selective(const DensityMatrix& rho, const LocalKraus& k) {
  const CMatrix u = k.lifted();
  auto [state, prob] = DensityMatrix::normalized(u * rho.mat() * dagger(u));
  return {std::move(state), prob};
}

}  // namespace tfcorr
