#pragma once

#include <cmath>
#include <variant>
#include <vector>

#include "tfcorr/qchannel.hpp"

namespace tfcorr {

// (|00> + |11>) / sqrt(2)
inline DensityMatrix bell_phi_plus() {
  const double a = 1.0 / std::sqrt(2.0);
  return DensityMatrix(CMatrix::outer({a, 0.0, 0.0, a}));
}

// Bell state after amplitude damping d2 on qubit 2 (printed matrix form).
inline DensityMatrix rho_D(double d2) {
  require_unit_interval(d2, "d2");
  const double db = 1.0 - d2;
  const double coh = std::sqrt(db) / 2.0;
  return DensityMatrix(CMatrix{{0.5, 0.0, 0.0, coh},
                               {0.0, 0.0, 0.0, 0.0},
                               {0.0, 0.0, d2 / 2.0, 0.0},
                               {coh, 0.0, 0.0, db / 2.0}});
}

// Bell state after damping d1 on qubit 1 and d2 on qubit 2.
inline DensityMatrix rho_DD(double d1, double d2) {
  require_unit_interval(d1, "d1");
  require_unit_interval(d2, "d2");
  const double d1b = 1.0 - d1;
  const double d2b = 1.0 - d2;
  const double coh = std::sqrt(d1b * d2b) / 2.0;
  return DensityMatrix(CMatrix{{(1.0 + d1 * d2) / 2.0, 0.0, 0.0, coh},
                               {0.0, d1 * d2b / 2.0, 0.0, 0.0},
                               {0.0, 0.0, d1b * d2 / 2.0, 0.0},
                               {coh, 0.0, 0.0, d1b * d2b / 2.0}});
}

// Single-qubit protection: weak measurement p2, damping d2, reversal q2, all on qubit 2.
// The branch probability is alpha / 2 with alpha = 2 - p - q - d p' q.
inline SelectiveOutcome sigma_R(double d2, double p2, double q2) {
  require_unit_interval(d2, "d2");
  require_half_open(p2, "p2");
  require_half_open(q2, "q2");
  const double pb = 1.0 - p2;
  const double qb = 1.0 - q2;
  const double db = 1.0 - d2;
  const double alpha = 2.0 - p2 - q2 - d2 * pb * q2;
  if (!(alpha > kDegenerateProb)) throw DegenerateNormalization("sigma_R: alpha vanishes");
  const double coh = std::sqrt(db * pb * qb) / alpha;
  CMatrix m{{qb / alpha, 0.0, 0.0, coh},
            {0.0, 0.0, 0.0, 0.0},
            {0.0, 0.0, d2 * pb * qb / alpha, 0.0},
            {coh, 0.0, 0.0, db * pb / alpha}};
  return {DensityMatrix(std::move(m)), alpha / 2.0};
}

// Symmetric two-qubit protection (same d, p, q on both qubits); probability beta / 2.
inline SelectiveOutcome sigma_RR(double d, double p, double q) {
  require_unit_interval(d, "d");
  require_half_open(p, "p");
  require_half_open(q, "q");
  const double pb = 1.0 - p;
  const double qb = 1.0 - q;
  const double db = 1.0 - d;
  const double beta = 2.0 - 2.0 * q * (1.0 + d * pb * pb) + q * q * (1.0 + d * d * pb * pb) - (2.0 - p) * p;
  if (!(beta > kDegenerateProb)) throw DegenerateNormalization("sigma_RR: beta vanishes");
  const double coh = db * pb * qb / beta;
  const double mid = d * db * pb * pb * qb / beta;
  CMatrix m{{qb * qb * (1.0 + d * d * pb * pb) / beta, 0.0, 0.0, coh},
            {0.0, mid, 0.0, 0.0},
            {0.0, 0.0, mid, 0.0},
            {coh, 0.0, 0.0, db * db * pb * pb / beta}};
  return {DensityMatrix(std::move(m)), beta / 2.0};
}

// One step of an operational pipeline: a trace-preserving channel or a selective operator.
using LocalOpStep = std::variant<KrausChannel, LocalKraus>;

// Applies steps in order. The returned probability is the product of the
// selective-step traces, which equals the final unnormalized trace since the
// channels preserve trace.
inline SelectiveOutcome build_pipeline(const DensityMatrix& initial, const std::vector<LocalOpStep>& steps) {
  CMatrix m = initial.mat();
  for (const auto& step : steps) {
    if (const auto* ch = std::get_if<KrausChannel>(&step)) {
      CMatrix out(4, 4);
      for (const auto& k : ch->elements()) {
        const CMatrix u = k.lifted();
        out += u * m * dagger(u);
      }
      m = std::move(out);
    } else {
      const CMatrix u = std::get<LocalKraus>(step).lifted();
      m = u * m * dagger(u);
    }
  }
  auto [state, prob] = DensityMatrix::normalized(m);
  return {std::move(state), prob};
}

inline std::vector<LocalOpStep> wmrwm_steps_single(double d2, double p2, double q2) {
  return {weak_measurement_op(p2, 2), adc_kraus(d2, 2), reverse_weak_op(q2, 2)};
}

inline std::vector<LocalOpStep> wmrwm_steps_both(double d1, double d2, double p1, double p2, double q1, double q2) {
  return {weak_measurement_op(p1, 1), weak_measurement_op(p2, 2), adc_kraus(d2, 2), adc_kraus(d1, 1),
          reverse_weak_op(q1, 1),     reverse_weak_op(q2, 2)};
}

inline SelectiveOutcome sigma_R_pipeline(double d2, double p2, double q2) {
  return build_pipeline(bell_phi_plus(), wmrwm_steps_single(d2, p2, q2));
}

inline SelectiveOutcome sigma_RR_pipeline(double d, double p, double q) {
  return build_pipeline(bell_phi_plus(), wmrwm_steps_both(d, d, p, p, q, q));
}

}  // namespace tfcorr
