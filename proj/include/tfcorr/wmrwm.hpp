#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include "tfcorr/optimize.hpp"
#include "tfcorr/qmeasure.hpp"
#include "tfcorr/qstate.hpp"

namespace tfcorr {

// ---------------------------------------------------------------------------
// Closed forms. Each mirrors a printed expression; the matrix/pipeline route
// lives in optimize_q and scenario_point.
// ---------------------------------------------------------------------------

struct BareS1 {
  double c;
  double tf;
};

// Bell state with qubit 2 damped.
inline BareS1 cf_scenario1_bare(double d) {
  require_unit_interval(d, "d");
  const double c = std::sqrt(1.0 - d);
  return {c, (4.0 + 2.0 * c - d) / 6.0};
}

struct BareS2 {
  double c_printed;   // (1-d)(sqrt(1+d^2) - d), as printed
  double c_matrix;  // Wootters concurrence of the printed matrix, (1-d)^2
  double tf;
};

inline BareS2 cf_scenario2_bare(double d) {
  require_unit_interval(d, "d");
  return {(1.0 - d) * (std::sqrt(1.0 + d * d) - d), concurrence(rho_DD(d, d)), (3.0 - 2.0 * d + d * d) / 3.0};
}

struct S1TfMax {
  double f_max;
  double q_star;
  double c_at;
  double p_succ;
};

inline S1TfMax cf_s1_tfmax(double d, double p) {
  require_half_open(d, "d");
  require_half_open(p, "p");
  const double pb = 1.0 - p;
  const double e = d * pb;
  return {(3.0 + 2.0 * e) / (3.0 + 3.0 * e), (3.0 * e + e * e + p) / ((1.0 + e) * (1.0 + e)), 2.0 / (2.0 + e),
          (1.0 - d) * (2.0 + e) * pb / (2.0 + 2.0 * e)};
}

struct S1CMax {
  double c_max;
  double q_star;
  double tf_at;
  double p_succ;
};

inline S1CMax cf_s1_cmax(double d, double p) {
  require_half_open(d, "d");
  require_half_open(p, "p");
  const double pb = 1.0 - p;
  const double e = d * pb;
  const double c = 1.0 / std::sqrt(1.0 + e);
  return {c, (p + 2.0 * e) / (1.0 + e), (3.0 + 2.0 * c + 1.0 / (1.0 + e)) / 6.0, (1.0 - d) * pb};
}

struct S2Point {
  double fef_corrected;  // printed numerator / (2 beta)
  double fef_printed;    // printed numerator / beta
  double c;
  double beta;
};

inline double beta_rr(double d, double p, double q) {
  const double pb = 1.0 - p;
  return 2.0 - 2.0 * q * (1.0 + d * pb * pb) + q * q * (1.0 + d * d * pb * pb) - (2.0 - p) * p;
}

// delta_1, delta_2 exactly as printed, with eta = d (1 - p).
inline std::pair<double, double> deltas(double eta) {
  const double r = std::sqrt(1.0 + eta * eta);
  return {std::sqrt(2.0 * (1.0 + r) + eta * eta), std::sqrt(std::max(0.0, 2.0 * (1.0 - r) + eta * eta))};
}

inline S2Point cf_s2(double d, double p, double q) {
  require_unit_interval(d, "d");
  require_half_open(p, "p");
  require_half_open(q, "q");
  const double pb = 1.0 - p;
  const double qb = 1.0 - q;
  const double db = 1.0 - d;
  const double beta = beta_rr(d, p, q);
  if (!(beta > kDegenerateProb)) throw DegenerateNormalization("cf_s2: beta vanishes");
  const double num =
      d * d * (1.0 + qb * qb) * pb * pb - 2.0 * d * pb * (pb + qb) + (pb + qb) * (pb + qb);
  const auto [d1, d2] = deltas(d * pb);
  return {num / (2.0 * beta), num / beta, db * pb * qb * (d1 - d2 - 2.0 * d * pb) / beta, beta};
}

struct S2TfMax {
  double f_max;
  double q_star;
  double c_at;
};

inline S2TfMax cf_s2_tfmax(double d, double p) {
  require_unit_interval(d, "d");
  require_half_open(p, "p");
  const double pb = 1.0 - p;
  const double eta = d * pb;
  const double r = std::sqrt(1.0 + eta * eta);
  const auto [d1, d2] = deltas(eta);
  return {(2.0 + (1.0 - eta) * (r - eta)) / 3.0, (r - pb * (1.0 - d)) / r, 0.5 * (r - eta) * (d1 - d2 - 2.0 * d * pb)};
}

// ---------------------------------------------------------------------------
// Numeric optimization over the reverse measurement strength.
// ---------------------------------------------------------------------------

enum class Protection { SingleQubit, BothQubits };
enum class Objective { TF, Concurrence };

struct OptResult {
  double q_star;
  double value;
  Objective objective;
  int iterations;
  bool converged;
};

inline constexpr double kQUpper = 1.0 - 1e-9;
inline constexpr int kQScanPoints = 201;

inline SelectiveOutcome protected_state(Protection scheme, double d, double p, double q) {
  return scheme == Protection::SingleQubit ? sigma_R_pipeline(d, p, q) : sigma_RR_pipeline(d, p, q);
}

inline double objective_value(const DensityMatrix& rho, Objective obj) {
  return obj == Objective::TF ? teleportation_fidelity(rho) : concurrence(rho);
}

// 201-point scan on [0, 1 - 1e-9], then golden-section on the bracket around
// the first best scan point.
inline OptResult optimize_q(Protection scheme, double d, double p, Objective obj) {
  require_half_open(d, "d");
  require_half_open(p, "p");
  auto f = [&](double q) {
    try {
      return objective_value(protected_state(scheme, d, p, q).state, obj);
    } catch (const DegenerateNormalization&) {
      return -std::numeric_limits<double>::infinity();
    }
  };
  const double h = kQUpper / (kQScanPoints - 1);
  int best = 0;
  double best_v = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < kQScanPoints; ++k) {
    const double v = f(h * k);
    if (v > best_v) {
      best_v = v;
      best = k;
    }
  }
  const double lo = h * std::max(best - 1, 0);
  const double hi = std::min(h * (best + 1), kQUpper);
  const auto g = opt::golden_section_max(f, lo, hi, 1e-10);
  OptResult out{h * best, best_v, obj, kQScanPoints + g.iterations, g.bracket_width <= 1e-8};
  if (g.value >= best_v) {
    out.q_star = g.x;
    out.value = g.value;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Figure rows.
// ---------------------------------------------------------------------------

enum class Scenario { I_BARE, II_BARE, I_WMRWM, II_WMRWM };
enum class Variant { NONE, TF_MAX, C_MAX };

inline std::string_view to_string(Scenario s) {
  switch (s) {
    case Scenario::I_BARE: return "I_BARE";
    case Scenario::II_BARE: return "II_BARE";
    case Scenario::I_WMRWM: return "I_WMRWM";
    case Scenario::II_WMRWM: return "II_WMRWM";
  }
  return "?";
}

inline std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::NONE: return "NONE";
    case Variant::TF_MAX: return "TF_MAX";
    case Variant::C_MAX: return "C_MAX";
  }
  return "?";
}

struct ScenarioPoint {
  Scenario scenario;
  double d;
  double p;
  Variant variant;
  std::optional<double> q_star;
  CorrelationReport report;
  double success_prob;
};

inline ScenarioPoint scenario_point(Scenario scenario, double d, double p, Variant variant) {
  const bool bare = scenario == Scenario::I_BARE || scenario == Scenario::II_BARE;
  if (bare != (variant == Variant::NONE)) {
    throw DomainError("scenario_point: bare scenarios take variant NONE, protected ones TF_MAX or C_MAX");
  }
  if (bare) {
    const DensityMatrix rho = scenario == Scenario::I_BARE ? rho_D(d) : rho_DD(d, d);
    return {scenario, d, 0.0, variant, std::nullopt, correlation_report(rho), 1.0};
  }
  const Protection scheme = scenario == Scenario::I_WMRWM ? Protection::SingleQubit : Protection::BothQubits;
  const OptResult best = optimize_q(scheme, d, p, variant == Variant::TF_MAX ? Objective::TF : Objective::Concurrence);
  const SelectiveOutcome out = protected_state(scheme, d, p, best.q_star);
  return {scenario, d, p, variant, best.q_star, correlation_report(out.state), out.probability};
}

}  // namespace tfcorr
