#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "tfcorr/random.hpp"
#include "tfcorr/sweep.hpp"
#include "tfcorr/teleportsim.hpp"

namespace tfcorr::audit {

enum class Severity { TYPO_SUSPECTED, CLAIM_CONFLICT };

inline std::string to_string(Severity s) {
  return s == Severity::TYPO_SUSPECTED ? "TYPO_SUSPECTED" : "CLAIM_CONFLICT";
}

// A place where a printed expression or statement disagrees with the computation.
struct DiscrepancyRecord {
  std::string claim_id;
  std::variant<double, std::string> paper_value;
  double computed_value;
  std::string location;
  Severity severity;
};

inline nlohmann::json to_json(const DiscrepancyRecord& r) {
  nlohmann::json j;
  j["claim_id"] = r.claim_id;
  std::visit([&](const auto& v) { j["paper_value"] = v; }, r.paper_value);
  j["computed_value"] = r.computed_value;
  j["location"] = r.location;
  j["severity"] = to_string(r.severity);
  return j;
}

inline nlohmann::json to_json(const std::vector<DiscrepancyRecord>& records) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : records) arr.push_back(to_json(r));
  return arr;
}

// ---------------------------------------------------------------------------
// Discrepancy probes. Each returns a record only if the disagreement is real.
// ---------------------------------------------------------------------------

inline std::vector<double> unit_grid(int n, double hi = 1.0) {
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = hi * i / (n - 1);
  return g;
}

inline std::vector<DiscrepancyRecord> collect_discrepancies() {
  std::vector<DiscrepancyRecord> out;

  {  // Concurrence closed form for both-qubit damping vs the printed matrix.
    const auto s2 = cf_scenario2_bare(0.5);
    if (std::abs(s2.c_printed - s2.c_matrix) > 1e-9) {
      out.push_back({"eq-CTF_DD-concurrence", s2.c_printed, s2.c_matrix,
                     "both-qubit damping: printed C=(1-D)(sqrt(1+D^2)-D) vs Wootters on the printed matrix, D=0.5", Severity::CLAIM_CONFLICT});
    }
  }
  {  // FEF normalization for the doubly protected state.
    const auto s = cf_s2(0.0, 0.0, 0.0);
    const double overlap = phi_plus_overlap(sigma_RR(0.0, 0.0, 0.0).state);
    if (std::abs(s.fef_printed - overlap) > 1e-9) {
      out.push_back({"eq-f_WW-normalization", s.fef_printed, overlap,
                     "doubly protected FEF: numerator/beta at D=p=q=0; numerator/(2 beta) matches <Phi+|sigma^RR|Phi+>",
                     Severity::TYPO_SUSPECTED});
    }
  }
  {  // CC at full damping of both qubits.
    const double cc = classical_correlation(rho_DD(1.0, 1.0)).value;
    if (std::abs(cc - 1.0) > 1e-6) {
      out.push_back({"cc-at-D1-scenario2", 1.0, cc, "both-qubit damping text: 'At D=1, ... CC(rho^DD)=1'; rho^DD(1,1)=|00><00|",
                     Severity::CLAIM_CONFLICT});
    }
  }
  {  // Kraus completeness written as sum W W^dagger.
    const auto ch = adc_kraus(0.5, 2);
    CMatrix printed(2, 2);
    for (const auto& k : ch.elements()) printed += k.op * dagger(k.op);
    const double defect = max_abs_diff(printed, CMatrix::identity(2));
    if (defect > 1e-12) {
      out.push_back({"kraus-completeness-order", std::string("sum_j W_{i,j} W_{i,j}^dagger = I"), defect,
                     "amplitude damping completeness relation; max|sum W W^dagger - I| at D=0.5 (sum W^dagger W = I holds)",
                     Severity::TYPO_SUSPECTED});
    }
  }
  {  // "C^max(sigma^RR) < C(rho^DD) for D > 0.33" with p = 0.1.
    double worst_margin = -INFINITY;
    for (double d = 0.35; d < 0.999; d += 0.05) {
      const double cmax = optimize_q(Protection::BothQubits, d, kFigureP, Objective::Concurrence).value;
      const double bare = std::max(cf_scenario2_bare(d).c_matrix, cf_scenario2_bare(d).c_printed);
      worst_margin = std::max(worst_margin, cmax - bare);
    }
    if (worst_margin > 0.0) {
      const double at_half = optimize_q(Protection::BothQubits, 0.5, kFigureP, Objective::Concurrence).value;
      out.push_back({"fig3-cmax-below-bare-D033", std::string("C^max(sigma^RR) < C(rho^DD) for D > 0.33"), at_half,
                     "two-qubit protection concurrence curve; computed C^max at D=0.5, p=0.1 exceeds C(rho^DD) in {0.25, 0.309}",
                     Severity::CLAIM_CONFLICT});
    }
  }
  {  // Printed concurrence at the optimal reversal, both qubits protected.
    double worst = 0.0;
    double at = 0.0;
    for (double d : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      const auto cf = cf_s2_tfmax(d, kFigureP);
      const double c = concurrence(sigma_RR_pipeline(d, kFigureP, cf.q_star).state);
      if (std::abs(c - cf.c_at) > worst) {
        worst = std::abs(c - cf.c_at);
        at = c;
      }
    }
    if (worst > 1e-6) {
      out.push_back({"eq-C_WW_TF_Max", std::string("(1/2)(sqrt(1+eta^2)-eta)(delta1-delta2-2 D pbar)"), at,
                     "printed concurrence at the doubly protected TF optimum vs Wootters on the pipeline state", Severity::TYPO_SUSPECTED});
    }
  }
  {  // Printed concurrence and TF at the single-qubit optima.
    double worst = 0.0;
    for (double d : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      const auto tfm = cf_s1_tfmax(d, kFigureP);
      const auto cm = cf_s1_cmax(d, kFigureP);
      worst = std::max(worst, std::abs(concurrence(sigma_R_pipeline(d, kFigureP, tfm.q_star).state) - tfm.c_at));
      worst = std::max(worst,
                       std::abs(teleportation_fidelity(sigma_R_pipeline(d, kFigureP, cm.q_star).state) - cm.tf_at));
    }
    if (worst > 1e-9) {
      out.push_back({"eq-C_W_TF_Max-TF_W_C_Max", std::string("2/(2+D pbar); (3+2/sqrt(1+D pbar)+1/(1+D pbar))/6"), worst,
                     "printed concurrence and TF at the single-qubit optima vs pipeline state", Severity::TYPO_SUSPECTED});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Hard checks run by `verify`.
// ---------------------------------------------------------------------------

struct CheckResult {
  std::string name;
  bool pass;
  std::string detail;
  double seconds;
};

inline std::string num(double v) { return fmt12(v); }

inline CheckResult timed(const std::string& name, const std::function<std::pair<bool, std::string>()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  std::pair<bool, std::string> r;
  try {
    r = fn();
  } catch (const std::exception& e) {
    r = {false, std::string("exception: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {name, r.first, r.second, s};
}

inline std::vector<CheckResult> run_checks() {
  std::vector<CheckResult> out;
  const auto grid = unit_grid(201);

  out.push_back(timed("printed-states-match-pipelines", [&] {
    double worst = 0.0;
    for (double a : unit_grid(21)) {
      worst = std::max(worst, max_abs_diff(rho_D(a).mat(), apply_channel(bell_phi_plus(), adc_kraus(a, 2)).mat()));
      for (double b : unit_grid(21)) {
        const auto piped = build_pipeline(bell_phi_plus(), {adc_kraus(b, 2), adc_kraus(a, 1)});
        worst = std::max(worst, max_abs_diff(rho_DD(a, b).mat(), piped.state.mat()));
      }
    }
    for (double d : unit_grid(21))
      for (double p : unit_grid(21, 0.95))
        for (double q : unit_grid(21, 0.95)) {
          const auto r1 = sigma_R(d, p, q);
          const auto r1p = sigma_R_pipeline(d, p, q);
          worst = std::max({worst, max_abs_diff(r1.state.mat(), r1p.state.mat()), std::abs(r1.probability - r1p.probability)});
          if (d < 1.0) {
            const auto r2 = sigma_RR(d, p, q);
            const auto r2p = sigma_RR_pipeline(d, p, q);
            worst = std::max({worst, max_abs_diff(r2.state.mat(), r2p.state.mat()), std::abs(r2.probability - r2p.probability)});
          }
        }
    return std::pair{worst <= 1e-12, "max entry gap " + num(worst)};
  }));

  out.push_back(timed("kraus-completeness", [&] {
    double worst = 0.0;
    for (double d : unit_grid(101)) worst = std::max(worst, completeness_defect(adc_kraus(d, 2).elements()));
    return std::pair{worst <= 1e-12, "max |sum K^dagger K - I| " + num(worst)};
  }));

  out.push_back(timed("scenario1-closed-forms", [&] {
    double worst = 0.0;
    for (double d : grid) {
      const auto cf = cf_scenario1_bare(d);
      const auto rho = rho_D(d);
      worst = std::max({worst, std::abs(concurrence(rho) - cf.c), std::abs(teleportation_fidelity(rho) - cf.tf)});
    }
    return std::pair{worst <= 1e-9, "max gap " + num(worst)};
  }));

  out.push_back(timed("scenario1-tf-threshold", [&] {
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 200 && hi - lo > 1e-13; ++i) {
      const double mid = 0.5 * (lo + hi);
      (teleportation_fidelity(rho_D(mid)) > 2.0 / 3.0 ? lo : hi) = mid;
    }
    const double root = 0.5 * (lo + hi);
    const double expect = 2.0 * std::sqrt(2.0) - 2.0;
    return std::pair{std::abs(root - expect) <= 1e-6, "d* = " + num(root)};
  }));

  out.push_back(timed("scenario2-tf-and-activation", [&] {
    double worst = 0.0;
    bool active = true;
    for (double d : grid) {
      const double tf = teleportation_fidelity(rho_DD(d, d));
      worst = std::max(worst, std::abs(tf - cf_scenario2_bare(d).tf));
      if (d <= 1.0 - 1e-6) active = active && tf > 2.0 / 3.0;
    }
    const double edge = teleportation_fidelity(rho_DD(1.0 - 1e-6, 1.0 - 1e-6));
    return std::pair{worst <= 1e-9 && active && edge > 2.0 / 3.0, "max gap " + num(worst)};
  }));

  out.push_back(timed("scenario2-concurrence-routes", [&] {
    double worst = 0.0;
    for (double d : grid) {
      const auto rho = rho_DD(d, d);
      const double w = concurrence(rho);
      worst = std::max({worst, std::abs(w - (1 - d) * (1 - d)), std::abs(w - concurrence_x_state(rho))});
    }
    return std::pair{worst <= 1e-9, "max gap " + num(worst)};
  }));

  out.push_back(timed("fef-oracle-equivalence", [&] {
    StateSampler s(20240517);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const auto rho = s.density();
      worst = std::max(worst, std::abs(fef(rho) - fef_bruteforce(rho, 16)));
    }
    return std::pair{worst <= 1e-4, "max gap " + num(worst)};
  }));

  out.push_back(timed("wmrwm-single-qubit-optima", [&] {
    double wv = 0.0, wq = 0.0, wp = 0.0;
    bool ordered = true;
    for (double d : unit_grid(20, 0.95))
      for (double p : unit_grid(20, 0.95)) {
        const auto tf = optimize_q(Protection::SingleQubit, d, p, Objective::TF);
        const auto c = optimize_q(Protection::SingleQubit, d, p, Objective::Concurrence);
        const auto cft = cf_s1_tfmax(d, p);
        const auto cfc = cf_s1_cmax(d, p);
        wv = std::max({wv, std::abs(tf.value - cft.f_max), std::abs(c.value - cfc.c_max)});
        wq = std::max({wq, std::abs(tf.q_star - cft.q_star), std::abs(c.q_star - cfc.q_star)});
        const double pt = sigma_R_pipeline(d, p, cft.q_star).probability;
        const double pc = sigma_R_pipeline(d, p, cfc.q_star).probability;
        wp = std::max({wp, std::abs(pt - cft.p_succ), std::abs(pc - cfc.p_succ)});
        ordered = ordered && cfc.p_succ >= cft.p_succ - 1e-12;
      }
    return std::pair{wv <= 1e-6 && wq <= 1e-4 && wp <= 1e-9 && ordered,
                     "value " + num(wv) + ", argmax " + num(wq) + ", prob " + num(wp)};
  }));

  out.push_back(timed("wmrwm-both-qubit-optima", [&] {
    double wq = 0.0, wsame = 0.0, wfef = 0.0;
    for (double d : unit_grid(20, 0.95))
      for (double p : unit_grid(20, 0.95)) {
        const auto tf = optimize_q(Protection::BothQubits, d, p, Objective::TF);
        const auto c = optimize_q(Protection::BothQubits, d, p, Objective::Concurrence);
        wq = std::max(wq, std::abs(tf.q_star - cf_s2_tfmax(d, p).q_star));
        wsame = std::max(wsame, std::abs(tf.q_star - c.q_star));
        for (double q : {0.0, 0.3, 0.6}) {
          const auto rr = sigma_RR(d, p, q);
          wfef = std::max(wfef, std::abs(cf_s2(d, p, q).fef_corrected - phi_plus_overlap(rr.state)));
        }
      }
    return std::pair{wq <= 1e-4 && wsame <= 1e-4 && wfef <= 1e-12,
                     "argmax " + num(wq) + ", tf-vs-c argmax " + num(wsame) + ", fef identity " + num(wfef)};
  }));

  out.push_back(timed("classical-correlation-properties", [&] {
    bool ok = std::abs(classical_correlation(bell_phi_plus()).value - 1.0) <= 1e-6;
    ok = ok && classical_correlation(rho_D(1.0)).value <= 1e-9;
    const DensityMatrix product(kron(CMatrix{{0.7, Cplx(0.1, 0.2)}, {Cplx(0.1, -0.2), 0.3}}, CMatrix::diag({0.4, 0.6})));
    ok = ok && classical_correlation(product).value <= 1e-9;
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); i += 10) {
      for (const auto& rho : {rho_D(grid[i]), rho_DD(grid[i], grid[i])}) {
        const double cc = classical_correlation(rho).value;
        worst = std::max(worst, cc - mutual_information(rho));
        ok = ok && cc >= 0.0;
      }
    }
    return std::pair{ok && worst <= 1e-9, "max cc - I " + num(worst)};
  }));

  out.push_back(timed("teleportation-law", [&] {
    double worst = 0.0;
    auto check = [&](const DensityMatrix& rho) {
      const double avg = average_fidelity(prerotated(rho), {EnsembleKind::SIX_CARDINAL, 0, 0}).avg_fidelity;
      worst = std::max(worst, std::abs(avg - (2.0 * fef(rho) + 1.0) / 3.0));
    };
    for (std::size_t i = 0; i < grid.size(); i += 5) {
      const double d = std::min(grid[i], kProtectedDMax);
      check(rho_D(grid[i]));
      check(rho_DD(grid[i], grid[i]));
      for (auto scheme : {Protection::SingleQubit, Protection::BothQubits}) {
        const auto best = optimize_q(scheme, d, kFigureP, Objective::TF);
        check(protected_state(scheme, d, kFigureP, best.q_star).state);
      }
    }
    const auto rho = rho_D(0.5);
    const auto mc = average_fidelity(prerotated(rho), {EnsembleKind::HAAR_MC, 100000, 7});
    const double exact = (2.0 * fef(rho) + 1.0) / 3.0;
    const bool mc_ok = std::abs(mc.avg_fidelity - exact) <= 3.0 * mc.std_error;
    return std::pair{worst <= 1e-9 && mc_ok, "max law gap " + num(worst) + ", MC z " +
                                                 num((mc.avg_fidelity - exact) / mc.std_error)};
  }));

  return out;
}

// Claim ids from the allowlist file: a JSON array of objects with "claim_id".
inline std::set<std::string> load_allowlist(const nlohmann::json& j) {
  std::set<std::string> ids;
  for (const auto& e : j) ids.insert(e.at("claim_id").get<std::string>());
  return ids;
}

struct VerifySummary {
  std::vector<CheckResult> checks;
  std::vector<DiscrepancyRecord> discrepancies;
  std::vector<std::string> unexpected;  // emitted but not allowlisted
  std::vector<std::string> missing;     // allowlisted but not emitted
  bool ok() const {
    return unexpected.empty() && missing.empty() &&
           std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
  }
};

inline VerifySummary verify(const std::set<std::string>& allowlist) {
  VerifySummary s;
  s.checks = run_checks();
  s.discrepancies = collect_discrepancies();
  std::set<std::string> seen;
  for (const auto& r : s.discrepancies) {
    seen.insert(r.claim_id);
    if (!allowlist.count(r.claim_id)) s.unexpected.push_back(r.claim_id);
  }
  for (const auto& id : allowlist)
    if (!seen.count(id)) s.missing.push_back(id);
  return s;
}

inline nlohmann::json to_json(const VerifySummary& s) {
  nlohmann::json j;
  j["ok"] = s.ok();
  j["checks"] = nlohmann::json::array();
  for (const auto& c : s.checks)
    j["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}, {"seconds", c.seconds}});
  j["discrepancies"] = to_json(s.discrepancies);
  j["unexpected"] = s.unexpected;
  j["missing"] = s.missing;
  return j;
}

}  // namespace tfcorr::audit
