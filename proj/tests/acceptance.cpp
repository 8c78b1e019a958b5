// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "cli_util.hpp"
#include "tfcorr/audit.hpp"

using namespace tfcorr;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_s > 0.0 && s > limit_s) {
    o.pass = false;
    o.detail += "; runtime " + fmt12(s) + " s exceeds " + fmt12(limit_s) + " s";
  }
  if (!o.pass) ++failures;
  std::printf("%s [%2d] %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(), s);
  std::fflush(stdout);
}

std::vector<double> grid201() { return audit::unit_grid(201); }

std::vector<double> grid20() {
  std::vector<double> g;
  for (int i = 0; i < 20; ++i) g.push_back(0.05 * i);
  return g;
}

const audit::DiscrepancyRecord* find(const std::vector<audit::DiscrepancyRecord>& recs, const std::string& id) {
  for (const auto& r : recs)
    if (r.claim_id == id) return &r;
  return nullptr;
}

double as_number(const std::variant<double, std::string>& v) {
  return std::holds_alternative<double>(v) ? std::get<double>(v) : std::nan("");
}

std::map<std::string, std::string> dir_contents(const fs::path& dir) {
  std::map<std::string, std::string> m;
  for (const auto& e : fs::directory_iterator(dir)) m[e.path().filename().string()] = cli::slurp(e.path());
  return m;
}

}  // namespace

int main() {
  const auto records = audit::collect_discrepancies();

  criterion(1, "scenario I closed forms", 5.0, [] {
    double wc = 0.0, wt = 0.0;
    for (double d : grid201()) {
      wc = std::max(wc, std::abs(concurrence(rho_D(d)) - std::sqrt(1.0 - d)));
      wt = std::max(wt, std::abs(teleportation_fidelity(rho_D(d)) - (4.0 + 2.0 * std::sqrt(1.0 - d) - d) / 6.0));
    }
    return Outcome{wc <= 1e-9 && wt <= 1e-9, "max |dC| " + fmt12(wc) + ", max |dTF| " + fmt12(wt)};
  });

  criterion(2, "TF threshold bisection", 0.0, [] {
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-12) {
      const double mid = 0.5 * (lo + hi);
      (teleportation_fidelity(rho_D(mid)) > 2.0 / 3.0 ? lo : hi) = mid;
    }
    const double root = 0.5 * (lo + hi);
    const double gap = std::abs(root - (2.0 * std::sqrt(2.0) - 2.0));
    return Outcome{gap <= 1e-6, "d* = " + fmt12(root) + ", gap " + fmt12(gap)};
  });

  criterion(3, "scenario II TF and activation", 0.0, [] {
    double w = 0.0;
    bool active = true;
    for (double d : grid201()) {
      w = std::max(w, std::abs(teleportation_fidelity(rho_DD(d, d)) - (3.0 - 2.0 * d + d * d) / 3.0));
      const double dd = std::min(d, 1.0 - 1e-6);
      active = active && teleportation_fidelity(rho_DD(dd, dd)) > 2.0 / 3.0;
    }
    return Outcome{w <= 1e-9 && active, "max |dTF| " + fmt12(w) + (active ? ", tf > 2/3 for d <= 1-1e-6" : ", inactive")};
  });

  criterion(4, "concurrence audit", 0.0, [&] {
    double w = 0.0;
    for (double d : grid201()) {
      const auto rho = rho_DD(d, d);
      w = std::max({w, std::abs(concurrence(rho) - (1 - d) * (1 - d)), std::abs(concurrence_x_state(rho) - (1 - d) * (1 - d))});
    }
    const auto* r = find(records, "eq-CTF_DD-concurrence");
    const double gap = r ? as_number(r->paper_value) - r->computed_value : std::nan("");
    const bool flagged = r && std::abs(gap - 0.059) < 1e-3;
    return Outcome{w <= 1e-9 && flagged, "max |C - (1-d)^2| " + fmt12(w) + ", reported gap at d=0.5 " + fmt12(gap)};
  });

  criterion(5, "FEF oracle equivalence", 30.0, [] {
    StateSampler s(20240517);
    double w = 0.0;
    for (int i = 0; i < 100; ++i) {
      const auto rho = s.density();
      w = std::max(w, std::abs(fef(rho) - fef_bruteforce(rho, 16)));
    }
    return Outcome{w <= 1e-4, "max |f - f_brute| " + fmt12(w)};
  });

  criterion(6, "WMRWM scenario I optima", 60.0, [] {
    double wv = 0.0, wq = 0.0, wp = 0.0;
    bool ordered = true;
    for (double d : grid20())
      for (double p : grid20()) {
        const auto tf = optimize_q(Protection::SingleQubit, d, p, Objective::TF);
        const auto c = optimize_q(Protection::SingleQubit, d, p, Objective::Concurrence);
        const auto cft = cf_s1_tfmax(d, p);
        const auto cfc = cf_s1_cmax(d, p);
        wv = std::max({wv, std::abs(tf.value - cft.f_max), std::abs(c.value - cfc.c_max)});
        wq = std::max({wq, std::abs(tf.q_star - cft.q_star), std::abs(c.q_star - cfc.q_star)});
        const double pt = sigma_R_pipeline(d, p, cft.q_star).probability;
        const double pc = sigma_R_pipeline(d, p, cfc.q_star).probability;
        wp = std::max({wp, std::abs(pt - cft.p_succ), std::abs(pc - cfc.p_succ)});
        ordered = ordered && pc >= pt - 1e-12;
      }
    return Outcome{wv <= 1e-6 && wq <= 1e-4 && wp <= 1e-9 && ordered,
                   "value " + fmt12(wv) + ", argmax " + fmt12(wq) + ", prob " + fmt12(wp) +
                       (ordered ? ", P_cmax >= P_tfmax" : ", ordering violated")};
  });

  criterion(7, "WMRWM scenario II optima", 60.0, [&] {
    double wq = 0.0, wsame = 0.0, wfef = 0.0;
    for (double d : grid20())
      for (double p : grid20()) {
        const auto tf = optimize_q(Protection::BothQubits, d, p, Objective::TF);
        const auto c = optimize_q(Protection::BothQubits, d, p, Objective::Concurrence);
        wq = std::max(wq, std::abs(tf.q_star - cf_s2_tfmax(d, p).q_star));
        wsame = std::max(wsame, std::abs(tf.q_star - c.q_star));
        for (double q : audit::unit_grid(11, 0.95))
          wfef = std::max(wfef, std::abs(cf_s2(d, p, q).fef_corrected - phi_plus_overlap(sigma_RR(d, p, q).state)));
      }
    const auto* r = find(records, "eq-f_WW-normalization");
    const bool flagged = r && std::abs(as_number(r->paper_value) - 2.0) <= 1e-12;
    return Outcome{wq <= 1e-4 && wsame <= 1e-4 && wfef <= 1e-12 && flagged,
                   "argmax " + fmt12(wq) + ", C vs TF argmax " + fmt12(wsame) + ", fef identity " + fmt12(wfef) +
                       (flagged ? ", printed f=2 flagged" : ", printed normalization not flagged")};
  });

  criterion(8, "classical correlation properties", 0.0, [&] {
    const double bell = classical_correlation(bell_phi_plus()).value;
    StateSampler s(8);
    double prod = 0.0;
    for (int i = 0; i < 10; ++i) {
      auto qubit = [&] {
        const CMatrix g = s.ginibre(2);
        CMatrix r = g * dagger(g);
        return CMatrix((r + dagger(r)) * Cplx(0.5 / r.trace().real()));
      };
      prod = std::max(prod, classical_correlation(DensityMatrix(kron(qubit(), qubit()))).value);
    }
    const double d1 = classical_correlation(rho_D(1.0)).value;
    bool bounded = true;
    for (double d : grid201())
      for (const auto& rho : {rho_D(d), rho_DD(d, d)}) {
        const double cc = classical_correlation(rho).value;
        bounded = bounded && cc >= 0.0 && cc <= mutual_information(rho) + 1e-9;
      }
    const auto* r = find(records, "cc-at-D1-scenario2");
    const bool flagged = r && r->computed_value <= 1e-9;
    return Outcome{std::abs(bell - 1.0) <= 1e-6 && prod <= 1e-9 && d1 <= 1e-9 && bounded && flagged,
                   "CC(bell) " + fmt12(bell) + ", max CC(product) " + fmt12(prod) + ", CC(rho_D(1)) " + fmt12(d1) +
                       (bounded ? ", 0 <= CC <= I" : ", bound violated") + (flagged ? ", D=1 claim flagged" : "")};
  });

  criterion(9, "teleportation law", 60.0, [] {
    double w = 0.0;
    auto check = [&](const DensityMatrix& rho) {
      const double avg = average_fidelity(prerotated(rho), {}).avg_fidelity;
      w = std::max(w, std::abs(avg - (2.0 * fef(rho) + 1.0) / 3.0));
    };
    for (double d : grid201()) {
      check(rho_D(d));
      check(rho_DD(d, d));
      const double dp = std::min(d, kProtectedDMax);
      for (auto scheme : {Protection::SingleQubit, Protection::BothQubits})
        for (auto obj : {Objective::TF, Objective::Concurrence})
          check(protected_state(scheme, dp, kFigureP, optimize_q(scheme, dp, kFigureP, obj).q_star).state);
    }
    const auto shared = prerotated(rho_D(0.5));
    const auto mc = average_fidelity(shared, {EnsembleKind::HAAR_MC, 100000, 7});
    const double exact = average_fidelity(shared, {}).avg_fidelity;
    const double z = (mc.avg_fidelity - exact) / mc.std_error;
    return Outcome{w <= 1e-9 && std::abs(z) <= 3.0, "max law gap " + fmt12(w) + ", MC z-score " + fmt12(z)};
  });

  criterion(10, "figure determinism", 0.0, [] {
    const auto base = cli::scratch("accept10");
    std::vector<std::map<std::string, std::string>> runs;
    for (const char* env : {"TFCORR_WORKERS=1", "TFCORR_WORKERS=1", "TFCORR_WORKERS=4", ""}) {
      const auto dir = base / std::to_string(runs.size());
      const auto r = cli::run("figure 2 --out " + dir.string(), env);
      if (r.code != 0) return Outcome{false, "figure 2 exited " + std::to_string(r.code)};
      runs.push_back(dir_contents(dir));
    }
    fs::remove_all(base);
    bool same = true;
    for (const auto& r : runs) same = same && r == runs.front();
    return Outcome{same && runs.front().size() == 13,
                   std::to_string(runs.front().size()) + " files; " +
                       (same ? "byte-identical across 2 repeat runs and workers {1, 4, default}" : "outputs differ")};
  });

  criterion(11, "verify end to end", 0.0, [] {
    const auto dir = cli::scratch("accept11");
    const auto r = cli::run("verify --json " + (dir / "d.json").string());
    std::set<std::string> got;
    for (const auto& rec : nlohmann::json::parse(cli::slurp(dir / "d.json"))) got.insert(rec["claim_id"].get<std::string>());
    std::set<std::string> allowed;
    for (const auto& rec : nlohmann::json::parse(cli::slurp(TFCORR_DATA_DIR "/known_discrepancies.json")))
      allowed.insert(rec["claim_id"].get<std::string>());
    fs::remove_all(dir);
    std::string ids;
    for (const auto& id : got) ids += (ids.empty() ? "" : ", ") + id;
    return Outcome{r.code == 0 && got == allowed && got.size() >= 5,
                   "exit " + std::to_string(r.code) + ", records {" + ids + "}" +
                       (got == allowed ? " == allowlist" : " != allowlist")};
  });

  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
