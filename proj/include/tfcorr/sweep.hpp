#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "tfcorr/wmrwm.hpp"

namespace tfcorr {

// Worker count for row-parallel sweeps. Output never depends on it.
inline unsigned worker_count() {
  if (const char* env = std::getenv("TFCORR_WORKERS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n >= 1) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Evaluates fn(i) for i in [0, n) and returns results in index order.
template <typename T>
std::vector<T> parallel_map(std::size_t n, const std::function<T(std::size_t)>& fn, unsigned workers = worker_count()) {
  std::vector<std::optional<T>> slots(n);
  workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, workers), std::max<std::size_t>(n, 1)));
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) slots[i].emplace(fn(i));
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<T> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

struct SweepConfig {
  int scenario = 1;  // 1: qubit 2 damped, 2: both damped
  bool wmrwm = false;
  double d_start = 0.0;
  double d_end = 1.0;
  int d_steps = 201;
  double p = 0.1;
  std::vector<Variant> variants{Variant::NONE};
  std::uint64_t seed = 0;  // carried for the record; sweeps are deterministic
  std::string output_path;

  void validate() const {
    if (scenario != 1 && scenario != 2) throw DomainError("sweep: scenario must be 1 or 2");
    if (!(d_start >= 0.0 && d_start < d_end && d_end <= 1.0)) throw DomainError("sweep: need 0 <= d_start < d_end <= 1");
    if (d_steps < 2 || d_steps > 10001) throw DomainError("sweep: steps must be in [2, 10001]");
    if (variants.empty()) throw DomainError("sweep: no variants");
    for (Variant v : variants)
      if (wmrwm == (v == Variant::NONE)) throw DomainError("sweep: variant does not match protection mode");
    if (wmrwm) require_half_open(p, "p");
  }

  Scenario scenario_kind() const {
    if (scenario == 1) return wmrwm ? Scenario::I_WMRWM : Scenario::I_BARE;
    return wmrwm ? Scenario::II_WMRWM : Scenario::II_BARE;
  }
};

// Protected scenarios need d < 1; the grid end is pulled in by 1e-9.
inline constexpr double kProtectedDMax = 1.0 - 1e-9;

inline std::vector<double> d_grid(const SweepConfig& cfg) {
  std::vector<double> g(static_cast<std::size_t>(cfg.d_steps));
  for (int i = 0; i < cfg.d_steps; ++i) {
    double d = cfg.d_start + (cfg.d_end - cfg.d_start) * i / (cfg.d_steps - 1);
    if (i == cfg.d_steps - 1) d = cfg.d_end;
    if (cfg.wmrwm) d = std::min(d, kProtectedDMax);
    g[static_cast<std::size_t>(i)] = d;
  }
  return g;
}

inline std::vector<ScenarioPoint> run_sweep(const SweepConfig& cfg, unsigned workers = worker_count()) {
  cfg.validate();
  const auto grid = d_grid(cfg);
  const std::size_t nv = cfg.variants.size();
  const Scenario kind = cfg.scenario_kind();
  return parallel_map<ScenarioPoint>(
      grid.size() * nv,
      [&](std::size_t i) { return scenario_point(kind, grid[i / nv], cfg.wmrwm ? cfg.p : 0.0, cfg.variants[i % nv]); },
      workers);
}

inline constexpr const char* kCsvHeader =
    "scenario,variant,d,p,q_star,concurrence,fef,tf,entropy_a,entropy_b,entropy_ab,mutual_info,cc,cc_theta,cc_phi,"
    "success_prob";

inline std::string fmt12(double v) {
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string csv_row(const ScenarioPoint& pt) {
  const auto& r = pt.report;
  std::ostringstream os;
  os << to_string(pt.scenario) << ',' << to_string(pt.variant) << ',' << fmt12(pt.d) << ',' << fmt12(pt.p) << ','
     << (pt.q_star ? fmt12(*pt.q_star) : std::string()) << ',' << fmt12(r.concurrence) << ',' << fmt12(r.fef) << ','
     << fmt12(r.tf) << ',' << fmt12(r.entropy_a) << ',' << fmt12(r.entropy_b) << ',' << fmt12(r.entropy_ab) << ','
     << fmt12(r.mutual_info) << ',' << fmt12(r.cc) << ',' << fmt12(r.cc_argmax.theta) << ','
     << fmt12(r.cc_argmax.phi) << ',' << fmt12(pt.success_prob);
  return os.str();
}

inline std::string to_csv(const std::vector<ScenarioPoint>& rows) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& r : rows) out += csv_row(r) + "\n";
  return out;
}

struct IoError : Error {
  using Error::Error;
};

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f << text;
  f.flush();
  if (!f) throw IoError("write failed for " + path.string());
}

// ---------------------------------------------------------------------------
// Figure data: one CSV per (panel, curve) plus a gnuplot script.
// ---------------------------------------------------------------------------

struct CurveSpec {
  std::string name;
  SweepConfig config;
};

struct PanelSpec {
  char id;
  std::string column;
  std::string ylabel;
};

inline constexpr double kFigureP = 0.1;
inline constexpr int kFigureSteps = 201;

inline std::vector<CurveSpec> figure_curves(int figure) {
  auto cfg = [](int scenario, bool wmrwm, Variant v) {
    SweepConfig c;
    c.scenario = scenario;
    c.wmrwm = wmrwm;
    c.d_steps = kFigureSteps;
    c.p = wmrwm ? kFigureP : 0.0;
    c.variants = {v};
    return c;
  };
  switch (figure) {
    case 1:
      return {{"single", cfg(1, false, Variant::NONE)}, {"both", cfg(2, false, Variant::NONE)}};
    case 2:
    case 3: {
      const int s = figure == 2 ? 1 : 2;
      return {{"bare", cfg(s, false, Variant::NONE)},
              {"tfmax", cfg(s, true, Variant::TF_MAX)},
              {"cmax", cfg(s, true, Variant::C_MAX)}};
    }
    default:
      throw DomainError("figure id must be 1, 2 or 3");
  }
}

inline std::vector<PanelSpec> figure_panels(int figure) {
  std::vector<PanelSpec> p{{'a', "concurrence", "Concurrence"}, {'b', "tf", "Teleportation fidelity"},
                           {'c', "cc", "Classical correlation"}};
  if (figure != 1) p.push_back({'d', "success_prob", "Success probability"});
  return p;
}

inline std::string figure_csv_name(int figure, char panel, const std::string& curve) {
  return "fig" + std::to_string(figure) + "_" + panel + "_" + curve + ".csv";
}

inline std::string gnuplot_script(int figure) {
  const auto panels = figure_panels(figure);
  const auto curves = figure_curves(figure);
  std::ostringstream os;
  os << "# gnuplot -c fig" << figure << ".gp\n"
     << "set datafile separator ','\n"
     << "set terminal pngcairo size " << 420 * panels.size() << ",400\n"
     << "set output 'fig" << figure << ".png'\n"
     << "set multiplot layout 1," << panels.size() << "\n"
     << "set xlabel 'D'\n"
     << "set xrange [0:1]\n"
     << "set key bottom left\n";
  const char* styles[] = {"dt 2", "dt 1", "dt 3"};
  const std::string header = kCsvHeader;
  for (const auto& panel : panels) {
    os << "set title '(" << panel.id << ")'\n"
       << "set ylabel '" << panel.ylabel << "'\n";
    // 1-based CSV column of the panel's quantity.
    int col = 1;
    for (std::size_t pos = 0, next; (next = header.find(',', pos)) != std::string::npos; pos = next + 1, ++col)
      if (header.substr(pos, next - pos) == panel.column) break;
    std::vector<std::string> terms;
    for (std::size_t c = 0; c < curves.size(); ++c) {
      terms.push_back("'" + figure_csv_name(figure, panel.id, curves[c].name) + "' every ::1 using 3:" +
                      std::to_string(col) + " with lines " + styles[c % 3] + " lw 2 title '" + curves[c].name + "'");
    }
    if (panel.column == "tf") terms.push_back("2.0/3.0 with lines lc rgb 'black' title 'classical bound 2/3'");
    os << "plot ";
    for (std::size_t t = 0; t < terms.size(); ++t) os << (t ? ", " : "") << terms[t];
    os << "\n";
  }
  os << "unset multiplot\n";
  return os.str();
}

// Writes every curve file and the plot script into dir; returns the file names written.
inline std::vector<std::string> write_figure(int figure, const std::filesystem::path& dir,
                                             unsigned workers = worker_count()) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  std::vector<std::string> written;
  for (const auto& curve : figure_curves(figure)) {
    const std::string csv = to_csv(run_sweep(curve.config, workers));
    for (const auto& panel : figure_panels(figure)) {
      const auto name = figure_csv_name(figure, panel.id, curve.name);
      write_file(dir / name, csv);
      written.push_back(name);
    }
  }
  const std::string script = "fig" + std::to_string(figure) + ".gp";
  write_file(dir / script, gnuplot_script(figure));
  written.push_back(script);
  return written;
}

}  // namespace tfcorr
