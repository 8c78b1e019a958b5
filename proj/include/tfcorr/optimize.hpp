#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <vector>

namespace tfcorr::opt {

struct ScalarMax {
  double x;
  double value;
  int iterations;
  bool converged;
  double bracket_width;
};

// Golden-section maximization of a unimodal f on [lo, hi], narrowed until the
// bracket is at most `width` wide.
inline ScalarMax golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                                    double width = 1e-10, int max_iter = 200) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  int it = 0;
  while (b - a > width && it < max_iter) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
    ++it;
  }
  // The interior probes and the endpoints are all candidates.
  double best_x = fc >= fd ? c : d;
  double best_v = std::max(fc, fd);
  for (double x : {lo, hi}) {
    if (x >= a && x <= b) {
      const double v = f(x);
      if (v > best_v) {
        best_v = v;
        best_x = x;
      }
    }
  }
  return {best_x, best_v, it, b - a <= width, b - a};
}

struct SimplexMax {
  std::vector<double> x;
  double value;
  int iterations;
  bool converged;
};

// Nelder-Mead downhill simplex, maximizing f. Converged once the spread of
// vertex values is within `ftol` and every vertex is within `xtol` of the best.
inline SimplexMax nelder_mead_max(const std::function<double(const std::vector<double>&)>& f,
                                  std::vector<double> start, const std::vector<double>& step,
                                  double ftol = 1e-8, double xtol = 1e-6, int max_iter = 500) {
  const std::size_t n = start.size();
  std::vector<std::vector<double>> pts(n + 1, start);
  for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += step[i];
  // Work with g = -f so the textbook minimization steps apply.
  std::vector<double> g(n + 1);
  for (std::size_t i = 0; i <= n; ++i) g[i] = -f(pts[i]);

  std::vector<std::size_t> idx(n + 1);
  int it = 0;
  bool converged = false;
  for (; it < max_iter; ++it) {
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return g[a] < g[b]; });
    const std::size_t best = idx.front();
    const std::size_t worst = idx.back();
    const std::size_t second = idx[n - 1];
    if (std::abs(g[worst] - g[best]) <= ftol) {
      double size = 0.0;
      for (std::size_t i = 0; i <= n; ++i)
        for (std::size_t k = 0; k < n; ++k) size = std::max(size, std::abs(pts[i][k] - pts[best][k]));
      if (size <= xtol) {
        converged = true;
        break;
      }
    }

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t k = 0; k < n; ++k) centroid[k] += pts[i][k] / static_cast<double>(n);
    }
    auto along = [&](double t) {
      std::vector<double> y(n);
      for (std::size_t k = 0; k < n; ++k) y[k] = centroid[k] + t * (pts[worst][k] - centroid[k]);
      return y;
    };

    auto xr = along(-1.0);
    const double gr = -f(xr);
    if (gr < g[best]) {
      auto xe = along(-2.0);
      const double ge = -f(xe);
      if (ge < gr) {
        pts[worst] = std::move(xe);
        g[worst] = ge;
      } else {
        pts[worst] = std::move(xr);
        g[worst] = gr;
      }
      continue;
    }
    if (gr < g[second]) {
      pts[worst] = std::move(xr);
      g[worst] = gr;
      continue;
    }
    const bool outside = gr < g[worst];
    auto xc = along(outside ? -0.5 : 0.5);
    const double gc = -f(xc);
    if (gc < (outside ? gr : g[worst])) {
      pts[worst] = std::move(xc);
      g[worst] = gc;
      continue;
    }
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t k = 0; k < n; ++k) pts[i][k] = pts[best][k] + 0.5 * (pts[i][k] - pts[best][k]);
      g[i] = -f(pts[i]);
    }
  }
  const auto best = static_cast<std::size_t>(std::min_element(g.begin(), g.end()) - g.begin());
  return {pts[best], -g[best], it, converged};
}

}  // namespace tfcorr::opt
