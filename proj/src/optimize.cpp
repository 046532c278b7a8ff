#include "msr/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace msr {

OptimResult nelder_mead(const Objective& f, std::vector<double> x0, double step, double ftol, int max_evals) {
  const std::size_t n = x0.size();
  OptimResult res;
  if (n == 0) {
    res.x = x0;
    res.f = f(x0);
    res.evaluations = 1;
    return res;
  }
  std::vector<std::vector<double>> pts(n + 1, x0);
  std::vector<double> vals(n + 1);
  for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += step;
  int evals = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    return f(x);
  };
  for (std::size_t i = 0; i <= n; ++i) vals[i] = eval(pts[i]);
  std::vector<std::size_t> idx(n + 1);
  while (evals < max_evals) {
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return vals[a] < vals[b]; });
    const auto best = idx.front(), worst = idx.back(), second = idx[n - 1];
    if (std::abs(vals[worst] - vals[best]) <= ftol * (std::abs(vals[best]) + ftol)) {
      double spread = 0.0;
      for (std::size_t i = 0; i <= n; ++i)
        for (std::size_t d = 0; d < n; ++d) spread = std::max(spread, std::abs(pts[i][d] - pts[best][d]));
      if (spread < 1e-12 * (1.0 + step)) break;
      if (std::abs(vals[worst] - vals[best]) == 0.0 && spread < 1e-9) break;
    }
    std::vector<double> c(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i)
      if (i != worst)
        for (std::size_t d = 0; d < n; ++d) c[d] += pts[i][d] / n;
    auto along = [&](double t) {
      std::vector<double> x(n);
      for (std::size_t d = 0; d < n; ++d) x[d] = c[d] + t * (pts[worst][d] - c[d]);
      return x;
    };
    auto xr = along(-1.0);
    const double fr = eval(xr);
    if (fr < vals[best]) {
      auto xe = along(-2.0);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[worst] = xe;
        vals[worst] = fe;
      } else {
        pts[worst] = xr;
        vals[worst] = fr;
      }
    } else if (fr < vals[second]) {
      pts[worst] = xr;
      vals[worst] = fr;
    } else {
      const bool outside = fr < vals[worst];
      auto xc = along(outside ? -0.5 : 0.5);
      const double fc = eval(xc);
      if (fc < (outside ? fr : vals[worst])) {
        pts[worst] = xc;
        vals[worst] = fc;
      } else {
        for (std::size_t i = 0; i <= n; ++i) {
          if (i == best) continue;
          for (std::size_t d = 0; d < n; ++d) pts[i][d] = pts[best][d] + 0.5 * (pts[i][d] - pts[best][d]);
          vals[i] = eval(pts[i]);
        }
      }
    }
  }
  const auto b = std::min_element(vals.begin(), vals.end()) - vals.begin();
  res.x = pts[b];
  res.f = vals[b];
  res.evaluations = evals;
  return res;
}

OptimResult hooke_jeeves(const Objective& f, std::vector<double> x0, double step, double min_step, int max_iter) {
  OptimResult res;
  res.x = std::move(x0);
  res.f = f(res.x);
  res.evaluations = 1;
  auto explore = [&](std::vector<double> base, double fbase, double h, double& fout) {
    for (std::size_t d = 0; d < base.size(); ++d) {
      for (double sgn : {1.0, -1.0}) {
        auto trial = base;
        trial[d] += sgn * h;
        const double ft = f(trial);
        ++res.evaluations;
        if (ft < fbase) {
          base = std::move(trial);
          fbase = ft;
          break;
        }
      }
    }
    fout = fbase;
    return base;
  };
  double h = step;
  for (int it = 0; it < max_iter && h >= min_step; ++it) {
    double fnew;
    auto xnew = explore(res.x, res.f, h, fnew);
    if (fnew < res.f) {
      // pattern move along the improving direction
      while (true) {
        std::vector<double> jump(xnew.size());
        for (std::size_t d = 0; d < xnew.size(); ++d) jump[d] = 2.0 * xnew[d] - res.x[d];
        res.x = xnew;
        res.f = fnew;
        double fj;
        auto xj = explore(jump, f(jump), h, fj);
        ++res.evaluations;
        if (fj < res.f) {
          xnew = std::move(xj);
          fnew = fj;
        } else {
          break;
        }
        if (++it >= max_iter) break;
      }
    } else {
      h *= 0.5;
    }
  }
  return res;
}

}  // namespace msr
