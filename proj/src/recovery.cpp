#include "msr/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "msr/errors.hpp"
#include "msr/incoherence.hpp"
#include "msr/minmax_solver.hpp"
#include "msr/optimize.hpp"

namespace msr {

std::string to_string(IlluminationMode mode) {
  switch (mode) {
    case IlluminationMode::known: return "known";
    case IlluminationMode::approximated: return "approximated";
    case IlluminationMode::unknown: return "unknown";
  }
  return "unknown";
}

Disk RecoveryProblem::default_disk(int n, double omega, double c0, Location center) {
  return {center, c0 * n * std::numbers::pi / omega};
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMaxCondition = 1e12;

Eigen::MatrixXd realify(const Eigen::MatrixXcd& c) {
  Eigen::MatrixXd r(2 * c.rows(), 2 * c.cols());
  for (Eigen::Index i = 0; i < c.rows(); ++i)
    for (Eigen::Index j = 0; j < c.cols(); ++j) {
      const auto v = c(i, j);
      r(2 * i, 2 * j) = v.real();
      r(2 * i, 2 * j + 1) = -v.imag();
      r(2 * i + 1, 2 * j) = v.imag();
      r(2 * i + 1, 2 * j + 1) = v.real();
    }
  return r;
}

Eigen::VectorXd realify(const Eigen::VectorXcd& v) {
  Eigen::VectorXd r(2 * v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    r[2 * i] = v[i].real();
    r[2 * i + 1] = v[i].imag();
  }
  return r;
}

Eigen::VectorXcd complexify(const Eigen::VectorXd& u) {
  Eigen::VectorXcd v(u.size() / 2);
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = {u[2 * i], u[2 * i + 1]};
  return v;
}

bool uses_patterns(IlluminationMode mode) { return mode != IlluminationMode::unknown; }

Eigen::MatrixXcd pattern_values(const RecoveryProblem& p, const std::vector<Location>& support) {
  const std::size_t frames = p.measurements.frame_count();
  if (p.patterns.size() != frames) throw DomainError("pattern count differs from frame count");
  Eigen::MatrixXcd v(frames, support.size());
  for (std::size_t t = 0; t < frames; ++t)
    for (std::size_t j = 0; j < support.size(); ++j) v(t, j) = p.patterns(t, support[j]);
  return v;
}

bool solve_ls(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& b, Eigen::VectorXcd& x) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(a);
  const auto& r = qr.matrixQR();
  const Eigen::Index k = a.cols();
  const double top = std::abs(r(0, 0));
  if (!(top > 0.0) || std::abs(r(k - 1, k - 1)) * kMaxCondition < top) return false;
  x = qr.solve(b);
  return x.allFinite();
}

void finish_fit(const RecoveryProblem& p, const Eigen::MatrixXcd& basis, SupportFit& fit) {
  const auto& ms = p.measurements;
  fit.residuals.clear();
  fit.sum_squares = 0.0;
  for (std::size_t t = 0; t < ms.frame_count(); ++t) {
    Eigen::VectorXcd r = -ms.frames[t];
    if (basis.cols() > 0) r += basis * fit.effective.row(t).transpose();
    fit.sum_squares += r.squaredNorm();
    fit.residuals.push_back(frame_norm(r, ms.mode));
  }
  fit.max_residual = *std::max_element(fit.residuals.begin(), fit.residuals.end());
}

std::vector<Location> candidate_grid(const RecoveryProblem& p) {
  if (!(p.grid_pitch > 0.0)) throw DomainError("grid pitch must be positive");
  std::vector<Location> g;
  if (p.dim() == 1) {
    if (!(p.interval.hi >= p.interval.lo)) throw DomainError("empty search interval");
    const auto count = static_cast<long>(std::floor((p.interval.hi - p.interval.lo) / p.grid_pitch + 1e-9)) + 1;
    for (long i = 0; i < count; ++i) g.push_back({p.interval.lo + i * p.grid_pitch, 0.0});
  } else {
    const double r = p.disk.radius;
    if (!(r > 0.0)) throw DomainError("search disk radius must be positive");
    const auto half = static_cast<long>(std::floor(r / p.grid_pitch));
    for (long j = -half; j <= half; ++j)
      for (long i = -half; i <= half; ++i) {
        Location off{i * p.grid_pitch, j * p.grid_pitch};
        if (norm(off) <= r) g.push_back(p.disk.center + off);
      }
  }
  return g;
}

bool inside_domain(const RecoveryProblem& p, const Location& y) {
  if (p.dim() == 1) return y.x >= p.interval.lo && y.x <= p.interval.hi;
  return norm(y - p.disk.center) <= p.disk.radius;
}

// Screening data: every grid point's basis column correlated with the data.
struct Screen {
  const RecoveryProblem& p;
  IlluminationMode mode;
  std::vector<Location> grid;
  std::vector<bool> usable;
  Eigen::MatrixXcd gram;   // B^H B over grid points
  Eigen::MatrixXcd corr;   // (B^H Y_t)(g, t)
  Eigen::MatrixXcd pat;    // T x G pattern values
  std::vector<double> energy;  // ||Y_t||^2

  Screen(const RecoveryProblem& prob, IlluminationMode m) : p(prob), mode(m), grid(candidate_grid(prob)) {
    const auto& ms = p.measurements;
    const auto basis = fourier_basis(grid, ms.grid);
    gram = basis.adjoint() * basis;
    corr.resize(static_cast<Eigen::Index>(grid.size()), static_cast<Eigen::Index>(ms.frame_count()));
    for (std::size_t t = 0; t < ms.frame_count(); ++t) {
      corr.col(t) = basis.adjoint() * ms.frames[t];
      energy.push_back(ms.frames[t].squaredNorm());
    }
    usable.assign(grid.size(), true);
    if (uses_patterns(mode)) {
      pat.resize(static_cast<Eigen::Index>(ms.frame_count()), static_cast<Eigen::Index>(grid.size()));
      for (std::size_t g = 0; g < grid.size(); ++g) {
        try {
          for (std::size_t t = 0; t < ms.frame_count(); ++t) pat(t, g) = p.patterns(t, grid[g]);
        } catch (const OutOfDomainError&) {
          usable[g] = false;
        }
      }
    }
  }

  // Total least-squares residual energy of a support (inf when ill-posed).
  double score(const std::vector<int>& s) const {
    const auto k = static_cast<Eigen::Index>(s.size());
    for (int g : s)
      if (!usable[g]) return kInf;
    Eigen::MatrixXcd gs(k, k);
    const auto frames = static_cast<Eigen::Index>(energy.size());
    if (!uses_patterns(mode)) {
      for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j) gs(i, j) = gram(s[i], s[j]);
      if (!well_conditioned(gs)) return kInf;
      Eigen::LLT<Eigen::MatrixXcd> llt(gs);
      double total = 0.0;
      Eigen::VectorXcd c(k);
      for (Eigen::Index t = 0; t < frames; ++t) {
        for (Eigen::Index i = 0; i < k; ++i) c[i] = corr(s[i], t);
        total += energy[t] - c.dot(llt.solve(c)).real();
      }
      return std::max(total, 0.0);
    }
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(k);
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = 0; j < k; ++j) {
        Complex w = 0.0;
        for (Eigen::Index t = 0; t < frames; ++t) w += std::conj(pat(t, s[i])) * pat(t, s[j]);
        gs(i, j) = w * gram(s[i], s[j]);
      }
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index t = 0; t < frames; ++t) c[i] += std::conj(pat(t, s[i])) * corr(s[i], t);
    if (!well_conditioned(gs)) return kInf;
    double total = 0.0;
    for (double e : energy) total += e;
    total -= c.dot(Eigen::LLT<Eigen::MatrixXcd>(gs).solve(c)).real();
    return std::max(total, 0.0);
  }

  static bool well_conditioned(const Eigen::MatrixXcd& gs) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gs, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    return ev[0] > 0.0 && ev[ev.size() - 1] <= kMaxCondition * ev[0];
  }
};

struct Candidate {
  double score;
  std::vector<int> support;
  bool operator<(const Candidate& o) const {
    return score != o.score ? score < o.score : support < o.support;
  }
};

// Keeps the `cap` best candidates in sorted order.
void offer(std::vector<Candidate>& best, std::size_t cap, Candidate c) {
  if (!std::isfinite(c.score)) return;
  if (best.size() == cap && !(c < best.back())) return;
  auto pos = std::lower_bound(best.begin(), best.end(), c);
  if (pos != best.end() && pos->support == c.support) return;
  best.insert(pos, std::move(c));
  if (best.size() > cap) best.pop_back();
}

double binomial(std::size_t n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r = r * static_cast<double>(n - i) / (i + 1);
  return r;
}

void enumerate(const Screen& sc, int k, std::size_t cap, std::vector<Candidate>& best) {
  const int g = static_cast<int>(sc.grid.size());
  std::vector<int> s(k);
  for (int i = 0; i < k; ++i) s[i] = i;
  if (k > g) return;
  while (true) {
    offer(best, cap, {sc.score(s), s});
    int i = k - 1;
    while (i >= 0 && s[i] == g - k + i) --i;
    if (i < 0) break;
    ++s[i];
    for (int j = i + 1; j < k; ++j) s[j] = s[j - 1] + 1;
  }
}

// Greedy selection of the grid point that best explains the residual.
std::vector<int> matching_pursuit(const Screen& sc, int k) {
  std::vector<int> s;
  for (int step = 0; step < k; ++step) {
    Candidate best{kInf, {}};
    for (int g = 0; g < static_cast<int>(sc.grid.size()); ++g) {
      if (std::find(s.begin(), s.end(), g) != s.end()) continue;
      auto t = s;
      t.push_back(g);
      std::sort(t.begin(), t.end());
      Candidate c{sc.score(t), t};
      if (c < best) best = c;
    }
    if (best.support.empty()) break;
    s = best.support;
  }
  return s;
}

void beam_extend(const Screen& sc, const std::vector<Candidate>& beam, int k, std::size_t cap,
                 std::vector<Candidate>& best) {
  for (const auto& b : beam)
    for (int g = 0; g < static_cast<int>(sc.grid.size()); ++g) {
      if (std::find(b.support.begin(), b.support.end(), g) != b.support.end()) continue;
      auto t = b.support;
      t.push_back(g);
      std::sort(t.begin(), t.end());
      offer(best, cap, {sc.score(t), t});
    }
  auto mp = matching_pursuit(sc, k);
  if (static_cast<int>(mp.size()) == k) offer(best, cap, {sc.score(mp), mp});
}

bool less_lex(const std::vector<Location>& a, const std::vector<Location>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), [](const Location& u, const Location& v) {
    return u.x != v.x ? u.x < v.x : u.y < v.y;
  });
}

std::vector<Location> sorted_support(std::vector<Location> s) {
  std::sort(s.begin(), s.end(), [](const Location& u, const Location& v) { return u.x != v.x ? u.x < v.x : u.y < v.y; });
  return s;
}

}  // namespace

SupportFit fit_support_ls(const RecoveryProblem& p, const std::vector<Location>& support, IlluminationMode mode) {
  const auto& ms = p.measurements;
  SupportFit fit;
  const auto frames = static_cast<Eigen::Index>(ms.frame_count());
  const auto k = static_cast<Eigen::Index>(support.size());
  if (frames == 0) throw DomainError("recovery problem without frames");
  fit.effective = Eigen::MatrixXcd::Zero(frames, k);
  const Eigen::MatrixXcd basis = fourier_basis(support, ms.grid);
  if (k == 0) {
    fit.ok = true;
    finish_fit(p, basis, fit);
    return fit;
  }
  const auto m = basis.rows();
  if (uses_patterns(mode)) {
    Eigen::MatrixXcd pv;
    try {
      pv = pattern_values(p, support);
    } catch (const OutOfDomainError&) {
      return fit;
    }
    Eigen::MatrixXcd a(frames * m, k);
    Eigen::VectorXcd y(frames * m);
    for (Eigen::Index t = 0; t < frames; ++t) {
      a.middleRows(t * m, m) = basis * pv.row(t).asDiagonal();
      y.segment(t * m, m) = ms.frames[t];
    }
    if (!solve_ls(a, y, fit.shared)) return fit;
    for (Eigen::Index t = 0; t < frames; ++t) fit.effective.row(t) = pv.row(t).cwiseProduct(fit.shared.transpose());
  } else {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(basis);
    const auto& r = qr.matrixQR();
    const double top = std::abs(r(0, 0));
    if (!(top > 0.0) || std::abs(r(k - 1, k - 1)) * kMaxCondition < top) return fit;
    for (Eigen::Index t = 0; t < frames; ++t) fit.effective.row(t) = qr.solve(ms.frames[t]).transpose();
  }
  fit.ok = fit.effective.allFinite();
  if (fit.ok) finish_fit(p, basis, fit);
  return fit;
}

SupportFit fit_support_minimax(const RecoveryProblem& p, const std::vector<Location>& support, IlluminationMode mode) {
  SupportFit ls = fit_support_ls(p, support, mode);
  if (!ls.ok || support.empty()) return ls;
  const auto& ms = p.measurements;
  if (!uses_patterns(mode) && ms.mode == NormMode::rms) return ls;  // per-frame LS is already optimal

  const Eigen::MatrixXcd basis = fourier_basis(support, ms.grid);
  const auto frames = static_cast<Eigen::Index>(ms.frame_count());
  const auto m = basis.rows();
  const double tol = p.tolerance();
  const double gap = std::max(1e-4 * tol, 1e-9 * ls.max_residual) + 1e-300;
  SupportFit out = ls;

  auto node_cones = [&](const Eigen::MatrixXcd& a, const Eigen::VectorXcd& y, std::vector<ConeTerm>& cones) {
    for (Eigen::Index l = 0; l < a.rows(); ++l)
      cones.push_back({realify(Eigen::MatrixXcd(a.row(l))), -realify(Eigen::VectorXcd(y.segment(l, 1)))});
  };

  if (uses_patterns(mode)) {
    const Eigen::MatrixXcd pv = pattern_values(p, support);
    std::vector<ConeTerm> cones;
    const double w = 1.0 / std::sqrt(static_cast<double>(m));
    for (Eigen::Index t = 0; t < frames; ++t) {
      Eigen::MatrixXcd a = basis * pv.row(t).asDiagonal();
      if (ms.mode == NormMode::rms)
        cones.push_back({w * realify(a), -w * realify(ms.frames[t])});
      else
        node_cones(a, ms.frames[t], cones);
    }
    const auto r = minimize_max_norm(cones, {}, realify(ls.shared), gap, 400);
    out.shared = complexify(r.u);
    for (Eigen::Index t = 0; t < frames; ++t) out.effective.row(t) = pv.row(t).cwiseProduct(out.shared.transpose());
  } else {
    for (Eigen::Index t = 0; t < frames; ++t) {
      std::vector<ConeTerm> cones;
      node_cones(basis, ms.frames[t], cones);
      const auto r = minimize_max_norm(cones, {}, realify(Eigen::VectorXcd(ls.effective.row(t).transpose())), gap, 400);
      out.effective.row(t) = complexify(r.u).transpose();
    }
  }
  finish_fit(p, basis, out);
  return out.max_residual <= ls.max_residual ? out : ls;
}

RecoveryResult solve_l0(const RecoveryProblem& p) {
  if (p.max_sparsity < 0) throw DomainError("max_sparsity must be nonnegative");
  if (uses_patterns(p.illum_mode) && p.patterns.size() != p.measurements.frame_count())
    throw DomainError("pattern count differs from frame count");
  const double accept = p.tolerance() * (1.0 - 1e-9);
  const int dim = p.dim();
  RecoveryResult res;
  res.measure = DiscreteMeasure::empty(dim);

  {
    const auto empty = fit_support_ls(p, {}, p.illum_mode);
    if (empty.max_residual <= accept) {
      res.feasible = true;
      res.per_frame_residuals = empty.residuals;
      res.effective_amplitudes = empty.effective;
      return res;
    }
  }
  if (p.max_sparsity == 0) {
    res.sparsity = 1;
    return res;
  }

  const Screen screen(p, p.illum_mode);
  const double min_step = p.refine_step_tolerance * p.grid_pitch;
  std::vector<Candidate> beam;

  for (int k = 1; k <= p.max_sparsity; ++k) {
    const auto cap = static_cast<std::size_t>(std::max(p.refine_candidates, p.beam_width));
    std::vector<Candidate> best;
    if (k <= 3 && binomial(screen.grid.size(), k) <= p.exhaustive_limit) {
      enumerate(screen, k, cap, best);
    } else {
      if (beam.empty() && k > 1) {
        // previous level was also beam-searched from nothing: seed from its MP support
        auto mp = matching_pursuit(screen, k - 1);
        beam.push_back({screen.score(mp), mp});
      }
      if (k == 1) enumerate(screen, 1, cap, best);
      else beam_extend(screen, beam, k, cap, best);
      res.log.push_back("k=" + std::to_string(k) + ": beam search over " + std::to_string(beam.size()) +
                        " supports");
    }
    beam.assign(best.begin(), best.begin() + std::min(best.size(), static_cast<std::size_t>(p.beam_width)));

    struct Accepted {
      std::vector<Location> support;
      SupportFit fit;
    };
    std::vector<Accepted> feasible;
    const auto tries = std::min(best.size(), static_cast<std::size_t>(p.refine_candidates));
    for (std::size_t c = 0; c < tries; ++c) {
      std::vector<Location> start;
      for (int g : best[c].support) start.push_back(screen.grid[g]);
      const auto fit0 = fit_support_minimax(p, start, p.illum_mode);

      auto unpack = [&](const std::vector<double>& x) {
        std::vector<Location> s(k);
        for (int j = 0; j < k; ++j) s[j] = dim == 1 ? Location{x[j], 0.0} : Location{x[2 * j], x[2 * j + 1]};
        return s;
      };
      auto objective = [&](const std::vector<double>& x) {
        const auto s = unpack(x);
        for (int j = 0; j < k; ++j) {
          if (!inside_domain(p, s[j])) return kInf;
          for (int i = 0; i < j; ++i)
            if (s[i] == s[j]) return kInf;
        }
        const auto f = fit_support_ls(p, s, p.illum_mode);
        return f.ok ? f.sum_squares : kInf;
      };
      std::vector<double> x0;
      for (const auto& y : start) {
        x0.push_back(y.x);
        if (dim == 2) x0.push_back(y.y);
      }
      auto opt = hooke_jeeves(objective, x0, 0.5 * p.grid_pitch, min_step, p.refine_iterations);
      // axis probes crawl along curved valleys; a fresh full step usually gets out
      for (int r = 0; r < p.refine_restarts; ++r) {
        auto again = hooke_jeeves(objective, opt.x, 0.5 * p.grid_pitch, min_step, p.refine_iterations);
        again.evaluations += opt.evaluations;
        const bool done = !(opt.f - again.f >= 1e-10);
        opt = std::move(again);
        if (done) break;
      }
      auto end = unpack(opt.x);
      auto fit1 = fit_support_minimax(p, end, p.illum_mode);
      TraceEntry tr{k, start, end, fit0.ok ? fit0.max_residual : kInf, fit1.ok ? fit1.max_residual : kInf,
                    opt.evaluations};
      if (!fit1.ok || (fit0.ok && fit0.max_residual < fit1.max_residual)) {
        end = start;
        fit1 = fit0;
        tr.end = start;
        tr.residual_after = tr.residual_before;
      }
      res.refinement_trace.push_back(tr);
      if (!fit1.ok) {
        res.log.push_back("k=" + std::to_string(k) + ": support skipped, ill-conditioned amplitude fit");
        continue;
      }
      if (fit1.max_residual <= accept) feasible.push_back({end, fit1});
    }
    if (!feasible.empty()) {
      auto pick = std::min_element(feasible.begin(), feasible.end(), [](const Accepted& a, const Accepted& b) {
        if (a.fit.max_residual != b.fit.max_residual) return a.fit.max_residual < b.fit.max_residual;
        return less_lex(sorted_support(a.support), sorted_support(b.support));
      });
      // representative amplitude per atom: shared amplitude, or frame-0 effective value
      std::vector<Complex> amps(k);
      for (int j = 0; j < k; ++j) {
        Complex a = uses_patterns(p.illum_mode) ? pick->fit.shared[j] : pick->fit.effective(0, j);
        if (a == Complex(0.0, 0.0)) {
          for (Eigen::Index t = 0; t < pick->fit.effective.rows() && a == Complex(0.0, 0.0); ++t)
            a = pick->fit.effective(t, j);
          if (a == Complex(0.0, 0.0)) a = std::numeric_limits<double>::min();
        }
        amps[j] = a;
      }
      res.measure = DiscreteMeasure(dim, pick->support, amps);
      res.sparsity = k;
      res.per_frame_residuals = pick->fit.residuals;
      res.effective_amplitudes = pick->fit.effective;
      res.feasible = true;
      return res;
    }
  }
  res.sparsity = p.max_sparsity + 1;
  return res;
}

SupportMatching match_supports(const DiscreteMeasure& truth, const DiscreteMeasure& recovered, const Metric& metric) {
  const auto n = truth.size();
  if (recovered.size() != n) throw DomainError("match_supports: atom counts differ");
  SupportMatching out;
  if (n == 0) return out;
  const int dim = truth.dim();
  // Hungarian algorithm on the distance matrix (rows: truth, columns: recovered), 1-based potentials.
  std::vector<std::vector<double>> cost(n + 1, std::vector<double>(n + 1, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) cost[i + 1][j + 1] = distance(truth.location(i), recovered.location(j), metric, dim);
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> col_owner(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    col_owner[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = col_owner[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0][j] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[col_owner[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (col_owner[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      col_owner[j0] = col_owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  out.permutation.assign(n, 0);
  for (std::size_t j = 1; j <= n; ++j) out.permutation[col_owner[j] - 1] = j - 1;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = cost[i + 1][out.permutation[i] + 1];
    out.deviations.push_back(d);
    out.max_deviation = std::max(out.max_deviation, d);
  }
  return out;
}

Metric theorem_metric(TheoremMode mode, int n, double omega) {
  if (mode == TheoremMode::wrapped_1d) return WrappedMetric{n * std::numbers::pi / omega};
  return EuclideanMetric{};
}

Certificate certify_against_theorem(const DiscreteMeasure& truth, const DiscreteMeasure& recovered,
                                    const IlluminationMatrix& illum, double sigma, double omega, TheoremMode mode,
                                    double c0) {
  Certificate c;
  c.mode = mode;
  const int n = static_cast<int>(truth.size());
  if (n < 1) throw DomainError("certify_against_theorem: empty truth");
  if (illum.cols() != n) throw DomainError("certify_against_theorem: illumination matrix has wrong column count");
  if ((mode == TheoremMode::planar_2d) != (truth.dim() == 2))
    throw DomainError("certify_against_theorem: mode and measure dimension disagree");
  const Metric metric = theorem_metric(mode, n, omega);
  c.d_min = n >= 2 ? separation(truth, metric) : kInf;
  c.sigma_inf_min = sigma_inf_min(illum).value;
  const double m_min = truth.min_amplitude();
  const Bound thr = threshold(mode, n, omega, sigma, m_min, c.sigma_inf_min, c0);
  c.threshold = thr.value;
  if (thr.vacuous || c.d_min < thr.value) {
    c.vacuous = true;
    c.reason = thr.vacuous ? "noise-to-signal ratio exceeds one" : "separation below threshold";
    return c;
  }
  c.error_bound = n >= 2 ? location_error_bound(mode, n, omega, c.d_min, sigma, m_min, c.sigma_inf_min, c0).value : kInf;
  if (recovered.size() != truth.size()) {
    c.reason = "recovered " + std::to_string(recovered.size()) + " atoms, expected " + std::to_string(n);
    return c;
  }
  c.matching = match_supports(truth, recovered, metric);
  c.max_deviation = c.matching.max_deviation;
  c.slack = c.error_bound - c.max_deviation;
  c.holds = c.max_deviation < c.d_min / 2.0 && c.max_deviation <= c.error_bound;
  if (!c.holds) {
    std::ostringstream os;
    os << "max deviation " << c.max_deviation << " against d_min/2 = " << c.d_min / 2.0 << " and bound "
       << c.error_bound;
    c.reason = os.str();
  }
  return c;
}

std::vector<double> project_locations(const std::vector<Location>& locations, const Location& v) {
  std::vector<double> out;
  out.reserve(locations.size());
  for (const auto& y : locations) out.push_back(dot(y, v));
  return out;
}

RecoveryProblem project_problem_1d(const RecoveryProblem& problem, const Location& v, const FrequencyGrid& line,
                                   const FrameEvaluator& evaluate) {
  if (problem.dim() != 2) throw DomainError("project_problem_1d needs a 2D problem");
  if (std::abs(norm(v) - 1.0) > 1e-12) throw DomainError("project_problem_1d: direction must be a unit vector");
  if (line.dim != 1) throw DomainError("project_problem_1d: target grid must be 1D");
  const auto& ms = problem.measurements;
  const auto planar = FrequencyGrid::along(line, v);
  std::vector<std::size_t> index;
  const double tol = 1e-12 * ms.grid.omega;
  for (const auto& w : planar.nodes) {
    auto it = std::find_if(ms.grid.nodes.begin(), ms.grid.nodes.end(),
                           [&](const Location& u) { return norm(u - w) <= tol; });
    if (it == ms.grid.nodes.end()) break;
    index.push_back(static_cast<std::size_t>(it - ms.grid.nodes.begin()));
  }
  RecoveryProblem out;
  out.measurements.grid = line;
  out.measurements.sigma = ms.sigma;
  out.measurements.mode = ms.mode;
  if (index.size() == planar.size()) {
    for (const auto& f : ms.frames) {
      Eigen::VectorXcd g(index.size());
      for (std::size_t l = 0; l < index.size(); ++l) g[l] = f[index[l]];
      out.measurements.frames.push_back(g);
    }
  } else if (evaluate) {
    for (std::size_t t = 0; t < ms.frame_count(); ++t) out.measurements.frames.push_back(evaluate(t, planar));
  } else {
    throw DomainError("project_problem_1d: nodes along the direction are not in the grid and cannot be re-evaluated");
  }
  out.illum_mode = IlluminationMode::unknown;
  out.sigma = problem.sigma;
  const double c = dot(problem.disk.center, v);
  out.interval = {c - problem.disk.radius, c + problem.disk.radius};
  out.grid_pitch = problem.grid_pitch;
  out.max_sparsity = problem.max_sparsity;
  out.beam_width = problem.beam_width;
  out.refine_candidates = problem.refine_candidates;
  out.exhaustive_limit = problem.exhaustive_limit;
  out.refine_step_tolerance = problem.refine_step_tolerance;
  out.refine_iterations = problem.refine_iterations;
  out.refine_restarts = problem.refine_restarts;
  return out;
}

}  // namespace msr
