#pragma once

// Independent reference computations for the unit tests. Nothing here calls
// into the library's numerical routines.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using cld = std::complex<long double>;
using cd = std::complex<double>;

struct Pt {
  double x = 0.0, y = 0.0;
};

// sum_j w_j a_j exp(i y_j . omega), accumulated term by term in long double
inline std::vector<cd> nudft(const std::vector<Pt>& locs, const std::vector<cd>& weighted,
                             const std::vector<Pt>& nodes) {
  std::vector<cd> out;
  for (const auto& w : nodes) {
    long double re = 0.0L, im = 0.0L;
    for (std::size_t j = 0; j < locs.size(); ++j) {
      const long double ph = static_cast<long double>(locs[j].x) * w.x + static_cast<long double>(locs[j].y) * w.y;
      const long double c = std::cos(ph), s = std::sin(ph);
      re += weighted[j].real() * c - weighted[j].imag() * s;
      im += weighted[j].real() * s + weighted[j].imag() * c;
    }
    out.emplace_back(static_cast<double>(re), static_cast<double>(im));
  }
  return out;
}

inline double min_pairwise(const std::vector<double>& xs, double period = 0.0) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < xs.size(); ++j) {
      if (i == j) continue;
      double d = std::abs(xs[i] - xs[j]);
      if (period > 0.0) {
        d = std::fmod(d, period);
        d = std::min(d, period - d);
      }
      m = std::min(m, d);
    }
  return m;
}

inline double sup_norm(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& x) {
  double m = 0.0;
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    cd s = 0.0;
    for (Eigen::Index c = 0; c < a.cols(); ++c) s += a(r, c) * x[c];
    m = std::max(m, std::abs(s));
  }
  return m;
}

// min ||Ax||_inf over ||x||_inf = 1: dense polar grid over the free
// coordinates with one pinned to 1, then shrinking pattern search.
inline double sigma_inf_min(const Eigen::MatrixXcd& a, int radii = 12, int angles = 36) {
  const auto k = a.cols();
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index pin = 0; pin < k; ++pin) {
    std::vector<Eigen::Index> free;
    for (Eigen::Index j = 0; j < k; ++j)
      if (j != pin) free.push_back(j);
    const std::size_t nf = free.size();
    // with one coordinate pinned to 1 the objective is convex in the others
    auto value_at = [&](const std::vector<std::complex<double>>& z) {
      Eigen::VectorXcd x = Eigen::VectorXcd::Zero(k);
      x[pin] = 1.0;
      for (std::size_t f = 0; f < nf; ++f) x[free[f]] = std::abs(z[f]) > 1.0 ? z[f] / std::abs(z[f]) : z[f];
      return sup_norm(a, x);
    };
    const int per = radii * angles + 1;
    long total = 1;
    for (std::size_t f = 0; f < nf; ++f) total *= per;
    std::vector<std::complex<double>> z(nf), bz(nf);
    double local = std::numeric_limits<double>::infinity();
    for (long idx = 0; idx < total; ++idx) {
      long rest = idx;
      for (std::size_t f = 0; f < nf; ++f) {
        const int cell = static_cast<int>(rest % per);
        rest /= per;
        z[f] = cell == 0 ? std::complex<double>(0.0)
                         : std::polar(static_cast<double>((cell - 1) / angles + 1) / radii,
                                      2.0 * std::numbers::pi * ((cell - 1) % angles) / angles);
      }
      const double v = value_at(z);
      if (v < local) {
        local = v;
        bz = z;
      }
    }
    // zoom: randomly rotated local grid with m points per real dimension,
    // shrink after several rotations fail to improve (valleys of the max are not axis aligned)
    const int m = nf == 1 ? 9 : 5;
    const int dims = static_cast<int>(2 * nf);
    long cells = 1;
    for (int d = 0; d < dims; ++d) cells *= m;
    std::mt19937_64 rng(12345);
    std::normal_distribution<double> g(0.0, 1.0);
    double h = 2.0 / radii;
    int fails = 0;
    while (h > 1e-11) {
      Eigen::MatrixXd rot(dims, dims);
      for (int r = 0; r < dims; ++r)
        for (int c = 0; c < dims; ++c) rot(r, c) = g(rng);
      rot = Eigen::HouseholderQR<Eigen::MatrixXd>(rot).householderQ();
      const std::vector<std::complex<double>> cz = bz;
      bool moved = false;
      Eigen::VectorXd off(dims);
      for (long idx = 0; idx < cells; ++idx) {
        long rest = idx;
        for (int d = 0; d < dims; ++d) {
          off[d] = (static_cast<int>(rest % m) - (m - 1) / 2) * 2.0 * h / (m - 1);
          rest /= m;
        }
        const Eigen::VectorXd step = rot * off;
        for (std::size_t f = 0; f < nf; ++f) {
          z[f] = cz[f] + std::complex<double>(step[2 * f], step[2 * f + 1]);
          if (std::abs(z[f]) > 1.0) z[f] /= std::abs(z[f]);
        }
        const double v = value_at(z);
        if (v < local - 1e-15) {
          local = v;
          bz = z;
          moved = true;
        }
      }
      if (moved) {
        fails = 0;
      } else if (++fails >= 24) {
        h *= 0.5;
        fails = 0;
      }
    }
    best = std::min(best, local);
  }
  return best;
}

// cardinal row from solving V^T c = phi(t) with V(q, j) = t_j^q, in long double
inline std::vector<double> lagrange(const std::vector<double>& nodes, double t) {
  const int k = static_cast<int>(nodes.size());
  using M = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  using V = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  M vt(k, k);
  V rhs(k);
  for (int q = 0; q < k; ++q) {
    for (int j = 0; j < k; ++j) vt(q, j) = std::pow(static_cast<long double>(nodes[j]), q);
    rhs[q] = std::pow(static_cast<long double>(t), q);
  }
  const V c = vt.fullPivLu().solve(rhs);
  return std::vector<double>(c.data(), c.data() + k);
}

inline Eigen::VectorXcd phi(int s, cd z) {
  Eigen::VectorXcd v(s + 1);
  cld p = 1.0L;
  for (int i = 0; i <= s; ++i) {
    v[i] = cd(static_cast<double>(p.real()), static_cast<double>(p.imag()));
    p *= cld(z.real(), z.imag());
  }
  return v;
}

// least-squares distance from phi_k(e^{i theta}) to span of phi_k(e^{i theta_hat_j}) via SVD
inline double projection_distance(const std::vector<double>& hat, double theta) {
  const int k = static_cast<int>(hat.size());
  Eigen::MatrixXcd a(k + 1, k);
  for (int j = 0; j < k; ++j) a.col(j) = phi(k, std::polar(1.0, hat[j]));
  const Eigen::VectorXcd b = phi(k, std::polar(1.0, theta));
  const Eigen::VectorXcd x = a.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(b);
  return (a * x - b).norm();
}

inline double eta_inf(const std::vector<double>& theta, const std::vector<double>& hat) {
  double m = 0.0;
  for (double t : theta) {
    long double p = 1.0L;
    for (double h : hat) p *= std::abs(std::polar(1.0L, static_cast<long double>(t)) - std::polar(1.0L, static_cast<long double>(h)));
    m = std::max(m, static_cast<double>(p));
  }
  return m;
}

inline double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

inline double xi(int k) {
  if (k == 1) return 0.5;
  if (k % 2) return factorial((k - 1) / 2) * factorial((k - 3) / 2) / 4.0;
  const double f = factorial((k - 2) / 2);
  return f * f / 4.0;
}

inline double lambda(int k) { return k == 2 ? 1.0 : xi(k - 2); }

}  // namespace oracle
