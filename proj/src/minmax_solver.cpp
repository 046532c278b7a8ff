#include "msr/minmax_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "msr/errors.hpp"

namespace msr {

namespace {

struct Barrier {
  const std::vector<ConeTerm>& obj;
  const std::vector<ConeTerm>& balls;
  Eigen::Index m;

  // Value of tau*s + barrier terms; +inf outside the interior.
  double value(const Eigen::VectorXd& z, double tau) const {
    const double s = z[m];
    double f = tau * s;
    for (const auto& c : obj) {
      const double g = s * s - (c.a * z.head(m) + c.b).squaredNorm();
      if (!(g > 0.0) || s <= 0.0) return std::numeric_limits<double>::infinity();
      f -= std::log(g);
    }
    for (const auto& c : balls) {
      const double g = 1.0 - (c.a * z.head(m) + c.b).squaredNorm();
      if (!(g > 0.0)) return std::numeric_limits<double>::infinity();
      f -= std::log(g);
    }
    return f;
  }

  void derivatives(const Eigen::VectorXd& z, double tau, Eigen::VectorXd& grad, Eigen::MatrixXd& hess) const {
    const Eigen::Index n = m + 1;
    const double s = z[m];
    grad = Eigen::VectorXd::Zero(n);
    hess = Eigen::MatrixXd::Zero(n, n);
    grad[m] = tau;
    Eigen::VectorXd dg(n);
    auto add = [&](const ConeTerm& c, bool cone) {
      const Eigen::VectorXd r = c.a * z.head(m) + c.b;
      const double g = (cone ? s * s : 1.0) - r.squaredNorm();
      dg.head(m) = -2.0 * c.a.transpose() * r;
      dg[m] = cone ? 2.0 * s : 0.0;
      grad -= dg / g;
      hess += dg * dg.transpose() / (g * g);
      hess.topLeftCorner(m, m) += 2.0 * c.a.transpose() * c.a / g;
      if (cone) hess(m, m) -= 2.0 / g;
    };
    for (const auto& c : obj) add(c, true);
    for (const auto& c : balls) add(c, false);
  }
};

}  // namespace

MinMaxResult minimize_max_norm(const std::vector<ConeTerm>& objective, const std::vector<ConeTerm>& balls,
                               const Eigen::VectorXd& start, double target_gap, int max_newton) {
  if (objective.empty()) throw DomainError("minimize_max_norm: empty objective");
  if (!(target_gap > 0.0)) throw DomainError("minimize_max_norm: target gap must be positive");
  const Eigen::Index m = start.size();
  for (const auto& c : objective)
    if (c.a.cols() != m || c.a.rows() != c.b.size()) throw DomainError("minimize_max_norm: cone shape mismatch");
  for (const auto& c : balls) {
    if (c.a.cols() != m || c.a.rows() != c.b.size()) throw DomainError("minimize_max_norm: ball shape mismatch");
    if ((c.a * start + c.b).squaredNorm() >= 1.0) throw DomainError("minimize_max_norm: start is not interior");
  }

  auto max_norm = [&](const Eigen::VectorXd& u) {
    double v = 0.0;
    for (const auto& c : objective) v = std::max(v, (c.a * u + c.b).norm());
    return v;
  };

  Barrier bar{objective, balls, m};
  Eigen::VectorXd z(m + 1);
  z.head(m) = start;
  const double v0 = max_norm(start);
  const double scale = std::max(v0, 1e-300);
  z[m] = 1.5 * v0 + 1e-3 * scale + 1e-12;

  const double cones = static_cast<double>(objective.size() + balls.size());
  double tau = cones / std::max(z[m], 1e-12);
  MinMaxResult res;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
  while (true) {
    // centering
    for (int it = 0; it < 200 && res.newton_steps < max_newton; ++it) {
      bar.derivatives(z, tau, grad, hess);
      Eigen::VectorXd dz = hess.ldlt().solve(-grad);
      if (!dz.allFinite()) dz = -grad;
      const double dec = -grad.dot(dz);
      ++res.newton_steps;
      if (dec < 0.0) {
        dz = -grad;
      } else if (dec / 2.0 < 1e-11) {
        break;
      }
      const double f0 = bar.value(z, tau);
      const double slope = grad.dot(dz);
      double step = 1.0;
      bool moved = false;
      for (int ls = 0; ls < 80; ++ls) {
        Eigen::VectorXd trial = z + step * dz;
        const double f1 = bar.value(trial, tau);
        if (std::isfinite(f1) && f1 <= f0 + 0.25 * step * slope) {
          z = trial;
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;
    }
    res.gap = 2.0 * cones / tau;
    if (res.gap < target_gap) {
      res.converged = true;
      break;
    }
    if (res.newton_steps >= max_newton) break;
    tau *= 8.0;
  }
  res.u = z.head(m);
  res.value = max_norm(res.u);
  return res;
}

}  // namespace msr
