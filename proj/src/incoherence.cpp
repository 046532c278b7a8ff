#include "msr/incoherence.hpp"

#include <cmath>
#include <limits>

#include "msr/errors.hpp"
#include "msr/measure.hpp"
#include "msr/minmax_solver.hpp"

namespace msr {

std::string to_string(IncoherenceMethod m) {
  switch (m) {
    case IncoherenceMethod::closed_form_2x2: return "closed-form-2x2";
    case IncoherenceMethod::convex_subproblems: return "convex-subproblems";
    case IncoherenceMethod::random_oracle: return "random-oracle";
  }
  return "unknown";
}

double svd_lower_bound(const Eigen::MatrixXcd& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
  const auto& sv = svd.singularValues();
  // fewer rows than columns: some direction is annihilated
  const double smin = a.rows() < a.cols() ? 0.0 : sv[sv.size() - 1];
  return smin / std::sqrt(static_cast<double>(a.rows()));
}

double sigma_inf_min_2x2(double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw DomainError("sigma_inf_min_2x2: s must lie in [0, 1]");
  return 1.0 - s;
}

namespace {

// Subproblem with x_j fixed to 1 and |x_i| <= 1 otherwise; unknowns are
// (re, im) pairs of the free coordinates.
MinMaxResult solve_pinned(const Eigen::MatrixXcd& a, Eigen::Index j, double gap) {
  const Eigen::Index k = a.cols();
  const Eigen::Index m = 2 * (k - 1);
  std::vector<ConeTerm> rows, balls;
  for (Eigen::Index t = 0; t < a.rows(); ++t) {
    ConeTerm c{Eigen::MatrixXd::Zero(2, m), Eigen::VectorXd(2)};
    c.b << a(t, j).real(), a(t, j).imag();
    Eigen::Index col = 0;
    for (Eigen::Index i = 0; i < k; ++i) {
      if (i == j) continue;
      const auto v = a(t, i);
      c.a(0, col) = v.real();
      c.a(0, col + 1) = -v.imag();
      c.a(1, col) = v.imag();
      c.a(1, col + 1) = v.real();
      col += 2;
    }
    rows.push_back(std::move(c));
  }
  for (Eigen::Index col = 0; col < m; col += 2) {
    ConeTerm c{Eigen::MatrixXd::Zero(2, m), Eigen::VectorXd::Zero(2)};
    c.a(0, col) = 1.0;
    c.a(1, col + 1) = 1.0;
    balls.push_back(std::move(c));
  }
  return minimize_max_norm(rows, balls, Eigen::VectorXd::Zero(m), gap, 4000);
}

}  // namespace

IncoherenceReport sigma_inf_min(const Eigen::MatrixXcd& a, double tol) {
  if (a.rows() < 1 || a.cols() < 1) throw DomainError("sigma_inf_min: empty matrix");
  if (!(tol > 0.0)) throw DomainError("sigma_inf_min: tol must be positive");
  if (!a.allFinite()) throw DomainError("sigma_inf_min: non-finite entries");
  IncoherenceReport rep;
  rep.lower_bound_svd = svd_lower_bound(a);
  const Eigen::Index k = a.cols();
  if (k == 1) {
    rep.value = a.col(0).cwiseAbs().maxCoeff();
    rep.argmin = Eigen::VectorXcd::Ones(1);
    return rep;
  }
  rep.value = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < k; ++j) {
    const auto sub = solve_pinned(a, j, 1e-2 * tol);
    if (!sub.converged) rep.converged = false;
    Eigen::VectorXcd x(k);
    Eigen::Index col = 0;
    for (Eigen::Index i = 0; i < k; ++i) {
      if (i == j) {
        x[i] = 1.0;
        continue;
      }
      Complex v(sub.u[col], sub.u[col + 1]);
      if (std::abs(v) > 1.0) v /= std::abs(v);
      x[i] = v;
      col += 2;
    }
    const double val = (a * x).cwiseAbs().maxCoeff();
    if (val < rep.value) {
      rep.value = val;
      rep.argmin = x;
    }
  }
  return rep;
}

bool duplicate_row_invariance_check(const Eigen::MatrixXcd& a, double tol) {
  Eigen::MatrixXcd dup(a.rows() + 1, a.cols());
  dup.topRows(a.rows()) = a;
  dup.row(a.rows()) = a.row(a.rows() - 1);
  return std::abs(sigma_inf_min(dup, tol).value - sigma_inf_min(a, tol).value) <= 2.0 * tol;
}

}  // namespace msr
