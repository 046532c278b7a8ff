#pragma once

#include <Eigen/Dense>
#include <string>

namespace msr {

enum class IncoherenceMethod { closed_form_2x2, convex_subproblems, random_oracle };

std::string to_string(IncoherenceMethod m);

struct IncoherenceReport {
  double value = 0.0;
  Eigen::VectorXcd argmin;  // ||argmin||_inf = 1
  double lower_bound_svd = 0.0;
  IncoherenceMethod method = IncoherenceMethod::convex_subproblems;
  bool converged = true;  // false: budget exhausted, value is the best found
};

/// min_{||x||_inf >= 1} ||A x||_inf over complex x, to absolute accuracy tol.
IncoherenceReport sigma_inf_min(const Eigen::MatrixXcd& a, double tol = 1e-6);

/// 1 - s, the value for [[1, s], [s, 1]].
double sigma_inf_min_2x2(double s);

/// sigma_min(A) / sqrt(T)
double svd_lower_bound(const Eigen::MatrixXcd& a);

/// Whether repeating the last row leaves the value unchanged within 2 tol.
bool duplicate_row_invariance_check(const Eigen::MatrixXcd& a, double tol = 1e-6);

}  // namespace msr
