#pragma once

#include <Eigen/Dense>
#include <vector>

namespace msr {

/// ||A u + b||_2 as an affine second-order cone term.
struct ConeTerm {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
};

struct MinMaxResult {
  Eigen::VectorXd u;
  double value = 0.0;  // max_i ||A_i u + b_i|| at u
  double gap = 0.0;    // duality gap bound at exit
  int newton_steps = 0;
  bool converged = false;
};

/// minimize max_i ||A_i u + b_i||_2 subject to ||G_j u + h_j||_2 <= 1,
/// by a primal log-barrier method with damped Newton steps.
/// `start` must satisfy the ball constraints strictly.
MinMaxResult minimize_max_norm(const std::vector<ConeTerm>& objective, const std::vector<ConeTerm>& balls,
                               const Eigen::VectorXd& start, double target_gap, int max_newton = 2000);

}  // namespace msr
