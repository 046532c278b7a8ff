#pragma once

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace msr {

using Rational = boost::rational<boost::multiprecision::cpp_int>;

/// (1, z, ..., z^s)
Eigen::VectorXcd phi(int s, std::complex<double> z);

/// component j: prod_m |z_j - zhat_m|
Eigen::VectorXd eta(std::span<const std::complex<double>> z, std::span<const std::complex<double>> zhat);

/// eta of the unit-circle points e^{i theta}, e^{i theta_hat}
Eigen::VectorXd eta_angles(std::span<const double> theta, std::span<const double> theta_hat);

Rational zeta(int k);
Rational xi(int k);
Rational lambda(int k);
double to_double(const Rational& r);

/// min_{p != j} |theta_p - theta_j|_{2pi}
double theta_min(std::span<const double> theta);

/// Columns phi_s(e^{i theta_j}).
Eigen::MatrixXcd vandermonde_matrix(int s, std::span<const double> theta);

/// Unit vector orthogonal to the k columns phi_k(e^{i theta_hat_j}) in C^{k+1}.
/// Throws RankDeficiencyError when the columns do not span k dimensions.
Eigen::VectorXcd complement_vector(std::span<const double> theta_hat);

/// min_a || A_hat a - phi_k(e^{i theta}) ||_2, with k = theta_hat.size().
double projection_distance(std::span<const double> theta_hat, double theta);

/// min_a || A_hat a - target ||_2 for a target in C^{k+1}; A_hat has
/// columns phi_k(e^{i theta_hat_j}) for q <= k nodes.
double approximation_residual(std::span<const double> theta_hat, int k, const Eigen::VectorXcd& target);

/// sigma_inf_min(B) xi(k) theta_min^k / pi^k for k + 1 nodes.
double worst_case_approx_lower_bound(std::span<const double> theta, const Eigen::MatrixXcd& b);

struct EtaBoundReport {
  int k = 0;
  double theta_min = 0.0;
  double bound = 0.0;      // xi(k) (2 theta_min / pi)^k
  double min_found = 0.0;  // smallest ||eta||_inf over all starts
  int starts = 0;
  int violations = 0;
};

/// Multi-start minimization of ||eta_{k+1,k}(e^{i theta}, e^{i theta_hat})||_inf
/// over theta_hat; `trials` random starts plus one interlaced start.
EtaBoundReport eta_lower_bound_check(std::span<const double> theta, int trials, std::uint64_t seed);

struct MatchingReport {
  std::vector<std::size_t> match;  // theta_hat index assigned to theta_j
  std::vector<double> deviations;  // |theta_hat - theta_j|_{2pi}
  double theta_min = 0.0;
  double eta_inf = 0.0;
  double half_bound = 0.0;       // theta_min / 2
  double quantitative_bound = 0.0;  // 2^{k-1} eps / ((k-2)! theta_min^{k-1}); 0 when k = 2
  bool quantitative_checked = false;
};

/// Checks the hypotheses on eta and theta_min, then certifies that each
/// theta_hat sits within theta_min/2 of a distinct theta (and, for k >= 3,
/// within the quantitative bound).
MatchingReport stability_inversion(std::span<const double> theta, std::span<const double> theta_hat, double eps);

/// |(1 - e^{i(p-d)})(1 - e^{i(q+d)})| < |(1 - e^{ip})(1 - e^{iq})|
bool pair_perturbation_decreases(double p, double q, double delta);

struct ApproxCertificate {
  double max_residual = 0.0;  // max_t min ||A_hat a - A alpha_t||
  double eta_inf = 0.0;
  double bound = 0.0;         // 2^k sigma / sigma_inf_min(B)
  bool hypothesis = false;    // max_residual < sigma
  bool holds = true;          // !hypothesis || eta_inf < bound
};

/// k nodes theta, k candidates theta_hat, B(t, j) = a_{j,t}.
ApproxCertificate approx_eta_certificate(std::span<const double> theta, std::span<const double> theta_hat,
                                         const Eigen::MatrixXcd& b, double sigma);

}  // namespace msr
