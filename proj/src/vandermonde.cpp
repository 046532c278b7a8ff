#include "msr/vandermonde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "msr/errors.hpp"
#include "msr/incoherence.hpp"
#include "msr/measure.hpp"
#include "msr/optimize.hpp"

namespace msr {

using boost::multiprecision::cpp_int;

Eigen::VectorXcd phi(int s, std::complex<double> z) {
  if (s < 0) throw DomainError("phi: degree must be nonnegative");
  Eigen::VectorXcd v(s + 1);
  v[0] = 1.0;
  for (int i = 1; i <= s; ++i) v[i] = v[i - 1] * z;
  return v;
}

Eigen::VectorXd eta(std::span<const std::complex<double>> z, std::span<const std::complex<double>> zhat) {
  if (z.empty() || zhat.empty()) throw DomainError("eta: empty input");
  Eigen::VectorXd out(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) {
    double p = 1.0;
    for (const auto& w : zhat) p *= std::abs(z[j] - w);
    out[j] = p;
  }
  return out;
}

Eigen::VectorXd eta_angles(std::span<const double> theta, std::span<const double> theta_hat) {
  if (theta.empty() || theta_hat.empty()) throw DomainError("eta: empty input");
  Eigen::VectorXd out(theta.size());
  for (std::size_t j = 0; j < theta.size(); ++j) {
    double p = 1.0;
    // |e^{ia} - e^{ib}| = 2|sin((a-b)/2)|
    for (double th : theta_hat) p *= 2.0 * std::abs(std::sin(0.5 * (theta[j] - th)));
    out[j] = p;
  }
  return out;
}

namespace {

cpp_int factorial(int n) {
  cpp_int f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

Rational zeta(int k) {
  if (k < 1) throw DomainError("zeta: k must be >= 1");
  if (k % 2 == 1) {
    const cpp_int f = factorial((k - 1) / 2);
    return Rational(f * f);
  }
  return Rational(factorial(k / 2) * factorial((k - 2) / 2));
}

Rational xi(int k) {
  if (k < 1) throw DomainError("xi: k must be >= 1");
  if (k == 1) return Rational(1, 2);
  if (k % 2 == 1) return Rational(factorial((k - 1) / 2) * factorial((k - 3) / 2), 4);
  const cpp_int f = factorial((k - 2) / 2);
  return Rational(f * f, 4);
}

Rational lambda(int k) {
  if (k < 2) throw DomainError("lambda: k must be >= 2");
  return k == 2 ? Rational(1) : xi(k - 2);
}

double to_double(const Rational& r) {
  return static_cast<double>(r.numerator().convert_to<long double>() / r.denominator().convert_to<long double>());
}

double theta_min(std::span<const double> theta) {
  if (theta.size() < 2) throw DomainError("theta_min needs at least two nodes");
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < theta.size(); ++p)
    for (std::size_t j = p + 1; j < theta.size(); ++j)
      m = std::min(m, wrapped_distance(theta[p], theta[j], 2.0 * std::numbers::pi));
  return m;
}

Eigen::MatrixXcd vandermonde_matrix(int s, std::span<const double> theta) {
  Eigen::MatrixXcd a(s + 1, theta.size());
  for (std::size_t j = 0; j < theta.size(); ++j) a.col(j) = phi(s, std::polar(1.0, theta[j]));
  return a;
}

namespace {

void check_distinct(std::span<const double> nodes, const char* what) {
  for (std::size_t p = 0; p < nodes.size(); ++p)
    for (std::size_t j = p + 1; j < nodes.size(); ++j)
      if (wrapped_distance(nodes[p], nodes[j], 2.0 * std::numbers::pi) == 0.0)
        throw RankDeficiencyError(std::string(what) + ": nodes coincide modulo 2pi");
}

// Modified Gram-Schmidt with one re-orthogonalization pass.
void orthogonalize(Eigen::VectorXcd& v, const std::vector<Eigen::VectorXcd>& basis) {
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& q : basis) v -= q.dot(v) * q;
}

}  // namespace

Eigen::VectorXcd complement_vector(std::span<const double> theta_hat) {
  const int k = static_cast<int>(theta_hat.size());
  if (k < 1) throw DomainError("complement_vector needs at least one node");
  check_distinct(theta_hat, "complement_vector");
  std::vector<Eigen::VectorXcd> basis;
  for (double th : theta_hat) {
    Eigen::VectorXcd v = phi(k, std::polar(1.0, th));
    const double n0 = v.norm();
    orthogonalize(v, basis);
    const double n1 = v.norm();
    if (!(n1 > 1e-14 * n0)) throw RankDeficiencyError("complement_vector: columns are numerically dependent");
    basis.push_back(v / n1);
  }
  // a fixed pseudo-random start keeps results reproducible
  std::mt19937_64 rng(0x5eedULL + k);
  std::normal_distribution<double> g;
  for (int attempt = 0; attempt < 8; ++attempt) {
    Eigen::VectorXcd v(k + 1);
    for (int i = 0; i <= k; ++i) v[i] = {g(rng), g(rng)};
    const double n0 = v.norm();
    orthogonalize(v, basis);
    const double n1 = v.norm();
    if (n1 > 1e-3 * n0) return v / n1;
  }
  throw RankDeficiencyError("complement_vector: failed to complement the span");
}

double projection_distance(std::span<const double> theta_hat, double theta) {
  const auto v = complement_vector(theta_hat);
  return std::abs(v.dot(phi(static_cast<int>(theta_hat.size()), std::polar(1.0, theta))));
}

double approximation_residual(std::span<const double> theta_hat, int k, const Eigen::VectorXcd& target) {
  if (target.size() != k + 1) throw DomainError("approximation_residual: target length must be k + 1");
  if (theta_hat.empty()) return target.norm();
  const auto a = vandermonde_matrix(k, theta_hat);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(a);
  return (a * qr.solve(target) - target).norm();
}

double worst_case_approx_lower_bound(std::span<const double> theta, const Eigen::MatrixXcd& b) {
  const int k = static_cast<int>(theta.size()) - 1;
  if (k < 1) throw DomainError("worst_case_approx_lower_bound needs at least two nodes");
  if (b.cols() != k + 1) throw DomainError("worst_case_approx_lower_bound: B must have k + 1 columns");
  const double tm = theta_min(theta);
  if (tm == 0.0) throw DomainError("worst_case_approx_lower_bound: nodes coincide modulo 2pi");
  return sigma_inf_min(b).value * to_double(xi(k)) * std::pow(tm / std::numbers::pi, k);
}

EtaBoundReport eta_lower_bound_check(std::span<const double> theta, int trials, std::uint64_t seed) {
  const int k = static_cast<int>(theta.size()) - 1;
  if (k < 1) throw DomainError("eta_lower_bound_check needs at least two nodes");
  EtaBoundReport rep;
  rep.k = k;
  rep.theta_min = theta_min(theta);
  if (rep.theta_min == 0.0) throw DomainError("eta_lower_bound_check: nodes coincide modulo 2pi");
  rep.bound = to_double(xi(k)) * std::pow(2.0 * rep.theta_min / std::numbers::pi, k);
  rep.min_found = std::numeric_limits<double>::infinity();

  const std::vector<double> th(theta.begin(), theta.end());
  auto objective = [&](const std::vector<double>& x) { return eta_angles(th, x).maxCoeff(); };
  auto run = [&](std::vector<double> x0) {
    const auto r = nelder_mead(objective, std::move(x0), 0.3, 1e-14, 400 * (k + 1));
    ++rep.starts;
    rep.min_found = std::min(rep.min_found, r.f);
    if (r.f < rep.bound) ++rep.violations;
  };

  // interlaced: one candidate between consecutive sorted nodes
  auto sorted = th;
  for (auto& s : sorted) s = std::fmod(std::fmod(s, 2.0 * std::numbers::pi) + 2.0 * std::numbers::pi, 2.0 * std::numbers::pi);
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> inter;
  for (int j = 0; j < k; ++j) inter.push_back(0.5 * (sorted[j] + sorted[j + 1]));
  run(inter);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 2.0 * std::numbers::pi);
  for (int t = 0; t < trials; ++t) {
    std::vector<double> x0(k);
    for (auto& x : x0) x = unit(rng);
    run(std::move(x0));
  }
  return rep;
}

MatchingReport stability_inversion(std::span<const double> theta, std::span<const double> theta_hat, double eps) {
  const int k = static_cast<int>(theta.size());
  if (k < 2 || theta_hat.size() != theta.size())
    throw DomainError("stability_inversion needs k >= 2 nodes and as many candidates");
  if (!(eps > 0.0)) throw DomainError("stability_inversion: eps must be positive");
  MatchingReport rep;
  rep.theta_min = theta_min(theta);
  rep.eta_inf = eta_angles(theta, theta_hat).maxCoeff();
  const double eta_limit = std::pow(2.0 / std::numbers::pi, k) * eps;
  if (!(rep.eta_inf < eta_limit))
    throw PreconditionError("||eta_{k,k}||_inf < (2/pi)^k eps fails: " + std::to_string(rep.eta_inf) +
                            " >= " + std::to_string(eta_limit));
  const double sep_limit = std::pow(4.0 * eps / to_double(lambda(k)), 1.0 / k);
  if (!(rep.theta_min >= sep_limit))
    throw PreconditionError("theta_min >= (4 eps / lambda(k))^{1/k} fails: " + std::to_string(rep.theta_min) +
                            " < " + std::to_string(sep_limit));
  rep.half_bound = rep.theta_min / 2.0;
  const double two_pi = 2.0 * std::numbers::pi;
  rep.match.assign(k, 0);
  rep.deviations.assign(k, 0.0);
  std::vector<int> used(k, 0);
  for (int j = 0; j < k; ++j) {
    int hits = 0;
    for (int m = 0; m < k; ++m) {
      const double d = wrapped_distance(theta_hat[m], theta[j], two_pi);
      if (d < rep.half_bound) {
        ++hits;
        rep.match[j] = m;
        rep.deviations[j] = d;
      }
    }
    if (hits != 1)
      throw CertificationError("stability_inversion: node " + std::to_string(j) + " has " + std::to_string(hits) +
                               " candidates within theta_min/2");
    ++used[rep.match[j]];
  }
  for (int m = 0; m < k; ++m)
    if (used[m] != 1) throw CertificationError("stability_inversion: matching is not a bijection");
  if (k >= 3) {
    double fact = 1.0;
    for (int i = 2; i <= k - 2; ++i) fact *= i;
    rep.quantitative_bound = std::pow(2.0, k - 1) * eps / (fact * std::pow(rep.theta_min, k - 1));
    rep.quantitative_checked = true;
    for (int j = 0; j < k; ++j)
      if (!(rep.deviations[j] < rep.quantitative_bound))
        throw CertificationError("stability_inversion: deviation " + std::to_string(rep.deviations[j]) +
                                 " exceeds the quantitative bound " + std::to_string(rep.quantitative_bound));
  }
  return rep;
}

bool pair_perturbation_decreases(double p, double q, double delta) {
  if (!(0.0 < p && p <= q && q < std::min(p + std::numbers::pi, 2.0 * std::numbers::pi)))
    throw DomainError("pair_perturbation_decreases: need 0 < p <= q < min(p + pi, 2pi)");
  if (delta < 0.0) throw DomainError("pair_perturbation_decreases: delta must be nonnegative");
  auto chord = [](double x) { return 2.0 * std::abs(std::sin(0.5 * x)); };
  return chord(p - delta) * chord(q + delta) < chord(p) * chord(q);
}

ApproxCertificate approx_eta_certificate(std::span<const double> theta, std::span<const double> theta_hat,
                                         const Eigen::MatrixXcd& b, double sigma) {
  const int k = static_cast<int>(theta.size());
  if (k < 2 || theta_hat.size() != theta.size() || b.cols() != k)
    throw DomainError("approx_eta_certificate: shape mismatch");
  ApproxCertificate c;
  const auto a = vandermonde_matrix(k, theta);
  for (Eigen::Index t = 0; t < b.rows(); ++t) {
    Eigen::VectorXcd target = a * b.row(t).transpose();
    c.max_residual = std::max(c.max_residual, approximation_residual(theta_hat, k, target));
  }
  c.eta_inf = eta_angles(theta, theta_hat).maxCoeff();
  c.bound = std::pow(2.0, k) * sigma / sigma_inf_min(b).value;
  c.hypothesis = c.max_residual < sigma;
  c.holds = !c.hypothesis || c.eta_inf < c.bound;
  return c;
}

}  // namespace msr
