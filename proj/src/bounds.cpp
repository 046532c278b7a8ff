#include "msr/bounds.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "msr/errors.hpp"
#include "msr/vandermonde.hpp"

namespace msr {

namespace {

constexpr double kWrapped = 2.2;
constexpr double kEuclidean = 4.4;

void check_common(int n, double omega, double sigma, double m_min, double sigma_inf_min) {
  if (n < 1) throw DomainError("n must be >= 1");
  if (!(omega > 0.0)) throw DomainError("cut-off frequency must be positive");
  if (!(sigma >= 0.0)) throw DomainError("sigma must be nonnegative");
  if (!(m_min > 0.0)) throw DomainError("m_min must be positive");
  if (!(sigma_inf_min >= 0.0)) throw DomainError("sigma_inf_min must be nonnegative");
}

Bound scaled_root(double factor, int n, double ratio) {
  return {factor * std::pow(ratio, 1.0 / n), ratio > 1.0};
}

}  // namespace

std::string to_string(TheoremMode mode) {
  switch (mode) {
    case TheoremMode::wrapped_1d: return "1d-wrapped";
    case TheoremMode::euclidean_1d: return "1d-euclidean";
    case TheoremMode::planar_2d: return "2d";
  }
  return "unknown";
}

TheoremMode theorem_mode_from_string(const std::string& s) {
  if (s == "1d-wrapped") return TheoremMode::wrapped_1d;
  if (s == "1d-euclidean") return TheoremMode::euclidean_1d;
  if (s == "2d") return TheoremMode::planar_2d;
  throw DomainError("unknown theorem mode: " + s);
}

double noise_ratio(double sigma, double m_min, double sigma_inf_min) {
  if (sigma_inf_min == 0.0) return sigma == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return sigma / (m_min * sigma_inf_min);
}

double srf(double omega, double d_min) {
  if (!(omega > 0.0) || !(d_min > 0.0)) throw DomainError("srf needs positive cut-off and separation");
  return std::numbers::pi / (omega * d_min);
}

Bound threshold_1d_wrapped(int n, double omega, double sigma, double m_min, double sigma_inf_min) {
  check_common(n, omega, sigma, m_min, sigma_inf_min);
  return scaled_root(kWrapped * std::numbers::e * std::numbers::pi / omega, n,
                     noise_ratio(sigma, m_min, sigma_inf_min));
}

Bound threshold_1d_euclidean(int n, double omega, double sigma, double m_min, double sigma_inf_min, double c0) {
  check_common(n, omega, sigma, m_min, sigma_inf_min);
  if (!(c0 >= 1.0)) throw DomainError("c0 must be >= 1");
  return scaled_root(kEuclidean * c0 * std::numbers::e * std::numbers::pi / omega, n,
                     noise_ratio(sigma, m_min, sigma_inf_min));
}

Bound threshold_2d(int n, double omega, double sigma, double m_min, double sigma_inf_min, double c0) {
  if (n < 2) throw DomainError("the planar threshold needs n >= 2");
  check_common(n, omega, sigma, m_min, sigma_inf_min);
  if (!(c0 >= 1.0)) throw DomainError("c0 must be >= 1");
  return scaled_root(kWrapped * c0 * std::numbers::e * std::numbers::pi * (n + 1) * (n + 2) / omega, n,
                     noise_ratio(sigma, m_min, sigma_inf_min));
}

Bound threshold(TheoremMode mode, int n, double omega, double sigma, double m_min, double sigma_inf_min,
                double c0) {
  switch (mode) {
    case TheoremMode::wrapped_1d: return threshold_1d_wrapped(n, omega, sigma, m_min, sigma_inf_min);
    case TheoremMode::euclidean_1d: return threshold_1d_euclidean(n, omega, sigma, m_min, sigma_inf_min, c0);
    case TheoremMode::planar_2d: return threshold_2d(n, omega, sigma, m_min, sigma_inf_min, c0);
  }
  throw DomainError("unknown theorem mode");
}

double constant_c(TheoremMode mode, int n, double c0) {
  if (n < 1) throw DomainError("n must be >= 1");
  if (!(c0 >= 1.0)) throw DomainError("c0 must be >= 1");
  const double base = 0.5 * std::log(2.0 * std::numbers::pi) + std::log(static_cast<double>(n)) + n;
  double lc = 0.0;
  switch (mode) {
    case TheoremMode::wrapped_1d: lc = std::log(2.0) + base; break;
    case TheoremMode::euclidean_1d: lc = n * std::log(2.0) + (n - 1) * std::log(c0) + base; break;
    case TheoremMode::planar_2d:
      lc = n * (std::log(n + 1.0) + std::log(n + 2.0)) + (n - 1) * std::log(c0) + base;
      break;
  }
  return std::exp(lc);
}

Bound location_error_bound(TheoremMode mode, int n, double omega, double d_min, double sigma, double m_min,
                           double sigma_inf_min, double c0) {
  const Bound thr = threshold(mode, n, omega, sigma, m_min, sigma_inf_min, c0);
  const double ratio = noise_ratio(sigma, m_min, sigma_inf_min);
  const double v = constant_c(mode, n, c0) / omega * std::pow(srf(omega, d_min), n - 1) * ratio;
  return {v, thr.vacuous || d_min < thr.value};
}

BoundReport make_bound_report(TheoremMode mode, int n, double omega, double sigma, double m_min,
                              double sigma_inf_min, double c0, std::optional<double> d_min) {
  BoundReport r;
  r.mode = mode;
  r.n = n;
  r.omega = omega;
  r.sigma = sigma;
  r.m_min = m_min;
  r.sigma_inf_min = sigma_inf_min;
  r.c0 = c0;
  r.ratio = noise_ratio(sigma, m_min, sigma_inf_min);
  const Bound thr = threshold(mode, n, omega, sigma, m_min, sigma_inf_min, c0);
  r.threshold = thr.value;
  r.vacuous = thr.vacuous;
  r.constant_c = constant_c(mode, n, c0);
  if (d_min) {
    r.d_min = d_min;
    r.srf = srf(omega, *d_min);
    const Bound e = location_error_bound(mode, n, omega, *d_min, sigma, m_min, sigma_inf_min, c0);
    r.location_error_bound = e.value;
    r.vacuous = r.vacuous || e.vacuous;
  }
  return r;
}

CombinatorialReport verify_combinatorial_lemmas(int n_max) {
  if (n_max < 2) throw DomainError("verify_combinatorial_lemmas needs n_max >= 2");
  using Float = boost::multiprecision::cpp_bin_float_50;
  using boost::multiprecision::cpp_int;
  CombinatorialReport rep;
  auto to_float = [](const Rational& r) { return Float(r.numerator()) / Float(r.denominator()); };
  const Float e = boost::multiprecision::exp(Float(1));
  const Float limit = Float("4.4") * e;
  auto push = [&](std::string fam, int n, const Float& lhs, const Float& rhs, bool ok) {
    rep.checks.push_back({std::move(fam), n, lhs.convert_to<double>(), rhs.convert_to<double>(), ok});
    rep.all_hold = rep.all_hold && ok;
  };
  cpp_int fact = 1;
  for (int n = 1; n <= n_max; ++n) {
    fact *= n;
    const Float fn(n);
    const Float sq = boost::multiprecision::sqrt(fn);
    if (n >= 2) {
      const Float c1 = boost::multiprecision::pow(2 * sq * boost::multiprecision::pow(fn, n - 1) / to_float(xi(n - 1)),
                                                  Float(1) / (n - 1));
      push("xi-root", n, c1, limit, c1 < limit);
      const Float c2 =
          boost::multiprecision::pow(8 * sq * boost::multiprecision::pow(fn, n) / to_float(lambda(n)), Float(1) / n);
      push("lambda-root", n, c2, limit, c2 < limit);
    }
    const Float f(fact);
    const Float power = boost::multiprecision::pow(fn, fn + Float(0.5));
    const Float lower = boost::multiprecision::sqrt(2 * boost::multiprecision::acos(Float(-1))) * power *
                        boost::multiprecision::exp(-fn);
    const Float upper = power * boost::multiprecision::exp(Float(1 - n));
    push("stirling-lower", n, lower, f, lower <= f);
    push("stirling-upper", n, f, upper, f <= upper);
  }
  return rep;
}

}  // namespace msr
