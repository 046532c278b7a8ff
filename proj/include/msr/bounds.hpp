#pragma once

#include <optional>
#include <string>
#include <vector>

namespace msr {

/// Which recovery theorem a bound belongs to.
enum class TheoremMode { wrapped_1d, euclidean_1d, planar_2d };

std::string to_string(TheoremMode mode);
TheoremMode theorem_mode_from_string(const std::string& s);

struct Bound {
  double value = 0.0;
  bool vacuous = false;
};

/// (1 / sigma_inf_min) (sigma / m_min)
double noise_ratio(double sigma, double m_min, double sigma_inf_min);

/// pi / (Omega d_min)
double srf(double omega, double d_min);

Bound threshold_1d_wrapped(int n, double omega, double sigma, double m_min, double sigma_inf_min);
Bound threshold_1d_euclidean(int n, double omega, double sigma, double m_min, double sigma_inf_min, double c0);
Bound threshold_2d(int n, double omega, double sigma, double m_min, double sigma_inf_min, double c0);
Bound threshold(TheoremMode mode, int n, double omega, double sigma, double m_min, double sigma_inf_min,
                double c0 = 1.0);

/// C(n) of the mode, evaluated through logarithms.
double constant_c(TheoremMode mode, int n, double c0 = 1.0);

/// (C(n)/Omega) SRF^{n-1} ratio; vacuous when d_min is below the mode's
/// threshold or the ratio exceeds one.
Bound location_error_bound(TheoremMode mode, int n, double omega, double d_min, double sigma, double m_min,
                           double sigma_inf_min, double c0 = 1.0);

struct BoundReport {
  TheoremMode mode = TheoremMode::wrapped_1d;
  int n = 0;
  double omega = 0.0, sigma = 0.0, m_min = 0.0, sigma_inf_min = 0.0, c0 = 1.0;
  double ratio = 0.0;
  double threshold = 0.0;
  double constant_c = 0.0;
  std::optional<double> d_min;
  std::optional<double> srf;
  std::optional<double> location_error_bound;
  bool vacuous = false;
};

BoundReport make_bound_report(TheoremMode mode, int n, double omega, double sigma, double m_min,
                              double sigma_inf_min, double c0 = 1.0, std::optional<double> d_min = {});

struct InequalityCheck {
  std::string family;  // "xi-root", "lambda-root", "stirling-lower", "stirling-upper"
  int n = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

struct CombinatorialReport {
  std::vector<InequalityCheck> checks;
  bool all_hold = true;
};

/// Exact-factorial checks of the two root estimates (2 <= n <= n_max) and
/// the two-sided Stirling bound (1 <= n <= n_max).
CombinatorialReport verify_combinatorial_lemmas(int n_max);

}  // namespace msr
