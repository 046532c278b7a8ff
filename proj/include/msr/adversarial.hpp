#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "msr/illumination.hpp"
#include "msr/measure.hpp"

namespace msr {

/// Cardinal row: component j is prod_{q != j} (t - t_q) / (t_j - t_q).
Eigen::VectorXd lagrange_row(std::span<const double> nodes, double t);

/// Amplitudes on `targets` whose scaled moments sum_j a_j (Omega y)^k,
/// k < targets.size(), equal those of the atoms (locations, values).
Eigen::VectorXcd moment_match(std::span<const double> locations, std::span<const Complex> values,
                              std::span<const double> targets, double omega);

/// 0.043 / Omega (sigma / m_min)^{1/n}
double adversarial_spacing(int n, double omega, double sigma, double m_min);

/// e 2^{3n-1/2} / (pi^{3/2} (n-1)) n^2 m_min
double amplitude_sum_bound(int n, double m_min);

struct AdversarialInstance {
  int n = 0;
  double omega = 0.0, sigma = 0.0, m_min = 0.0;
  double tau = 0.0;
  DiscreteMeasure mu;   // atoms at -tau, ..., -n tau
  DiscreteMeasure rho;  // atoms at 0, tau, ..., (n-1) tau; amplitudes from frame 0
  Eigen::MatrixXcd matched_amplitudes;  // T x n
  std::vector<double> residuals;        // per-frame RMS on the certification grid
  std::vector<double> sup_residuals;    // per-frame max modulus on the same grid
  std::vector<double> amplitude_sums;   // sum_j |a_hat_{j,t}|
  double amplitude_bound = 0.0;
  double doubling_change = 0.0;         // max relative RMS change when the grid doubles
  int grid_nodes = 1024;
};

/// Builds the pair and certifies every frame; throws CertificationError if
/// any residual reaches sigma or the amplitude-sum bound fails.
AdversarialInstance build_instance(int n, double omega, double sigma, double m_min, const IlluminationSet& illum,
                                   std::span<const double> phases = {});

}  // namespace msr
