#include "msr/adversarial.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "msr/errors.hpp"
#include "msr/forward_model.hpp"

namespace msr {

Eigen::VectorXd lagrange_row(std::span<const double> nodes, double t) {
  const auto k = nodes.size();
  if (k == 0) throw DomainError("lagrange_row: no nodes");
  for (std::size_t p = 0; p < k; ++p)
    for (std::size_t q = p + 1; q < k; ++q)
      if (nodes[p] == nodes[q]) throw DomainError("lagrange_row: duplicate nodes");
  Eigen::VectorXd row(k);
  for (std::size_t j = 0; j < k; ++j) {
    double v = 1.0;
    for (std::size_t q = 0; q < k; ++q)
      if (q != j) v *= (t - nodes[q]) / (nodes[j] - nodes[q]);
    row[j] = v;
  }
  return row;
}

namespace {

// uniform cells on [-omega, omega] sampled at their centres; for the convex
// residual profiles here the midpoint RMS sits below the continuum RMS
FrequencyGrid midpoint_grid(double omega, int m) {
  auto g = FrequencyGrid::uniform(omega, m);
  const double h = 2.0 * omega / m;
  for (auto& node : g.nodes) node.x += 0.5 * h;
  g.scheme = "uniform-midpoint";
  return g;
}

// Neumaier compensated accumulator.
struct Compensated {
  double sum = 0.0, c = 0.0;
  void add(double x) {
    const double t = sum + x;
    c += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + c; }
};

}  // namespace

Eigen::VectorXcd moment_match(std::span<const double> locations, std::span<const Complex> values,
                              std::span<const double> targets, double omega) {
  if (locations.size() != values.size()) throw DomainError("moment_match: locations and values differ in length");
  if (!(omega > 0.0)) throw DomainError("moment_match: cut-off must be positive");
  const auto n = targets.size();
  std::vector<double> scaled(n);
  for (std::size_t j = 0; j < n; ++j) scaled[j] = omega * targets[j];
  std::vector<Compensated> re(n), im(n);
  for (std::size_t i = 0; i < locations.size(); ++i) {
    const auto row = lagrange_row(scaled, omega * locations[i]);
    for (std::size_t j = 0; j < n; ++j) {
      const Complex term = values[i] * row[j];
      if (n >= 4) {
        re[j].add(term.real());
        im[j].add(term.imag());
      } else {
        re[j].sum += term.real();
        im[j].sum += term.imag();
      }
    }
  }
  Eigen::VectorXcd out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = {re[j].value(), im[j].value()};
  return out;
}

double adversarial_spacing(int n, double omega, double sigma, double m_min) {
  if (n < 1 || !(omega > 0.0) || !(sigma > 0.0) || !(m_min > 0.0))
    throw DomainError("adversarial_spacing: invalid parameters");
  return 0.043 / omega * std::pow(sigma / m_min, 1.0 / n);
}

double amplitude_sum_bound(int n, double m_min) {
  if (n < 2) throw DomainError("amplitude_sum_bound needs n >= 2");
  return std::numbers::e * std::pow(2.0, 3.0 * n - 0.5) / (std::pow(std::numbers::pi, 1.5) * (n - 1)) * n * n * m_min;
}

AdversarialInstance build_instance(int n, double omega, double sigma, double m_min, const IlluminationSet& illum,
                                   std::span<const double> phases) {
  if (n < 2) throw DomainError("build_instance needs n >= 2");
  if (!(sigma > 0.0) || !(m_min > 0.0) || sigma > m_min) throw DomainError("build_instance needs 0 < sigma <= m_min");
  if (!phases.empty() && phases.size() != static_cast<std::size_t>(n))
    throw DomainError("build_instance: need one phase per atom");
  AdversarialInstance inst;
  inst.n = n;
  inst.omega = omega;
  inst.sigma = sigma;
  inst.m_min = m_min;
  inst.tau = adversarial_spacing(n, omega, sigma, m_min);
  if (!(omega * inst.tau < 0.05)) throw CertificationError("Omega tau >= 0.05");

  std::vector<double> y, yhat;
  std::vector<Complex> a;
  for (int j = 1; j <= n; ++j) {
    y.push_back(-j * inst.tau);
    yhat.push_back((j - 1) * inst.tau);
    a.push_back(std::polar(m_min, phases.empty() ? 0.0 : phases[j - 1]));
  }
  inst.mu = DiscreteMeasure::line(y, a);
  const double peak = illum.max_modulus(1, y.back(), yhat.back(), 257);
  if (peak > 1.0 + 1e-12)
    throw PreconditionError("|I_t(y)| <= 1 fails on the support interval: max " + std::to_string(peak));

  const auto frames = static_cast<Eigen::Index>(illum.size());
  inst.matched_amplitudes.resize(frames, n);
  const auto imat = build_illumination_matrix(illum, inst.mu);
  for (Eigen::Index t = 0; t < frames; ++t) {
    std::vector<Complex> v(n);
    for (int j = 0; j < n; ++j) v[j] = imat(t, j) * a[j];
    inst.matched_amplitudes.row(t) = moment_match(y, v, yhat, omega).transpose();
  }
  std::vector<Complex> rho_amps(n);
  for (int j = 0; j < n; ++j) {
    rho_amps[j] = inst.matched_amplitudes(0, j);
    if (rho_amps[j] == Complex(0.0, 0.0)) rho_amps[j] = std::numeric_limits<double>::min();
  }
  inst.rho = DiscreteMeasure::line(yhat, rho_amps);

  inst.amplitude_bound = amplitude_sum_bound(n, m_min);
  const auto grid = midpoint_grid(omega, inst.grid_nodes);
  const auto fine = midpoint_grid(omega, 2 * inst.grid_nodes);
  std::vector<Location> lmu, lrho;
  for (double x : y) lmu.push_back({x, 0.0});
  for (double x : yhat) lrho.push_back({x, 0.0});
  for (Eigen::Index t = 0; t < frames; ++t) {
    Eigen::VectorXcd vmu(n);
    for (int j = 0; j < n; ++j) vmu[j] = imat(t, j) * a[j];
    const Eigen::VectorXcd ahat = inst.matched_amplitudes.row(t).transpose();
    const Eigen::VectorXcd diff = transform(lrho, ahat, grid) - transform(lmu, vmu, grid);
    const Eigen::VectorXcd diff2 = transform(lrho, ahat, fine) - transform(lmu, vmu, fine);
    const double r = frame_norm(diff, NormMode::rms);
    inst.residuals.push_back(r);
    inst.sup_residuals.push_back(frame_norm(diff, NormMode::sup));
    if (r > 0.0)
      inst.doubling_change = std::max(inst.doubling_change, std::abs(frame_norm(diff2, NormMode::rms) - r) / r);
    inst.amplitude_sums.push_back(ahat.cwiseAbs().sum());
    if (!(r < sigma))
      throw CertificationError("frame " + std::to_string(t) + ": residual " + std::to_string(r) + " >= sigma");
    if (!(inst.amplitude_sums.back() <= inst.amplitude_bound))
      throw CertificationError("frame " + std::to_string(t) + ": amplitude sum exceeds the bound");
  }
  return inst;
}

}  // namespace msr
