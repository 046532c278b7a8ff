#include "msr/forward_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "msr/errors.hpp"

namespace msr {

namespace {

void require_positive(double omega) {
  if (!(omega > 0.0)) throw DomainError("cut-off frequency must be positive");
}

FrequencyGrid line_grid(double omega, int count, double offset, double h, std::string scheme) {
  require_positive(omega);
  if (count < 1) throw DomainError("grid needs at least one node");
  FrequencyGrid g{1, omega, {}, std::move(scheme)};
  for (int j = 0; j < count; ++j) {
    const double w = offset + j * h - omega;
    if (std::abs(w) > omega * (1.0 + 1e-12)) throw DomainError("theorem grid node leaves the band");
    g.nodes.push_back({std::clamp(w, -omega, omega), 0.0});
  }
  return g;
}

}  // namespace

FrequencyGrid FrequencyGrid::uniform(double omega, int m) {
  if (m < 1) throw DomainError("uniform grid needs M >= 1");
  return line_grid(omega, m, 0.0, 2.0 * omega / m, "uniform");
}

FrequencyGrid FrequencyGrid::theorem_wrapped(double omega, int n, int count, double offset) {
  if (n < 1) throw DomainError("theorem grid needs n >= 1");
  const double h = 2.0 * omega / n;
  if (offset < 0.0 || offset > h) throw DomainError("theorem grid offset must lie in [0, h]");
  return line_grid(omega, count, offset, h, "theorem-wrapped");
}

FrequencyGrid FrequencyGrid::theorem_euclidean(double omega, int n, double c0, int count, double offset) {
  if (n < 1 || !(c0 >= 1.0)) throw DomainError("theorem grid needs n >= 1 and c0 >= 1");
  const double h = omega / (c0 * n);
  if (offset < 0.0 || offset > h) throw DomainError("theorem grid offset must lie in [0, h]");
  return line_grid(omega, count, offset, h, "theorem-euclidean");
}

FrequencyGrid FrequencyGrid::polar(double omega, int radii, int angles) {
  require_positive(omega);
  if (radii < 1 || angles < 1) throw DomainError("polar grid needs radii, angles >= 1");
  FrequencyGrid g{2, omega, {{0.0, 0.0}}, "polar"};
  for (int r = 1; r <= radii; ++r)
    for (int a = 0; a < angles; ++a) {
      const double rad = omega * r / radii;
      const double ang = 2.0 * std::numbers::pi * a / angles;
      g.nodes.push_back({rad * std::cos(ang), rad * std::sin(ang)});
    }
  return g;
}

FrequencyGrid FrequencyGrid::along(const FrequencyGrid& line, const Location& v) {
  if (line.dim != 1) throw DomainError("along() needs a 1D grid");
  if (std::abs(norm(v) - 1.0) > 1e-12) throw DomainError("direction must be a unit vector");
  FrequencyGrid g{2, line.omega, {}, "along"};
  for (const auto& w : line.nodes) g.nodes.push_back(w.x * v);
  return g;
}

FrequencyGrid FrequencyGrid::join(const std::vector<FrequencyGrid>& parts) {
  if (parts.empty()) throw DomainError("join of no grids");
  FrequencyGrid g{parts[0].dim, parts[0].omega, {}, "joined"};
  for (const auto& p : parts) {
    if (p.dim != g.dim || p.omega != g.omega) throw DomainError("joined grids must agree in dim and cut-off");
    g.nodes.insert(g.nodes.end(), p.nodes.begin(), p.nodes.end());
  }
  return g;
}

Eigen::MatrixXcd fourier_basis(std::span<const Location> locations, const FrequencyGrid& grid) {
  Eigen::MatrixXcd b(grid.size(), locations.size());
  for (std::size_t j = 0; j < locations.size(); ++j)
    for (std::size_t l = 0; l < grid.size(); ++l) b(l, j) = std::polar(1.0, dot(locations[j], grid.nodes[l]));
  return b;
}

Eigen::VectorXcd transform(std::span<const Location> locations, const Eigen::VectorXcd& amplitudes,
                           const FrequencyGrid& grid) {
  if (static_cast<std::size_t>(amplitudes.size()) != locations.size())
    throw DomainError("transform: amplitude count mismatch");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(grid.size());
  for (std::size_t l = 0; l < grid.size(); ++l) {
    Complex s = 0.0;
    for (std::size_t j = 0; j < locations.size(); ++j)
      s += amplitudes[j] * std::polar(1.0, dot(locations[j], grid.nodes[l]));
    out[l] = s;
  }
  return out;
}

MeasurementSet fourier_transform(const DiscreteMeasure& measure, const IlluminationSet& illum,
                                 const FrequencyGrid& grid, NormMode mode) {
  if (measure.dim() != grid.dim) throw DomainError("measure and grid dimensions differ");
  MeasurementSet ms{grid, {}, 0.0, mode};
  const auto imat = build_illumination_matrix(illum, measure);
  Eigen::VectorXcd a(measure.size());
  for (std::size_t j = 0; j < measure.size(); ++j) a[j] = measure.amplitude(j);
  for (std::size_t t = 0; t < illum.size(); ++t) {
    Eigen::VectorXcd eff = imat.row(t).transpose().cwiseProduct(a);
    ms.frames.push_back(transform(measure.locations(), eff, grid));
  }
  return ms;
}

MeasurementSet add_noise(const MeasurementSet& ms, double sigma, NoiseModel model, std::uint64_t seed) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("noise level must be positive");
  std::mt19937_64 rng(seed);
  MeasurementSet out = ms;
  out.sigma = sigma;
  const double cap = sigma * (1.0 - 1e-9);
  for (auto& frame : out.frames) {
    Eigen::VectorXcd w(frame.size());
    if (model == NoiseModel::uniform_disk) {
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      for (Eigen::Index l = 0; l < w.size(); ++l)
        w[l] = std::polar(cap * std::sqrt(unit(rng)), 2.0 * std::numbers::pi * unit(rng));
    } else {
      // E|w|^2 = (sigma/2)^2 per sample
      std::normal_distribution<double> g(0.0, sigma / (2.0 * std::numbers::sqrt2));
      for (Eigen::Index l = 0; l < w.size(); ++l) w[l] = Complex(g(rng), g(rng));
      const double nrm = frame_norm(w, ms.mode);
      if (nrm >= cap) w *= 0.99 * sigma / nrm;
    }
    frame += w;
  }
  return out;
}

double frame_norm(std::span<const Complex> samples, NormMode mode) {
  if (samples.empty()) throw DomainError("frame_norm of empty sample list");
  double acc = 0.0;
  for (const auto& s : samples) acc = mode == NormMode::rms ? acc + std::norm(s) : std::max(acc, std::abs(s));
  return mode == NormMode::rms ? std::sqrt(acc / samples.size()) : acc;
}

double frame_norm(const Eigen::VectorXcd& samples, NormMode mode) {
  return frame_norm(std::span<const Complex>(samples.data(), samples.size()), mode);
}

std::vector<double> residual(std::span<const Location> candidate, const Eigen::MatrixXcd& effective,
                             const MeasurementSet& ms) {
  if (static_cast<std::size_t>(effective.rows()) != ms.frame_count() ||
      static_cast<std::size_t>(effective.cols()) != candidate.size())
    throw DomainError("residual: effective amplitude shape mismatch");
  const auto basis = fourier_basis(candidate, ms.grid);
  std::vector<double> r;
  for (std::size_t t = 0; t < ms.frame_count(); ++t) {
    Eigen::VectorXcd diff = -ms.frames[t];
    if (!candidate.empty()) diff += basis * effective.row(t).transpose();
    r.push_back(frame_norm(diff, ms.mode));
  }
  return r;
}

std::vector<double> residual(const DiscreteMeasure& candidate, const IlluminationSet& illum,
                             const MeasurementSet& ms) {
  if (candidate.dim() != ms.grid.dim) throw DomainError("candidate and grid dimensions differ");
  if (illum.size() != ms.frame_count()) throw DomainError("pattern count differs from frame count");
  Eigen::MatrixXcd eff = build_illumination_matrix(illum, candidate);
  for (std::size_t j = 0; j < candidate.size(); ++j) eff.col(j) *= candidate.amplitude(j);
  return residual(candidate.locations(), eff, ms);
}

}  // namespace msr
