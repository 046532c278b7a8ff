#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "msr/illumination.hpp"
#include "msr/measure.hpp"

namespace msr {

enum class NormMode { rms, sup };

/// Band-limited frequency nodes. 1D nodes use the x component only.
struct FrequencyGrid {
  int dim = 1;
  double omega = 1.0;
  std::vector<Location> nodes;
  std::string scheme;

  std::size_t size() const { return nodes.size(); }

  /// M evenly spaced nodes -Omega + l * 2Omega/M, l = 0..M-1.
  static FrequencyGrid uniform(double omega, int m);
  /// offset + (j-1)h - Omega, j = 1..count, h = 2Omega/n.
  static FrequencyGrid theorem_wrapped(double omega, int n, int count, double offset);
  /// offset + (j-1)h - Omega, j = 1..count, h = Omega/(c0 n).
  static FrequencyGrid theorem_euclidean(double omega, int n, double c0, int count, double offset);
  /// Center plus radii x angles polar nodes inside the disk of radius Omega.
  static FrequencyGrid polar(double omega, int radii, int angles);
  /// The 1D grid laid along the unit direction v in the plane.
  static FrequencyGrid along(const FrequencyGrid& line, const Location& v);
  /// Concatenation of grids of equal dimension and cut-off.
  static FrequencyGrid join(const std::vector<FrequencyGrid>& parts);
};

struct MeasurementSet {
  FrequencyGrid grid;
  std::vector<Eigen::VectorXcd> frames;
  double sigma = 0.0;
  NormMode mode = NormMode::rms;

  std::size_t frame_count() const { return frames.size(); }
};

/// B(l, j) = exp(i y_j . omega_l)
Eigen::MatrixXcd fourier_basis(std::span<const Location> locations, const FrequencyGrid& grid);

/// Samples of sum_j amplitudes_j exp(i y_j . omega) on the grid.
Eigen::VectorXcd transform(std::span<const Location> locations, const Eigen::VectorXcd& amplitudes,
                           const FrequencyGrid& grid);

/// Noiseless per-frame data of I_t mu.
MeasurementSet fourier_transform(const DiscreteMeasure& measure, const IlluminationSet& illum,
                                 const FrequencyGrid& grid, NormMode mode = NormMode::rms);

enum class NoiseModel { gaussian_capped, uniform_disk };

/// Adds noise whose per-frame norm (in ms.mode) is strictly below sigma.
MeasurementSet add_noise(const MeasurementSet& ms, double sigma, NoiseModel model, std::uint64_t seed);

/// rms: sqrt(mean |x|^2); sup: max |x|.
double frame_norm(std::span<const Complex> samples, NormMode mode);
double frame_norm(const Eigen::VectorXcd& samples, NormMode mode);

/// Per-frame norm of F[effective measure] - Y_t, where frame t of the
/// effective measure has atoms at `candidate` with amplitudes effective(t, :).
std::vector<double> residual(std::span<const Location> candidate, const Eigen::MatrixXcd& effective,
                             const MeasurementSet& ms);

/// Residual of I_t rho for a candidate measure rho under known patterns.
std::vector<double> residual(const DiscreteMeasure& candidate, const IlluminationSet& illum,
                             const MeasurementSet& ms);

}  // namespace msr
