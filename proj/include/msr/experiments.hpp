#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "msr/projection2d.hpp"
#include "msr/recovery.hpp"

namespace msr {

/// One simulated 1D acquisition and its recovery problem.
struct LineInstance {
  DiscreteMeasure truth;
  IlluminationSet illum;
  RecoveryProblem problem;
  double d_min = 0.0;       // separation in the instance's metric
  double threshold = 0.0;   // wrapped threshold for the instance
  double sigma_inf_min = 0.0;
  double sigma = 0.0;
  Metric metric = EuclideanMetric{};
};

struct LineSpec {
  int n = 2;
  int frames = 2;
  double noise_ratio = 1e-3;  // sigma / m_min
  double omega = 1.0;
  /// Absolute separation. Unset: place the atoms at threshold_factor times
  /// the wrapped threshold, with patterns scaled to the layout.
  std::optional<double> separation;
  double threshold_factor = 1.0;
  /// For fixed separations: spatial frequency of the patterns, in units of
  /// Omega. A single frame is lit uniformly instead.
  double pattern_frequency = 4.0;
  int grid_nodes = 60;
  /// Grid pitch relative to the separation, capped at 1/16 of the pattern
  /// wavelength.
  double pitch_fraction = 0.125;
  IlluminationMode mode = IlluminationMode::known;
  double perturbation = 1e-3;  // pattern error in approximated mode
  std::uint64_t seed = 0;
};

LineInstance make_line_instance(const LineSpec& spec);

struct PlaneInstance {
  DiscreteMeasure truth;
  IlluminationSet illum;
  RecoveryProblem problem;
  double d_min = 0.0;
  double threshold = 0.0;
  double sigma_inf_min = 0.0;
  double sigma = 0.0;
  double c0 = 1.0;
};

struct PlaneSpec {
  int n = 2;
  int frames = 2;
  double noise_ratio = 1e-4;
  double omega = 1.0;
  double c0 = 1.0;
  double threshold_factor = 1.0;
  double noise_fraction = 0.5;  // noise drawn at this fraction of sigma
  double pitch_fraction = 0.25;
  std::uint64_t seed = 0;
};

/// 2D acquisition on the polar grid plus theorem grids along every fan
/// candidate direction; sup-norm data and uniform-disk noise.
PlaneInstance make_plane_instance(const PlaneSpec& spec);

/// splitmix64 of the base seed combined with the cell coordinates.
std::uint64_t cell_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0);

/// Random patterns with |I_t(y)| <= 1 on [lo, hi]: sinusoids with
/// |offset| + |amplitude| <= 1 and speckle grids normalized to peak 1.
IlluminationSet random_bounded_illumination(int frames, double lo, double hi, double kmax, std::uint64_t seed);

struct TrialOutcome {
  RecoveryResult result;
  SupportMatching matching;
  bool success = false;  // sparsity n and every deviation below d_min / 2
};

TrialOutcome evaluate_trial(const DiscreteMeasure& truth, const RecoveryResult& result, const Metric& metric,
                            double d_min);

TrialOutcome run_line_trial(const LineInstance& instance);

struct PlaneOutcome {
  TrialOutcome trial;
  DirectionFan fan;
  std::optional<PigeonholeReport> pigeonhole;  // set when n atoms were recovered
  double line_error_bound = 0.0;               // 1D bound fed to the pigeonhole step
};

/// Solves on the disk, then matches truth and recovery along the selected
/// fan directions.
PlaneOutcome run_plane_trial(const PlaneInstance& instance);

/// Smallest separation from which every larger tested separation reaches
/// the success level; unset when none does.
std::optional<double> empirical_threshold(const std::vector<double>& separations, const std::vector<double>& rates,
                                          double level = 0.95);

struct ExperimentConfig {
  std::string scenario = "lemma-suite";
  std::map<std::string, std::string> values;
  std::filesystem::path output = "msr-out";

  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig load(const std::filesystem::path& path);

  std::string get(const std::string& key, const std::string& fallback) const;
  double number(const std::string& key, double fallback) const;
  int integer(const std::string& key, int fallback) const;
  std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback) const;
};

struct RunManifest {
  std::string scenario;
  bool complete = false;
  bool all_passed = true;
  int cells = 0;
  int rows = 0;
  std::vector<std::string> files;
  std::vector<std::string> notes;
};

/// Runs a scenario, writing CSV rows, plots and manifest.json into the
/// output directory.
RunManifest run(const ExperimentConfig& config);

}  // namespace msr
