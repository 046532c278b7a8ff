#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "msr/bounds.hpp"
#include "msr/forward_model.hpp"
#include "msr/illumination.hpp"
#include "msr/measure.hpp"

namespace msr {

enum class IlluminationMode { known, approximated, unknown };

std::string to_string(IlluminationMode mode);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct Disk {
  Location center;
  double radius = 0.0;
};

struct RecoveryProblem {
  MeasurementSet measurements;
  IlluminationMode illum_mode = IlluminationMode::unknown;
  IlluminationSet patterns;         // true patterns (known) or their estimate (approximated)
  double perturbation_bound = 0.0;  // declared accuracy of the estimate; informational
  Interval interval;                // 1D search domain
  Disk disk;                        // 2D search domain
  std::optional<double> sigma;      // feasibility tolerance; measurements.sigma when unset
  double grid_pitch = 0.1;
  int max_sparsity = 3;

  int beam_width = 16;             // supports kept per level in beam search
  int refine_candidates = 5;       // screened supports refined per sparsity level
  double exhaustive_limit = 4e6;   // above this many subsets, use beam search
  double refine_step_tolerance = 1e-10;  // refinement stops below this step (units of grid_pitch)
  int refine_iterations = 500;
  int refine_restarts = 8;         // pattern searches restarted from the end point at full step

  int dim() const { return measurements.grid.dim; }
  double tolerance() const { return sigma.value_or(measurements.sigma); }

  /// 2D problem on the disk of radius c0 n pi / Omega around center.
  static Disk default_disk(int n, double omega, double c0, Location center = {});
};

struct TraceEntry {
  int k = 0;
  std::vector<Location> start;
  std::vector<Location> end;
  double residual_before = 0.0;
  double residual_after = 0.0;
  int evaluations = 0;
};

struct RecoveryResult {
  DiscreteMeasure measure;
  int sparsity = 0;
  std::vector<double> per_frame_residuals;
  Eigen::MatrixXcd effective_amplitudes;  // T x k
  std::vector<TraceEntry> refinement_trace;
  std::vector<std::string> log;
  bool feasible = false;
};

struct SupportFit {
  Eigen::MatrixXcd effective;  // T x k
  Eigen::VectorXcd shared;     // shared amplitudes in known/approximated modes
  std::vector<double> residuals;  // per-frame norms in the problem's mode
  double max_residual = 0.0;
  double sum_squares = 0.0;       // sum over frames and nodes of |r|^2
  bool ok = false;             // false: rank deficient or ill-conditioned
};

/// Least-squares amplitudes for a fixed support under `mode`.
SupportFit fit_support_ls(const RecoveryProblem& problem, const std::vector<Location>& support,
                          IlluminationMode mode);

/// Amplitudes minimizing the largest per-frame residual in the problem's norm.
SupportFit fit_support_minimax(const RecoveryProblem& problem, const std::vector<Location>& support,
                               IlluminationMode mode);

/// Sparsest feasible measure up to problem.max_sparsity.
RecoveryResult solve_l0(const RecoveryProblem& problem);

struct SupportMatching {
  std::vector<std::size_t> permutation;  // recovered index matched to truth atom j
  std::vector<double> deviations;
  double max_deviation = 0.0;
};

/// Minimum total-distance assignment between two equally sized supports.
SupportMatching match_supports(const DiscreteMeasure& truth, const DiscreteMeasure& recovered, const Metric& metric);

struct Certificate {
  TheoremMode mode = TheoremMode::wrapped_1d;
  bool vacuous = false;
  bool holds = false;
  double d_min = 0.0;
  double threshold = 0.0;
  double error_bound = 0.0;
  double sigma_inf_min = 0.0;
  double max_deviation = 0.0;
  double slack = 0.0;  // error_bound - max_deviation
  SupportMatching matching;
  std::string reason;
};

/// Metric in which the mode measures separations and deviations.
Metric theorem_metric(TheoremMode mode, int n, double omega);

Certificate certify_against_theorem(const DiscreteMeasure& truth, const DiscreteMeasure& recovered,
                                    const IlluminationMatrix& illum, double sigma, double omega, TheoremMode mode,
                                    double c0 = 1.0);

/// Re-evaluates frame t on a 1D grid laid along a direction.
using FrameEvaluator = std::function<Eigen::VectorXcd(std::size_t t, const FrequencyGrid& grid)>;

/// y . v for each location
std::vector<double> project_locations(const std::vector<Location>& locations, const Location& v);

/// The 1D problem seen through samples along v: nodes of `line` (a 1D grid)
/// are looked up in the 2D grid, or recomputed with `evaluate` if missing.
RecoveryProblem project_problem_1d(const RecoveryProblem& problem, const Location& v, const FrequencyGrid& line,
                                   const FrameEvaluator& evaluate = {});

}  // namespace msr
