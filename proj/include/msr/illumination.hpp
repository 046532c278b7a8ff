#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <variant>
#include <vector>

#include "msr/measure.hpp"

namespace msr {

struct Constant {
  Complex value{1.0, 0.0};
};

/// offset + amplitude * cos(k . y + phase)
struct Sinusoid {
  Complex offset{1.0, 0.0};
  Complex amplitude{1.0, 0.0};
  Location wavevector;
  double phase = 0.0;
};

/// Values tabulated on a uniform grid, interpolated linearly (1D) or
/// bilinearly (2D). Evaluation outside the grid throws OutOfDomainError.
class SpeckleGrid {
 public:
  SpeckleGrid() = default;
  SpeckleGrid(int dim, Location origin, double pitch, int nx, int ny, std::vector<Complex> values);

  /// Random band-limited field (sum of `modes` plane waves with |k| <= kmax)
  /// normalized so the tabulated values have modulus at most 1.
  static SpeckleGrid random(int dim, Location origin, double extent, double pitch, double kmax, int modes,
                            std::uint64_t seed);

  Complex operator()(const Location& y) const;

  int dim() const { return dim_; }
  const Location& origin() const { return origin_; }
  double pitch() const { return pitch_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  const std::vector<Complex>& values() const { return values_; }
  double max_modulus() const;

 private:
  int dim_ = 1;
  Location origin_;
  double pitch_ = 1.0;
  int nx_ = 0;
  int ny_ = 1;
  std::vector<Complex> values_;  // row-major, index iy * nx + ix
};

struct Perturbed;
using Pattern = std::variant<Constant, Sinusoid, SpeckleGrid, Perturbed>;

/// A base pattern plus a small smooth additive error; models an
/// approximately known illumination.
struct Perturbed {
  std::shared_ptr<const Pattern> base;
  Sinusoid delta;
};

Complex evaluate(const Pattern& pattern, const Location& y);

class IlluminationSet {
 public:
  IlluminationSet() = default;
  explicit IlluminationSet(std::vector<Pattern> patterns);

  static IlluminationSet constant(int frames, Complex value = {1.0, 0.0});

  std::size_t size() const { return patterns_.size(); }
  const Pattern& operator[](std::size_t t) const { return patterns_[t]; }
  const std::vector<Pattern>& patterns() const { return patterns_; }
  Complex operator()(std::size_t t, const Location& y) const { return evaluate(patterns_[t], y); }

  /// Each pattern gets an additive random sinusoid of modulus at most `bound`.
  IlluminationSet perturbed(double bound, double kmax, std::uint64_t seed) const;

  /// Largest |I_t(y)| over `samples` uniformly spaced points of [lo, hi]
  /// (1D) or of the square [lo, hi]^2 (2D).
  double max_modulus(int dim, double lo, double hi, int samples) const;

 private:
  std::vector<Pattern> patterns_;
};

using IlluminationMatrix = Eigen::MatrixXcd;

/// entries(t, j) = I_t(y_j)
IlluminationMatrix build_illumination_matrix(const IlluminationSet& set, const DiscreteMeasure& measure);

}  // namespace msr
