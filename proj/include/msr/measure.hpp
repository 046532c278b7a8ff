#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <variant>
#include <vector>

namespace msr {

using Complex = std::complex<double>;

/// A point in the line (y unused) or in the plane.
struct Location {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Location&, const Location&) = default;
};

double dot(const Location& a, const Location& b);
double norm(const Location& a);
Location operator-(const Location& a, const Location& b);
Location operator+(const Location& a, const Location& b);
Location operator*(double s, const Location& a);

/// Weighted sum of Dirac atoms in one or two dimensions.
///
/// Locations are pairwise distinct (exact comparison) and every amplitude is
/// nonzero. Instances are immutable once built.
class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;
  DiscreteMeasure(int dim, std::vector<Location> locations, std::vector<Complex> amplitudes);

  static DiscreteMeasure line(std::span<const double> positions, std::span<const Complex> amplitudes);
  static DiscreteMeasure empty(int dim);

  int dim() const { return dim_; }
  std::size_t size() const { return locations_.size(); }
  bool empty() const { return locations_.empty(); }

  const std::vector<Location>& locations() const { return locations_; }
  const std::vector<Complex>& amplitudes() const { return amplitudes_; }
  const Location& location(std::size_t j) const { return locations_[j]; }
  const Complex& amplitude(std::size_t j) const { return amplitudes_[j]; }

  /// 1D coordinates (x components).
  std::vector<double> positions() const;

  /// Smallest amplitude modulus; requires at least one atom.
  double min_amplitude() const;

  DiscreteMeasure translated(const Location& shift) const;
  DiscreteMeasure permuted(std::span<const std::size_t> order) const;

 private:
  int dim_ = 1;
  std::vector<Location> locations_;
  std::vector<Complex> amplitudes_;
};

/// min over integers k of |x - y - k*period|.
double wrapped_distance(double x, double y, double period);

struct EuclideanMetric {};
struct WrappedMetric {
  double period;
};
using Metric = std::variant<EuclideanMetric, WrappedMetric>;

/// Distance between two locations under the metric. The wrapped metric acts
/// on the x coordinate and is only valid in 1D.
double distance(const Location& a, const Location& b, const Metric& metric, int dim);

/// Minimum pairwise distance of the atoms of a measure.
double separation(const DiscreteMeasure& measure, const Metric& metric);

}  // namespace msr
