#include "msr/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "msr/errors.hpp"

namespace msr {

double dot(const Location& a, const Location& b) { return a.x * b.x + a.y * b.y; }
double norm(const Location& a) { return std::hypot(a.x, a.y); }
Location operator-(const Location& a, const Location& b) { return {a.x - b.x, a.y - b.y}; }
Location operator+(const Location& a, const Location& b) { return {a.x + b.x, a.y + b.y}; }
Location operator*(double s, const Location& a) { return {s * a.x, s * a.y}; }

DiscreteMeasure::DiscreteMeasure(int dim, std::vector<Location> locations, std::vector<Complex> amplitudes)
    : dim_(dim), locations_(std::move(locations)), amplitudes_(std::move(amplitudes)) {
  if (dim_ != 1 && dim_ != 2) throw DomainError("measure dimension must be 1 or 2");
  if (locations_.size() != amplitudes_.size())
    throw DomainError("measure: " + std::to_string(locations_.size()) + " locations but " +
                      std::to_string(amplitudes_.size()) + " amplitudes");
  std::set<std::pair<double, double>> seen;
  for (std::size_t j = 0; j < locations_.size(); ++j) {
    auto& p = locations_[j];
    if (dim_ == 1) p.y = 0.0;
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw DomainError("measure: non-finite location");
    if (!seen.insert({p.x, p.y}).second) throw DomainError("measure: duplicate location");
    const Complex a = amplitudes_[j];
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) throw DomainError("measure: non-finite amplitude");
    if (a == Complex(0.0, 0.0)) throw DomainError("measure: zero amplitude at atom " + std::to_string(j));
  }
}

DiscreteMeasure DiscreteMeasure::line(std::span<const double> positions, std::span<const Complex> amplitudes) {
  std::vector<Location> locs;
  locs.reserve(positions.size());
  for (double x : positions) locs.push_back({x, 0.0});
  return DiscreteMeasure(1, std::move(locs), {amplitudes.begin(), amplitudes.end()});
}

DiscreteMeasure DiscreteMeasure::empty(int dim) { return DiscreteMeasure(dim, {}, {}); }

std::vector<double> DiscreteMeasure::positions() const {
  std::vector<double> out;
  out.reserve(locations_.size());
  for (const auto& p : locations_) out.push_back(p.x);
  return out;
}

double DiscreteMeasure::min_amplitude() const {
  if (amplitudes_.empty()) throw DomainError("min_amplitude of empty measure");
  double m = std::numeric_limits<double>::infinity();
  for (const auto& a : amplitudes_) m = std::min(m, std::abs(a));
  return m;
}

DiscreteMeasure DiscreteMeasure::translated(const Location& shift) const {
  auto locs = locations_;
  for (auto& p : locs) p = p + shift;
  return DiscreteMeasure(dim_, std::move(locs), amplitudes_);
}

DiscreteMeasure DiscreteMeasure::permuted(std::span<const std::size_t> order) const {
  if (order.size() != size()) throw DomainError("permutation length mismatch");
  std::vector<Location> locs;
  std::vector<Complex> amps;
  for (auto i : order) {
    if (i >= size()) throw DomainError("permutation index out of range");
    locs.push_back(locations_[i]);
    amps.push_back(amplitudes_[i]);
  }
  return DiscreteMeasure(dim_, std::move(locs), std::move(amps));
}

double wrapped_distance(double x, double y, double period) {
  if (!(period > 0.0)) throw DomainError("wrapped_distance: period must be positive");
  double r = std::fmod(std::abs(x - y), period);
  return std::min(r, period - r);
}

double distance(const Location& a, const Location& b, const Metric& metric, int dim) {
  if (const auto* w = std::get_if<WrappedMetric>(&metric)) {
    if (dim != 1) throw DomainError("wrapped metric is only defined in 1D");
    return wrapped_distance(a.x, b.x, w->period);
  }
  return dim == 1 ? std::abs(a.x - b.x) : norm(a - b);
}

double separation(const DiscreteMeasure& measure, const Metric& metric) {
  if (measure.size() < 2) throw DomainError("separation needs at least two atoms");
  if (measure.dim() == 2 && std::holds_alternative<WrappedMetric>(metric))
    throw DomainError("wrapped metric is only defined in 1D");
  double best = std::numeric_limits<double>::infinity();
  const auto& locs = measure.locations();
  for (std::size_t p = 0; p < locs.size(); ++p)
    for (std::size_t j = p + 1; j < locs.size(); ++j)
      best = std::min(best, distance(locs[p], locs[j], metric, measure.dim()));
  return best;
}

}  // namespace msr
