#include "msr/projection2d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "msr/errors.hpp"

namespace msr {

DirectionFan select_directions(const std::vector<Location>& points) {
  const int n = static_cast<int>(points.size());
  if (n < 2) throw DomainError("select_directions needs at least two points");
  std::vector<Location> diffs;
  for (int p = 0; p < n; ++p)
    for (int j = p + 1; j < n; ++j) {
      diffs.push_back(points[j] - points[p]);
      if (diffs.back() == Location{}) throw DomainError("select_directions: points must be distinct");
    }
  DirectionFan fan;
  fan.n = n;
  fan.delta = std::numbers::pi / ((n + 2.0) * (n + 1.0));
  fan.theta = 2.0 * fan.delta;
  const int count = (n + 2) * (n + 1) / 2;
  const double sd = std::sin(fan.delta);
  std::vector<int> survivors;
  for (int tau = 1; tau <= count; ++tau) {
    const Location v{std::cos(tau * fan.theta), std::sin(tau * fan.theta)};
    fan.candidates.push_back(v);
    bool keep = true;
    for (const auto& u : diffs)
      if (std::abs(dot(v, u)) < norm(u) * sd) keep = false;
    if (keep) survivors.push_back(tau);
  }
  const int half = (count + 1) / 2;
  std::vector<int> first, second;
  for (int tau : survivors) (tau <= half ? first : second).push_back(tau);
  const auto& pool = static_cast<int>(first.size()) >= n + 1 ? first : second;
  if (static_cast<int>(pool.size()) < n + 1)
    throw CertificationError("select_directions: only " + std::to_string(survivors.size()) + " survivors");
  for (int i = 0; i <= n; ++i) {
    fan.selected_tau.push_back(pool[i]);
    fan.selected.push_back(fan.candidates[pool[i] - 1]);
  }
  return fan;
}

double projected_separation(const std::vector<Location>& points, const Location& v) {
  if (points.size() < 2) throw DomainError("projected_separation needs at least two points");
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < points.size(); ++p)
    for (std::size_t j = p + 1; j < points.size(); ++j) m = std::min(m, std::abs(dot(v, points[p] - points[j])));
  return m;
}

bool two_projection_bound(const Location& u, const Location& v1, const Location& v2, double theta) {
  if (std::abs(norm(v1) - 1.0) > 1e-12 || std::abs(norm(v2) - 1.0) > 1e-12)
    throw DomainError("two_projection_bound: directions must be unit vectors");
  const double c = dot(v1, v2);
  if (c < -1e-15 || c > std::cos(theta) + 1e-15)
    throw DomainError("two_projection_bound: need 0 <= v1.v2 <= cos theta");
  const double lhs = std::pow(dot(v1, u), 2) + std::pow(dot(v2, u), 2);
  const double uu = dot(u, u);
  // allowance for rounding in the two dot products
  return lhs >= (1.0 - std::cos(theta)) * uu - 1e-14 * uu;
}

PigeonholeReport pigeonhole_match(const std::vector<DirectionMatching>& per_direction, const DirectionFan& fan,
                                  double d1_error_bound, const std::vector<Location>& truth,
                                  const std::vector<Location>& recovered) {
  const auto n = truth.size();
  if (recovered.size() != n || static_cast<int>(n) != fan.n)
    throw DomainError("pigeonhole_match: atom counts disagree with the fan");
  if (per_direction.size() != n + 1) throw DomainError("pigeonhole_match: need n + 1 direction matchings");
  for (const auto& d : per_direction)
    if (d.assignment.size() != n || d.deviations.size() != n)
      throw DomainError("pigeonhole_match: matching has wrong length");
  PigeonholeReport rep;
  rep.planar_bound = (fan.n + 2.0) * (fan.n + 1.0) / 2.0 * d1_error_bound;
  const double gap = std::sqrt(1.0 - std::cos(2.0 * fan.delta));
  std::vector<int> used(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    int q1 = -1, q2 = -1;
    for (std::size_t a = 0; a <= n && q1 < 0; ++a)
      for (std::size_t b = a + 1; b <= n; ++b)
        if (per_direction[a].assignment[j] == per_direction[b].assignment[j]) {
          q1 = static_cast<int>(a);
          q2 = static_cast<int>(b);
          break;
        }
    if (q1 < 0) throw CertificationError("pigeonhole_match: no repeated assignment for atom " + std::to_string(j));
    const auto p = per_direction[q1].assignment[j];
    rep.assignment.push_back(p);
    rep.direction_pair.push_back(q1);
    rep.direction_pair.push_back(q2);
    const double dev = norm(recovered[p] - truth[j]);
    const double sharp = std::hypot(per_direction[q1].deviations[j], per_direction[q2].deviations[j]) / gap;
    rep.deviations.push_back(dev);
    rep.sharp_bounds.push_back(sharp);
    if (dev > sharp * (1.0 + 1e-9) + 1e-15)
      throw CertificationError("pigeonhole_match: planar deviation exceeds the two-projection bound");
    if (p < n) ++used[p];
  }
  rep.bijective = std::all_of(used.begin(), used.end(), [](int u) { return u == 1; });
  return rep;
}

}  // namespace msr
