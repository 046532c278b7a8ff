#pragma once

#include <vector>

#include "msr/measure.hpp"

namespace msr {

struct DirectionFan {
  int n = 0;
  double delta = 0.0;  // pi / ((n+2)(n+1))
  double theta = 0.0;  // 2 delta
  std::vector<Location> candidates;  // v(tau theta), tau = 1..N
  std::vector<int> selected_tau;     // 1-based indices into the candidate list
  std::vector<Location> selected;    // n + 1 unit vectors
};

/// Candidates nearly orthogonal to some difference vector are dropped. The
/// n + 1 directions are taken in increasing tau order from whichever half
/// of the fan (tau <= ceil(N/2), or the rest) has enough survivors, so all
/// pairwise dot products lie in [0, cos 2 delta].
DirectionFan select_directions(const std::vector<Location>& points);

/// min_{p != j} |v . (y_p - y_j)|
double projected_separation(const std::vector<Location>& points, const Location& v);

/// |v1.u|^2 + |v2.u|^2 >= (1 - cos theta) ||u||^2, given 0 <= v1.v2 <= cos theta.
bool two_projection_bound(const Location& u, const Location& v1, const Location& v2, double theta);

/// Matching of truth atoms to recovered atoms along one direction.
struct DirectionMatching {
  std::vector<std::size_t> assignment;  // recovered index for truth atom j
  std::vector<double> deviations;       // |v.(y_hat - y_j)|
};

struct PigeonholeReport {
  std::vector<std::size_t> assignment;  // recovered atom for truth atom j
  std::vector<int> direction_pair;      // 2 entries per atom: q1, q2
  std::vector<double> deviations;       // ||y_hat - y_j||
  std::vector<double> sharp_bounds;     // sqrt(dev1^2 + dev2^2) / sqrt(1 - cos 2 delta)
  double planar_bound = 0.0;            // (n+2)(n+1)/2 times the 1D bound
  bool bijective = false;
};

/// Combines n + 1 per-direction matchings into planar deviations.
PigeonholeReport pigeonhole_match(const std::vector<DirectionMatching>& per_direction, const DirectionFan& fan,
                                  double d1_error_bound, const std::vector<Location>& truth,
                                  const std::vector<Location>& recovered);

}  // namespace msr
