#include <doctest.h>

#include <numbers>
#include <random>

#include "msr/errors.hpp"
#include "msr/projection2d.hpp"

using namespace msr;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<Location> random_points(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Location> p;
  for (int j = 0; j < n; ++j) p.push_back({u(rng), u(rng)});
  return p;
}

double min_distance(const std::vector<Location>& p) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < p.size(); ++a)
    for (std::size_t b = a + 1; b < p.size(); ++b) m = std::min(m, std::hypot(p[a].x - p[b].x, p[a].y - p[b].y));
  return m;
}

void check_fan(const std::vector<Location>& pts, const DirectionFan& fan) {
  const int n = static_cast<int>(pts.size());
  REQUIRE(fan.selected.size() == static_cast<std::size_t>(n + 1));
  CHECK(fan.candidates.size() >= static_cast<std::size_t>((n + 2) * (n + 1) / 2));
  const double c2 = std::cos(2 * fan.delta);
  for (std::size_t a = 0; a < fan.selected.size(); ++a)
    for (std::size_t b = a + 1; b < fan.selected.size(); ++b) {
      const double d = fan.selected[a].x * fan.selected[b].x + fan.selected[a].y * fan.selected[b].y;
      CHECK(d >= -1e-12);
      CHECK(d <= c2 + 1e-12);
    }
  const double dmin = min_distance(pts);
  for (const auto& v : fan.selected) {
    double sep = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < pts.size(); ++a)
      for (std::size_t b = a + 1; b < pts.size(); ++b)
        sep = std::min(sep, std::abs(v.x * (pts[a].x - pts[b].x) + v.y * (pts[a].y - pts[b].y)));
    CHECK(sep >= 2 * fan.delta / kPi * dmin * (1 - 1e-12));
    CHECK(projected_separation(pts, v) == doctest::Approx(sep));
  }
}

}  // namespace

TEST_CASE("fan for two collinear points") {
  const std::vector<Location> pts{{0.0, 0.0}, {1.0, 0.0}};
  const auto fan = select_directions(pts);
  CHECK(fan.delta == doctest::Approx(kPi / 12));
  CHECK(fan.candidates.size() == 6);
  CHECK(fan.candidates.size() == static_cast<std::size_t>(std::floor(kPi / fan.theta + 1e-9)));
  check_fan(pts, fan);
  // the candidate at angle pi/2 is orthogonal to the difference and must be dropped
  for (int tau : fan.selected_tau) CHECK(tau != 3);
  const auto again = select_directions(pts);
  CHECK(again.selected_tau == fan.selected_tau);
  CHECK_THROWS_AS(select_directions({{0.0, 0.0}}), DomainError);
  CHECK_THROWS_AS(select_directions({{0.5, 0.5}, {0.5, 0.5}}), DomainError);
}

TEST_CASE("fans for random point sets") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto pts = random_points(2 + trial % 4, rng);
    check_fan(pts, select_directions(pts));
  }
}

TEST_CASE("two projection bound") {
  const Location e1{1.0, 0.0}, e2{0.0, 1.0};
  CHECK(two_projection_bound({0.3, -0.4}, e1, e2, kPi / 2));
  CHECK(two_projection_bound({0.0, 0.0}, e1, e2, kPi / 2));
  CHECK_THROWS_AS(two_projection_bound({1.0, 0.0}, e1, {-1.0, 0.0}, kPi / 2), DomainError);
  CHECK_THROWS_AS(two_projection_bound({1.0, 0.0}, e1, {2.0, 0.0}, kPi / 2), DomainError);

  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 2 * kPi), th(0.05, kPi / 2);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 100000; ++trial) {
    const double a = u(rng), t = th(rng);
    const Location v1{std::cos(a), std::sin(a)}, v2{std::cos(a + t), std::sin(a + t)};
    const Location w{g(rng), g(rng)};
    const double lhs = std::pow(v1.x * w.x + v1.y * w.y, 2) + std::pow(v2.x * w.x + v2.y * w.y, 2);
    REQUIRE(lhs >= (1 - std::cos(t)) * (w.x * w.x + w.y * w.y) * (1 - 1e-12));
    REQUIRE(two_projection_bound(w, v1, v2, t));
  }
}

TEST_CASE("cosine gap inequality") {
  for (int n = 1; n <= 50; ++n) {
    const double delta = kPi / ((n + 2.0) * (n + 1.0));
    CHECK(1 - std::cos(2 * delta) >= 8 * delta * delta / (kPi * kPi));
    CHECK(1 - std::cos(2 * delta) >= 8.0 / std::pow((n + 2.0) * (n + 1.0), 2));
  }
}

TEST_CASE("pigeonhole combination") {
  const std::vector<Location> truth{{0.0, 0.0}, {1.0, 0.3}};
  const auto fan = select_directions(truth);
  const auto proj = [](const Location& v, const Location& y) { return v.x * y.x + v.y * y.y; };

  // exact recovery
  std::vector<DirectionMatching> exact(3, DirectionMatching{{0, 1}, {0.0, 0.0}});
  const auto r0 = pigeonhole_match(exact, fan, 1.0, truth, truth);
  for (double d : r0.deviations) CHECK(d == 0.0);
  CHECK(r0.bijective);
  CHECK(r0.planar_bound == doctest::Approx(6.0));

  // jittered recovery in reversed order, one direction mismatched
  const std::vector<Location> rec{{1.0 + 0.01, 0.3 - 0.02}, {0.005, 0.004}};
  std::vector<DirectionMatching> per;
  for (int q = 0; q < 3; ++q) {
    DirectionMatching m;
    m.assignment = q == 1 ? std::vector<std::size_t>{0, 1} : std::vector<std::size_t>{1, 0};
    for (std::size_t j = 0; j < 2; ++j)
      m.deviations.push_back(std::abs(proj(fan.selected[q], rec[m.assignment[j]]) - proj(fan.selected[q], truth[j])));
    per.push_back(m);
  }
  const auto r = pigeonhole_match(per, fan, 0.05, truth, rec);
  CHECK(r.assignment == std::vector<std::size_t>{1, 0});
  CHECK(r.bijective);
  CHECK(r.deviations[0] == doctest::Approx(std::hypot(0.005, 0.004)));
  CHECK(r.deviations[1] == doctest::Approx(std::hypot(0.01, 0.02)));
  const double gap = std::sqrt(1 - std::cos(2 * fan.delta));
  for (std::size_t j = 0; j < 2; ++j) {
    const int q1 = r.direction_pair[2 * j], q2 = r.direction_pair[2 * j + 1];
    CHECK(r.sharp_bounds[j] == doctest::Approx(std::hypot(per[q1].deviations[j], per[q2].deviations[j]) / gap));
    CHECK(r.deviations[j] <= r.sharp_bounds[j] * (1 + 1e-12));
  }
  CHECK_THROWS_AS(pigeonhole_match(std::vector<DirectionMatching>(2, exact[0]), fan, 1.0, truth, truth),
                  DomainError);
}
