#include <doctest.h>

#include <numbers>
#include <random>

#include "msr/errors.hpp"
#include "msr/illumination.hpp"
#include "msr/measure.hpp"
#include "msr/serialization.hpp"
#include "oracles.hpp"

using namespace msr;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("wrapped distance examples") {
  const double L = 2.5;
  CHECK(wrapped_distance(0.0, L, L) == doctest::Approx(0.0));
  CHECK(wrapped_distance(0.0, 0.6 * L, L) == doctest::Approx(0.4 * L));
  CHECK(wrapped_distance(0.1, 0.3, 2 * kPi) == doctest::Approx(0.2));
  CHECK_THROWS_AS(wrapped_distance(0.0, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(wrapped_distance(0.0, 1.0, -1.0), DomainError);
}

TEST_CASE("wrapped distance is a pseudometric bounded by half the period") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  const double L = 3.7;
  for (int i = 0; i < 5000; ++i) {
    const double x = u(rng), y = u(rng), z = u(rng);
    const double dxy = wrapped_distance(x, y, L);
    CHECK(dxy >= 0.0);
    CHECK(dxy <= L / 2 + 1e-12);
    CHECK(dxy == doctest::Approx(wrapped_distance(y, x, L)).epsilon(1e-12));
    CHECK(wrapped_distance(x, z, L) <= dxy + wrapped_distance(y, z, L) + 1e-12);
  }
}

TEST_CASE("measure construction rejects invalid atoms") {
  CHECK_THROWS_AS(DiscreteMeasure(3, {}, {}), DomainError);
  CHECK_THROWS_AS(DiscreteMeasure(1, {{0, 0}}, {}), DomainError);
  CHECK_THROWS_AS(DiscreteMeasure(1, {{0, 0}, {0, 0}}, {1.0, 2.0}), DomainError);
  CHECK_THROWS_AS(DiscreteMeasure(1, {{0, 0}}, {0.0}), DomainError);
  CHECK_THROWS_AS(DiscreteMeasure(1, {{std::nan(""), 0}}, {1.0}), DomainError);
  // distinctness is exact: atoms one ulp apart are allowed
  const double x = 1.0;
  CHECK_NOTHROW(DiscreteMeasure(1, {{x, 0}, {std::nextafter(x, 2.0), 0}}, {1.0, 1.0}));
  const auto m = DiscreteMeasure(2, {{0, 1}, {1, 0}}, {Complex(0, 2), 3.0});
  CHECK(m.size() == 2);
  CHECK(m.min_amplitude() == doctest::Approx(2.0));
  CHECK(DiscreteMeasure::empty(1).size() == 0);
}

TEST_CASE("separation examples and brute-force agreement") {
  const double tau = 0.37;
  const std::vector<double> xs{0.0, tau, 2 * tau};
  const std::vector<Complex> a{1.0, 1.0, 1.0};
  CHECK(separation(DiscreteMeasure::line(xs, a), EuclideanMetric{}) == doctest::Approx(tau));
  const double L = 4.0;
  const std::vector<double> ws{0.0, 0.9 * L};
  const std::vector<Complex> b{1.0, 1.0};
  CHECK(separation(DiscreteMeasure::line(ws, b), WrappedMetric{L}) == doctest::Approx(0.1 * L));

  const std::vector<double> one{0.0};
  const std::vector<Complex> c1{1.0};
  CHECK_THROWS_AS(separation(DiscreteMeasure::line(one, c1), EuclideanMetric{}), DomainError);
  CHECK_THROWS_AS(separation(DiscreteMeasure(2, {{0, 0}, {1, 1}}, {1.0, 1.0}), WrappedMetric{L}), DomainError);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> p;
    for (int j = 0; j < 5; ++j) p.push_back(u(rng));
    const std::vector<Complex> amps(5, 1.0);
    const auto m = DiscreteMeasure::line(p, amps);
    CHECK(separation(m, EuclideanMetric{}) == doctest::Approx(oracle::min_pairwise(p)).epsilon(1e-14));
    CHECK(separation(m, WrappedMetric{7.0}) == doctest::Approx(oracle::min_pairwise(p, 7.0)).epsilon(1e-12));
  }
}

TEST_CASE("illumination matrix evaluations") {
  const std::vector<double> xs{-0.4, 0.3, 1.1};
  const std::vector<Complex> a{1.0, Complex(0, 1), 2.0};
  const auto mu = DiscreteMeasure::line(xs, a);
  const auto ones = build_illumination_matrix(IlluminationSet::constant(3), mu);
  CHECK(ones.rows() == 3);
  CHECK(ones.cols() == 3);
  CHECK((ones.array() == Complex(1.0, 0.0)).all());

  Sinusoid s1{1.0, 0.5, {2.0, 0.0}, 0.3};
  Sinusoid s2{Complex(0.2, 0.1), Complex(0, 1), {-1.5, 0.0}, -1.0};
  const IlluminationSet set({s1, s2});
  const auto m = build_illumination_matrix(set, mu);
  for (std::size_t j = 0; j < xs.size(); ++j) {
    const Complex e1 = 1.0 + 0.5 * std::cos(2.0 * xs[j] + 0.3);
    const Complex e2 = Complex(0.2, 0.1) + Complex(0, 1) * std::cos(-1.5 * xs[j] - 1.0);
    CHECK(std::abs(m(0, j) - e1) < 1e-15);
    CHECK(std::abs(m(1, j) - e2) < 1e-15);
  }

  const std::vector<double> single{0.25};
  const std::vector<Complex> unit{1.0};
  const auto m11 = build_illumination_matrix(IlluminationSet({s1}), DiscreteMeasure::line(single, unit));
  CHECK(m11.rows() == 1);
  CHECK(m11.cols() == 1);
  CHECK(m11(0, 0) == evaluate(Pattern{s1}, {0.25, 0.0}));
  CHECK_THROWS_AS(IlluminationSet(std::vector<Pattern>{}), DomainError);
}

TEST_CASE("illumination matrix commutes with column permutation") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto speckle = SpeckleGrid::random(2, {-2, -2}, 4.0, 0.1, 3.0, 6, 17);
  Sinusoid s{1.0, 1.0, {1.0, 2.0}, 0.0};
  const IlluminationSet set({speckle, s});
  std::vector<Location> locs;
  std::vector<Complex> amps;
  for (int j = 0; j < 4; ++j) {
    locs.push_back({3.8 * u(rng) - 1.9, 3.8 * u(rng) - 1.9});
    amps.push_back(1.0 + u(rng));
  }
  const DiscreteMeasure mu(2, locs, amps);
  const std::vector<std::size_t> order{2, 0, 3, 1};
  const auto a = build_illumination_matrix(set, mu);
  const auto b = build_illumination_matrix(set, mu.permuted(order));
  for (std::size_t j = 0; j < order.size(); ++j) CHECK((b.col(j) - a.col(order[j])).norm() == 0.0);
}

TEST_CASE("speckle grid interpolation and domain") {
  // bilinear interpolation reproduces affine fields exactly
  std::vector<Complex> vals;
  for (int iy = 0; iy < 4; ++iy)
    for (int ix = 0; ix < 5; ++ix) vals.push_back(Complex(1.0 + 0.5 * ix - 0.25 * iy, 0.1 * ix));
  const SpeckleGrid g(2, {1.0, -1.0}, 0.5, 5, 4, vals);
  const Location y{1.6, -0.3};
  const double fx = (y.x - 1.0) / 0.5, fy = (y.y + 1.0) / 0.5;
  CHECK(std::abs(g(y) - Complex(1.0 + 0.5 * fx - 0.25 * fy, 0.1 * fx)) < 1e-14);
  CHECK_THROWS_AS(g({0.9, 0.0}), OutOfDomainError);
  CHECK_THROWS_AS(g({1.5, 0.6}), OutOfDomainError);
  const std::vector<double> outside{5.0};
  const std::vector<Complex> one{1.0};
  CHECK_THROWS_AS(build_illumination_matrix(IlluminationSet({g}), DiscreteMeasure::line(outside, one)),
                  OutOfDomainError);

  const auto r = SpeckleGrid::random(1, {0, 0}, 3.0, 0.05, 4.0, 5, 9);
  CHECK(r.max_modulus() <= 1.0 + 1e-12);
  CHECK(r.max_modulus() >= 1.0 - 1e-12);
}

TEST_CASE("measure JSON round trip is bit exact") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int dim = 1; dim <= 2; ++dim) {
    std::vector<Location> locs;
    std::vector<Complex> amps;
    for (int j = 0; j < 6; ++j) {
      locs.push_back({g(rng) / 3.0, dim == 2 ? g(rng) * 1e-7 : 0.0});
      amps.emplace_back(g(rng), g(rng));
    }
    const DiscreteMeasure m(dim, locs, amps);
    const auto back = measure_from_json(Json::parse(to_json(m).dump()));
    CHECK(back.dim() == dim);
    CHECK(back.locations() == m.locations());
    CHECK(back.amplitudes() == m.amplitudes());
  }
  CHECK_THROWS_AS(measure_from_json(Json{{"dim", 1}}), DomainError);
}

TEST_CASE("speckle JSON round trip is bit exact") {
  const auto s = SpeckleGrid::random(2, {-1.0, 0.5}, 2.0, 0.125, 5.0, 4, 99);
  const auto back = speckle_from_json(Json::parse(to_json(s).dump()));
  CHECK(back.values() == s.values());
  CHECK(back.pitch() == s.pitch());
  CHECK(back.origin() == s.origin());
  CHECK(back.nx() == s.nx());
  CHECK(back.ny() == s.ny());
}
