#include <doctest.h>

#include <numbers>
#include <random>

#include "msr/errors.hpp"
#include "msr/forward_model.hpp"
#include "msr/incoherence.hpp"
#include "msr/recovery.hpp"

using namespace msr;

namespace {

constexpr double kPi = std::numbers::pi;

IlluminationSet two_sinusoids(double k, double phase) {
  Sinusoid a{1.0, 1.0, {k, 0.0}, phase};
  Sinusoid b{1.0, 1.0, {k, 0.0}, phase + kPi};
  return IlluminationSet({a, b});
}

RecoveryProblem line_problem(const DiscreteMeasure& mu, const IlluminationSet& illum, double sigma,
                             std::uint64_t seed, Interval iv, double pitch, int max_k,
                             IlluminationMode mode = IlluminationMode::known, bool noisy = true) {
  RecoveryProblem p;
  p.measurements = fourier_transform(mu, illum, FrequencyGrid::uniform(1.0, 40));
  if (noisy) p.measurements = add_noise(p.measurements, sigma, NoiseModel::gaussian_capped, seed);
  p.sigma = sigma;
  p.illum_mode = mode;
  p.patterns = illum;
  p.interval = iv;
  p.grid_pitch = pitch;
  p.max_sparsity = max_k;
  return p;
}

}  // namespace

TEST_CASE("noiseless single atom is located after refinement") {
  const std::vector<double> x{0.4321};
  const std::vector<Complex> a{Complex(1.0, 0.5)};
  const auto mu = DiscreteMeasure::line(x, a);
  auto p = line_problem(mu, IlluminationSet::constant(1), 1e-6, 0, {-2.0, 2.0}, 0.05, 2, IlluminationMode::known,
                        false);
  const auto r = solve_l0(p);
  REQUIRE(r.feasible);
  CHECK(r.sparsity == 1);
  CHECK(r.measure.size() == 1);
  CHECK(std::abs(r.measure.location(0).x - x[0]) < 1e-8);
  CHECK(std::abs(r.measure.amplitude(0) - a[0]) < 1e-6);
  for (double res : r.per_frame_residuals) CHECK(res < 1e-6);
}

TEST_CASE("two atoms above threshold with two incoherent frames") {
  const double omega = 1.0, sigma = 1e-3;
  const double d = 1.2 * kPi / omega;
  const std::vector<double> x{-d / 2, d / 2};
  const std::vector<Complex> a{1.0, Complex(0.0, -1.2)};
  const auto mu = DiscreteMeasure::line(x, a);
  const auto illum = two_sinusoids(kPi / (2 * d), 0.3);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto p = line_problem(mu, illum, sigma, seed, {-kPi, kPi}, d / 8, 2);
    const auto r = solve_l0(p);
    REQUIRE(r.feasible);
    CHECK(r.sparsity == 2);
    const auto m = match_supports(mu, r.measure, EuclideanMetric{});
    CHECK(m.max_deviation < d / 2);
    for (double res : r.per_frame_residuals) CHECK(res < sigma);
    for (const auto& t : r.refinement_trace) CHECK(t.residual_after <= t.residual_before + 1e-15);
    const auto cert = certify_against_theorem(mu, r.measure, build_illumination_matrix(illum, mu), sigma, omega,
                                              TheoremMode::wrapped_1d);
    if (!cert.vacuous) CHECK(cert.holds);
  }
}

TEST_CASE("infeasible result carries the sentinel sparsity") {
  const std::vector<double> x{-1.5, 0.0, 1.5};
  const std::vector<Complex> a{1.0, 1.0, 1.0};
  auto p = line_problem(DiscreteMeasure::line(x, a), IlluminationSet::constant(1), 1e-4, 1, {-3.0, 3.0}, 0.25, 1);
  const auto r = solve_l0(p);
  CHECK_FALSE(r.feasible);
  CHECK(r.sparsity == 2);
  CHECK(r.measure.empty());
  p.max_sparsity = -1;
  CHECK_THROWS_AS(solve_l0(p), DomainError);
}

TEST_CASE("sparsity never grows with sigma") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int trial = 0; trial < 4; ++trial) {
    const std::vector<double> x{u(rng), u(rng) + 4.0};
    const std::vector<Complex> a{1.0, 0.8};
    const auto mu = DiscreteMeasure::line(x, a);
    int prev = 100;
    for (double sigma : {1e-3, 1e-2, 0.1, 0.5, 2.0}) {
      RecoveryProblem p = line_problem(mu, IlluminationSet::constant(1), 0.0, 0, {-2.0, 6.0}, 0.25, 3,
                                       IlluminationMode::known, false);
      p.measurements = add_noise(p.measurements, 1e-3, NoiseModel::gaussian_capped, 3);
      p.sigma = sigma;
      const auto r = solve_l0(p);
      CHECK(r.sparsity <= prev);
      prev = r.sparsity;
    }
    CHECK(prev == 0);
  }
}

TEST_CASE("free per-frame fits never do worse than shared amplitudes") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const std::vector<double> x{-0.9, 1.1};
  const std::vector<Complex> a{1.0, Complex(0.3, 1.0)};
  const auto illum = two_sinusoids(0.7, 0.1);
  auto p = line_problem(DiscreteMeasure::line(x, a), illum, 1e-2, 2, {-3.0, 3.0}, 0.1, 2);
  for (int trial = 0; trial < 50; ++trial) {
    const std::vector<Location> s{{u(rng), 0.0}, {u(rng) + 0.01, 0.0}};
    const auto known = fit_support_ls(p, s, IlluminationMode::known);
    const auto free = fit_support_ls(p, s, IlluminationMode::unknown);
    if (!known.ok || !free.ok) continue;
    for (std::size_t t = 0; t < 2; ++t) CHECK(free.residuals[t] <= known.residuals[t] + 1e-12);
    const auto mm = fit_support_minimax(p, s, IlluminationMode::known);
    if (mm.ok) CHECK(mm.max_residual <= known.max_residual + 1e-9);
  }
}

TEST_CASE("solver never undercuts the true sparsity above threshold") {
  const double omega = 1.0, sigma = 1e-3;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const double d = (0.9 + 0.5 * u(rng)) * kPi / omega;
    const std::vector<double> x{-d / 2, d / 2};
    const std::vector<Complex> a{std::polar(1.0 + 0.5 * u(rng), 6 * u(rng)), std::polar(1.0, 6 * u(rng))};
    const auto mu = DiscreteMeasure::line(x, a);
    const auto illum = two_sinusoids(kPi / (2 * d), 6 * u(rng));
    auto p = line_problem(mu, illum, sigma, trial, {-kPi, kPi}, d / 8, 2);
    p.max_sparsity = 1;
    CHECK_FALSE(solve_l0(p).feasible);
  }
}

TEST_CASE("support matching") {
  const std::vector<double> x{0.0, 1.0, 3.0};
  const std::vector<Complex> a{1.0, 1.0, 1.0};
  const auto mu = DiscreteMeasure::line(x, a);
  const auto id = match_supports(mu, mu, EuclideanMetric{});
  CHECK(id.permutation == std::vector<std::size_t>{0, 1, 2});
  CHECK(id.max_deviation == 0.0);
  const std::vector<double> swapped{1.0, 0.0, 3.0};
  const auto sw = match_supports(mu, DiscreteMeasure::line(swapped, a), EuclideanMetric{});
  CHECK(sw.permutation == std::vector<std::size_t>{1, 0, 2});
  CHECK(sw.max_deviation == 0.0);
  const std::vector<double> jit{0.01, 0.97, 3.05};
  const auto j = match_supports(mu, DiscreteMeasure::line(jit, a), EuclideanMetric{});
  CHECK(j.deviations[0] == doctest::Approx(0.01));
  CHECK(j.deviations[1] == doctest::Approx(0.03));
  CHECK(j.deviations[2] == doctest::Approx(0.05));
  const std::vector<double> two{0.0, 1.0};
  CHECK_THROWS_AS(match_supports(mu, DiscreteMeasure::line(two, std::vector<Complex>{1.0, 1.0}), EuclideanMetric{}),
                  DomainError);
  // wrapped metric sees across the period
  const std::vector<double> w{9.9};
  const std::vector<Complex> one{1.0};
  const std::vector<double> w0{0.0};
  CHECK(match_supports(DiscreteMeasure::line(w0, one), DiscreteMeasure::line(w, one), WrappedMetric{10.0})
            .max_deviation == doctest::Approx(0.1));
}

TEST_CASE("certificates") {
  const double omega = 1.0;
  const double d = 2.0 * kPi;
  const std::vector<double> x{0.0, d};
  const std::vector<Complex> a{1.0, 1.0};
  const auto mu = DiscreteMeasure::line(x, a);
  Eigen::MatrixXcd i2 = Eigen::MatrixXcd::Identity(2, 2);
  const auto exact = certify_against_theorem(mu, mu, i2, 1e-4, omega, TheoremMode::euclidean_1d);
  CHECK_FALSE(exact.vacuous);
  CHECK(exact.holds);
  CHECK(exact.slack == doctest::Approx(exact.error_bound));
  CHECK(exact.sigma_inf_min == doctest::Approx(1.0).epsilon(1e-6));

  const std::vector<double> close{0.0, 0.01};
  const auto sub = certify_against_theorem(DiscreteMeasure::line(close, a), DiscreteMeasure::line(close, a), i2,
                                           1e-4, omega, TheoremMode::euclidean_1d);
  CHECK(sub.vacuous);
  CHECK_THROWS_AS(certify_against_theorem(mu, mu, Eigen::MatrixXcd::Identity(3, 3), 1e-4, omega,
                                          TheoremMode::euclidean_1d),
                  DomainError);
  CHECK_THROWS_AS(certify_against_theorem(mu, mu, i2, 1e-4, omega, TheoremMode::planar_2d), DomainError);
}

TEST_CASE("projection of planar problems") {
  RecoveryProblem p;
  const DiscreteMeasure axis(2, {{-0.5, 0.0}, {0.7, 0.0}}, {1.0, Complex(0, 1)});
  const auto line = FrequencyGrid::uniform(1.0, 16);
  const auto grid2 = FrequencyGrid::join({FrequencyGrid::along(line, {1.0, 0.0}), FrequencyGrid::polar(1.0, 3, 5)});
  p.measurements = fourier_transform(axis, IlluminationSet::constant(1), grid2);
  p.measurements.sigma = 0.1;
  p.disk = {{0.0, 0.0}, 2.0};
  const auto px = project_problem_1d(p, {1.0, 0.0}, line);
  const auto direct = fourier_transform(DiscreteMeasure::line(std::vector<double>{-0.5, 0.7},
                                                              std::vector<Complex>{1.0, Complex(0, 1)}),
                                        IlluminationSet::constant(1), line);
  CHECK((px.measurements.frames[0] - direct.frames[0]).norm() < 1e-12);
  CHECK(px.interval.lo == doctest::Approx(-2.0));
  CHECK(px.interval.hi == doctest::Approx(2.0));
  CHECK(project_locations(axis.locations(), {1.0, 0.0}) == std::vector<double>{-0.5, 0.7});
  for (double v : project_locations(axis.locations(), {0.0, 1.0})) CHECK(v == 0.0);
  CHECK_THROWS_AS(project_problem_1d(p, {0.0, 1.0}, line), DomainError);

  // fresh evaluation along an arbitrary direction
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const DiscreteMeasure mu(2, {{u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)}},
                             {Complex(u(rng), 1.0), 1.0, Complex(0.5, u(rng))});
    Sinusoid s{1.0, 0.5, {u(rng), u(rng)}, u(rng)};
    const IlluminationSet illum({s});
    const double ang = 3.0 * u(rng);
    const Location v{std::cos(ang), std::sin(ang)};
    RecoveryProblem q;
    q.measurements = fourier_transform(mu, illum, FrequencyGrid::polar(1.0, 2, 3));
    q.disk = {{0.0, 0.0}, 3.0};
    const auto proj = project_problem_1d(q, v, line, [&](std::size_t, const FrequencyGrid& g) {
      return fourier_transform(mu, illum, g).frames[0];
    });
    const auto eff = build_illumination_matrix(illum, mu);
    std::vector<Complex> amps;
    for (std::size_t j = 0; j < mu.size(); ++j) amps.push_back(mu.amplitude(j) * eff(0, j));
    const auto pm = DiscreteMeasure::line(project_locations(mu.locations(), v), amps);
    const auto ref = fourier_transform(pm, IlluminationSet::constant(1), line).frames[0];
    CHECK((proj.measurements.frames[0] - ref).cwiseAbs().maxCoeff() < 1e-12);
  }
}
