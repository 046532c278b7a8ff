#include <doctest.h>

#include <random>

#include "msr/errors.hpp"
#include "msr/incoherence.hpp"
#include "oracles.hpp"

using namespace msr;
using Complex = std::complex<double>;

namespace {

Eigen::MatrixXcd random_matrix(int t, int k, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXcd a(t, k);
  for (int r = 0; r < t; ++r)
    for (int c = 0; c < k; ++c) a(r, c) = Complex(g(rng), g(rng));
  return a;
}

void check_report(const Eigen::MatrixXcd& a, const IncoherenceReport& rep) {
  CHECK(rep.argmin.cwiseAbs().maxCoeff() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rep.value <= (a * rep.argmin).cwiseAbs().maxCoeff() + 1e-9);
  CHECK((a * rep.argmin).cwiseAbs().maxCoeff() == doctest::Approx(rep.value).epsilon(1e-6));
  CHECK(rep.value >= rep.lower_bound_svd - 1e-9);
}

}  // namespace

TEST_CASE("examples") {
  Eigen::MatrixXcd a(2, 2);
  a << 1.0, 0.7, 0.7, 1.0;
  const auto r = sigma_inf_min(a);
  CHECK(r.value == doctest::Approx(0.3).epsilon(1e-6));
  check_report(a, r);
  CHECK(to_string(r.method) == "convex-subproblems");

  for (int k = 1; k <= 4; ++k) {
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(k, k);
    CHECK(sigma_inf_min(id).value == doctest::Approx(1.0).epsilon(1e-6));
  }
  Eigen::MatrixXcd ones = Eigen::MatrixXcd::Ones(2, 2);
  CHECK(sigma_inf_min(ones).value < 1e-6);

  CHECK(sigma_inf_min_2x2(0.7) == doctest::Approx(0.3));
  CHECK(sigma_inf_min_2x2(0.0) == 1.0);
  CHECK(sigma_inf_min_2x2(1.0) == 0.0);
  CHECK_THROWS_AS(sigma_inf_min_2x2(1.5), DomainError);
  CHECK_THROWS_AS(sigma_inf_min_2x2(-0.1), DomainError);

  Eigen::MatrixXcd bad = a;
  bad(0, 1) = std::nan("");
  CHECK_THROWS_AS(sigma_inf_min(bad), DomainError);
  CHECK_THROWS_AS(sigma_inf_min(a, 0.0), DomainError);
}

TEST_CASE("closed form family for the symmetric 2x2") {
  for (int i = 0; i <= 10; ++i) {
    const double s = 0.1 * i;
    Eigen::MatrixXcd a(2, 2);
    a << 1.0, s, s, 1.0;
    CHECK(sigma_inf_min(a).value == doctest::Approx(sigma_inf_min_2x2(s)).epsilon(1e-6));
  }
}

TEST_CASE("agrees with the grid search oracle on random 3x3 matrices") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 5; ++trial) {
    const auto a = random_matrix(3, 3, rng);
    const auto rep = sigma_inf_min(a);
    check_report(a, rep);
    const double o = oracle::sigma_inf_min(a, 8, 24);
    CHECK(rep.value <= o + 1e-7);
    CHECK(std::abs(rep.value - o) < 1e-3);
  }
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = random_matrix(4, 2, rng);
    const double v = sigma_inf_min(a).value, o = oracle::sigma_inf_min(a);
    CHECK(v <= o + 1e-7);
    CHECK(std::abs(v - o) < 1e-5);
  }
}

TEST_CASE("singular value bound") {
  CHECK(svd_lower_bound(Eigen::MatrixXcd::Identity(2, 2)) == doctest::Approx(1.0 / std::sqrt(2.0)));
  Eigen::MatrixXcd a(2, 2);
  a << 1.0, 0.7, 0.7, 1.0;
  CHECK(svd_lower_bound(a) == doctest::Approx(0.3 / std::sqrt(2.0)));
  CHECK(svd_lower_bound(Eigen::MatrixXcd::Ones(1, 2)) == 0.0);

  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> dim(1, 4);
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = dim(rng);
    const int t = k + dim(rng) - 1;
    const auto m = random_matrix(t, k, rng);
    const auto rep = sigma_inf_min(m);
    REQUIRE(rep.lower_bound_svd <= rep.value + 1e-9);
  }
}

TEST_CASE("duplicate row") {
  Eigen::MatrixXcd a(2, 2);
  a << 1.0, 0.7, 0.7, 1.0;
  CHECK(duplicate_row_invariance_check(a));
  CHECK(duplicate_row_invariance_check(Eigen::MatrixXcd::Identity(3, 3)));
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 50; ++trial) CHECK(duplicate_row_invariance_check(random_matrix(3, 3, rng)));
}

TEST_CASE("scaling, permutation, phase and row append") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 2 * std::numbers::pi);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_matrix(3, 3, rng);
    const double v = sigma_inf_min(a).value;
    const Complex c = std::polar(0.3 + u(rng), u(rng));
    CHECK(sigma_inf_min(Eigen::MatrixXcd(c * a)).value == doctest::Approx(std::abs(c) * v).epsilon(1e-6));

    Eigen::MatrixXcd p(3, 3);
    p.col(0) = a.col(2);
    p.col(1) = a.col(0);
    p.col(2) = a.col(1);
    CHECK(std::abs(sigma_inf_min(p).value - v) < 2e-6);

    Eigen::MatrixXcd ph = a;
    ph.col(1) *= std::polar(1.0, u(rng));
    CHECK(std::abs(sigma_inf_min(ph).value - v) < 2e-6);

    Eigen::MatrixXcd more(4, 3);
    more.topRows(3) = a;
    more.row(3) = random_matrix(1, 3, rng);
    CHECK(sigma_inf_min(more).value >= v - 2e-6);
  }
}
