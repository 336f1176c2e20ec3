#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hypermoment/hermite.hpp"

using namespace hypermoment;

TEST_CASE("hermite values against closed forms") {
  for (double x : {-2.0, -0.3, 0.0, 0.7, 2.0, 3.5}) {
    CHECK(hermite_value(0, x) == 1.0);
    CHECK(hermite_value(1, x) == x);
    CHECK(hermite_value(2, x) == doctest::Approx(x * x - 1).epsilon(1e-14));
    CHECK(hermite_value(3, x) == doctest::Approx(x * x * x - 3 * x).epsilon(1e-14));
    CHECK(hermite_value(4, x) ==
          doctest::Approx(x * x * x * x - 6 * x * x + 3).epsilon(1e-14));
  }
  CHECK(hermite_value(1, 2.0) * hermite_value(2, 2.0) * hermite_value(3, 2.0) *
            hermite_value(4, 2.0) ==
        doctest::Approx(-60.0).epsilon(1e-14));
  CHECK_THROWS_AS(hermite_value(-1, 0.0), ValidationError);
}

TEST_CASE("hermite roots are accurate and symmetric") {
  for (int k = 1; k <= 12; ++k) {
    auto r = hermite_roots<double>(k);
    REQUIRE(static_cast<int>(r.size()) == k);
    double tol = 1e-12 * static_cast<double>(factorial(k));
    for (int i = 0; i < k; ++i) {
      CHECK(std::abs(hermite_value(k, r[i])) <= tol);
      CHECK(r[i] == -r[k - 1 - i]);
      if (i > 0) CHECK(r[i] > r[i - 1]);
    }
    if (k % 2 == 1) CHECK(r[k / 2] == 0.0);
  }
  CHECK_THROWS_AS(hermite_roots<double>(0), ValidationError);
}

TEST_CASE("root interlacing") {
  for (int k = 2; k <= 10; ++k) {
    auto lo = hermite_roots<double>(k - 1);
    auto hi = hermite_roots<double>(k);
    for (int i = 0; i < k - 1; ++i) {
      CHECK(hi[i] < lo[i]);
      CHECK(lo[i] < hi[i + 1]);
    }
  }
}

TEST_CASE("factor multiplicities sum to the system size") {
  for (int D = 1; D <= 4; ++D)
    for (int M = 3; M <= 8; ++M) {
      std::int64_t total = 0;
      for (int k = 1; k <= M + 1; ++k)
        total += static_cast<std::int64_t>(k) * hermite_factor_multiplicity(D, M, k);
      CHECK(total == binomial(M + D, D));
    }
  CHECK(hermite_factor_multiplicity(2, 3, 0) == 0);
  CHECK(hermite_factor_multiplicity(2, 3, 5) == 0);
  CHECK(hermite_factor_multiplicity(1, 3, 4) == 1);
  CHECK(hermite_factor_multiplicity(1, 3, 3) == 0);
  CHECK(hermite_factor_multiplicity(3, 3, 1) == 4);
}

TEST_CASE("characteristic polynomial against direct product") {
  for (int D : {1, 2, 3})
    for (int M : {3, 4}) {
      double u1 = 0.4, theta = 1.7;
      for (double lambda : {-2.0, -0.5, 0.9, 2.4, 5.0}) {
        double direct = 1.0;
        double s = (lambda - u1) / std::sqrt(theta);
        for (int k = 1; k <= M + 1; ++k) {
          auto m = hermite_factor_multiplicity(D, M, k);
          direct *= std::pow(hermite_value(k, s) * std::pow(theta, 0.5 * k),
                             static_cast<double>(m));
        }
        double got = char_poly_value(D, M, u1, theta, lambda);
        CHECK(got == doctest::Approx(direct).epsilon(1e-12));
      }
    }
}

TEST_CASE("characteristic polynomial vanishes at wave speeds") {
  int D = 2, M = 4;
  double u1 = -0.3, theta = 0.8;
  for (int k = 1; k <= M + 1; ++k)
    for (double c : hermite_roots<double>(k)) {
      double lambda = u1 + c * std::sqrt(theta);
      auto sl = char_poly_signed_log(D, M, u1, theta, lambda);
      double value = sl.sign == 0 ? 0.0 : sl.sign * std::exp(sl.log_abs);
      CHECK(std::abs(value) <= 1e-8);
    }
  CHECK_THROWS_AS(char_poly_value(2, 3, 0.0, -1.0, 0.0), ValidationError);
}
