#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ideal/normal.hpp"

using namespace ideal;

TEST_CASE("norm_cdf matches high-precision reference values") {
  CHECK(norm_cdf(0.0) == 0.5);
  // reference values computed with 30-digit arithmetic
  CHECK_THAT(norm_cdf(-0.3),
             Catch::Matchers::WithinAbs(0.382088577811047363, 1e-14));
  CHECK_THAT(norm_cdf(1.0),
             Catch::Matchers::WithinAbs(0.841344746068542949, 1e-14));
  CHECK_THAT(norm_cdf(-6.0),
             Catch::Matchers::WithinRel(9.86587645037698e-10, 1e-11));
}

TEST_CASE("norm_cdf symmetry and monotonicity") {
  for (double x : {-8.0, -3.2, -0.7, 0.0, 0.4, 2.9, 7.7}) {
    CHECK_THAT(norm_cdf(x) + norm_cdf(-x), Catch::Matchers::WithinAbs(1.0, 1e-15));
  }
  double prev = 0.0;
  for (double x = -10.0; x <= 10.0; x += 0.25) {
    const double p = norm_cdf(x);
    CHECK(p >= prev);
    prev = p;
  }
}

TEST_CASE("log_norm_cdf agrees with direct evaluation in the body") {
  for (double x : {-5.0, -1.0, 0.0, 1.3, 4.0}) {
    CHECK_THAT(log_norm_cdf(x),
               Catch::Matchers::WithinAbs(std::log(norm_cdf(x)), 1e-13));
  }
}

TEST_CASE("log_norm_cdf tail values and continuity at the branch point") {
  CHECK_THAT(log_norm_cdf(-10.0),
             Catch::Matchers::WithinRel(-53.2312851505124706, 1e-12));
  CHECK_THAT(log_norm_cdf(-40.0),
             Catch::Matchers::WithinRel(-804.608442013753788, 1e-10));
  const double left = log_norm_cdf(std::nextafter(-37.0, -38.0));
  const double right = log_norm_cdf(-37.0);
  CHECK_THAT(left, Catch::Matchers::WithinRel(right, 1e-9));
}

TEST_CASE("log_norm_cdf is finite for any finite argument") {
  for (double x : {-1e4, -1e8, -1e154, -1e300, -1.7e308, 1e300}) {
    CAPTURE(x);
    CHECK(std::isfinite(log_norm_cdf(x)));
  }
}

TEST_CASE("inverse_norm_cdf round-trips through the CDF") {
  for (double p : {1e-300, 1e-100, 1e-12, 1e-4, 0.2, 0.5, 0.8, 0.999,
                   1.0 - 1e-10}) {
    CAPTURE(p);
    const double x = inverse_norm_cdf(p);
    if (p < 0.5) {
      CHECK_THAT(std::log(norm_cdf(x)), Catch::Matchers::WithinRel(std::log(p), 1e-9));
    } else {
      CHECK_THAT(norm_cdf(x), Catch::Matchers::WithinAbs(p, 1e-12));
    }
  }
  CHECK(inverse_norm_cdf(0.5) == 0.0);
}

TEST_CASE("inverse_norm_cdf rejects arguments outside [0,1]") {
  CHECK_THROWS_AS(inverse_norm_cdf(-0.1), DomainError);
  CHECK_THROWS_AS(inverse_norm_cdf(1.5), DomainError);
  CHECK(std::isinf(inverse_norm_cdf(0.0)));
  CHECK(std::isinf(inverse_norm_cdf(1.0)));
}
