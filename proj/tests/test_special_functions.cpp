#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <boost/math/special_functions/expint.hpp>

#include "oracles.hpp"
#include "sgame/game_core.hpp"
#include "sgame/special_functions.hpp"

using namespace sgame;

TEST_CASE("E1 reference values") {
  CHECK(std::abs(exp_integral_e1(1.0) - 0.2193839344) < 1e-9);
  CHECK(std::abs(exp_integral_e1(10.0) - 4.15697e-6) < 1e-10);
  CHECK(std::abs(exp_integral_e1(1.0) - oracle::e1_quadrature(1.0)) < 1e-12);
}

TEST_CASE("E1 asymptotics") {
  const double x = 50.0;
  CHECK(std::abs(exp_integral_e1(x) * x * std::exp(x) - 1.0) < 0.025);
  CHECK(std::abs(scaled_exp_integral_e1(1e6) * 1e6 - 1.0) < 1e-5);
}

TEST_CASE("E1 domain") {
  CHECK_THROWS_AS(exp_integral_e1(0.0), DomainError);
  CHECK_THROWS_AS(exp_integral_e1(-1.0), DomainError);
}

TEST_CASE("E1 against quadrature and boost on a log grid") {
  for (int i = 0; i < 200; ++i) {
    const double x = std::pow(10.0, -4.0 + (std::log10(50.0) + 4.0) * i / 199.0);
    const double e1 = exp_integral_e1(x);
    CHECK(std::abs(e1 - oracle::e1_quadrature(x)) < 1e-10);
    CHECK(std::abs(e1 - boost::math::expint(1, x)) < 1e-12);
    CHECK(std::abs(scaled_exp_integral_e1(x) - std::exp(x) * e1) <= 1e-12 * std::exp(x) * e1);
  }
}
