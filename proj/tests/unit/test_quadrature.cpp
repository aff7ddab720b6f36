#include <cmath>
#include <numbers>

#include "doctest.h"

#include "eprsteer/quadrature.hpp"

using namespace eprsteer;
using doctest::Approx;

TEST_CASE("Gauss-Legendre rule is exact for low-degree polynomials") {
  const auto& rule = quad::GaussLegendre<16>::instance();
  double wsum = 0.0;
  for (double w : rule.weights()) wsum += w;
  CHECK(wsum == Approx(2.0).epsilon(1e-15));
  for (int deg = 0; deg <= 31; ++deg) {
    const double exact = deg % 2 == 1 ? 0.0 : 2.0 / (deg + 1);
    const double got = rule.integrate([deg](double x) { return std::pow(x, deg); }, -1.0, 1.0);
    CHECK(got == Approx(exact).epsilon(1e-13));
  }
}

TEST_CASE("adaptive integration of a narrow Gaussian") {
  const double s = 1e-3;
  const auto g = [s](double x) {
    return std::exp(-0.5 * x * x / (s * s)) / (s * std::sqrt(2.0 * std::numbers::pi));
  };
  CHECK(quad::integrate(g, -1.0, 1.0) == Approx(1.0).epsilon(1e-10));
  CHECK(quad::integrate(g, 0.0, 1.0) == Approx(0.5).epsilon(1e-10));
}

TEST_CASE("breakpoints handle a jump") {
  const auto step = [](double x) { return x < 0.3 ? 1.0 : 0.0; };
  CHECK(quad::integrate(step, 0.0, 1.0, std::vector<double>{0.3}) == Approx(0.3).epsilon(1e-14));
  CHECK(quad::integrate([](double x) { return std::abs(x); }, -1.0, 2.0, std::vector<double>{0.0}) ==
        Approx(2.5).epsilon(1e-14));
}
