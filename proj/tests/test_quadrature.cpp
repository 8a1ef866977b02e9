#include <doctest.h>

#include <cmath>
#include <numbers>

#include "minsurf/quadrature.hpp"

using namespace minsurf;

namespace {
const double kPi = std::numbers::pi;
}

TEST_CASE("Gauss-Legendre contour rule hits the residue theorem") {
  Cycle c = circle_cycle(1.0, 64);
  cplx v = contour_integral([](cplx z) { return 1.0 / z; }, c);
  CHECK(std::abs(v - cplx(0.0, 2.0 * kPi)) < 1e-10);
  cplx w = contour_integral([](cplx z) { return z * z; }, c);
  CHECK(std::abs(w) < 1e-12);
}

TEST_CASE("vertex trapezoid converges at second order on the residue mode") {
  // Closed-form error of the polyline trapezoid on f = 1/z over the n-gon:
  //   err(n) = 2*pi - n*sin(2*pi/n),  so err(64)/err(128) -> 4.
  auto err = [](int n) {
    Cycle c = circle_cycle(1.0, n);
    cplx v = contour_integral_trapezoid([](cplx z) { return 1.0 / z; }, c);
    return std::abs(v - cplx(0.0, 2.0 * kPi));
  };
  double e64 = err(64), e128 = err(128);
  CHECK(e64 == doctest::Approx(2.0 * kPi - 64.0 * std::sin(2.0 * kPi / 64.0)).epsilon(1e-6));
  CHECK(e64 / e128 == doctest::Approx(4.0).epsilon(0.01));
}

TEST_CASE("ring rule is spectrally exact on Laurent modes") {
  cplx v = ring_integral([](cplx z) { return 3.0 / z + 5.0 * z * z; }, 2.0, 64);
  CHECK(std::abs(v - cplx(0.0, 6.0 * kPi)) < 1e-12);
}

TEST_CASE("series path integral tracks the logarithm branch") {
  LaurentSeries f(-1, {cplx(2.0), cplx(1.0)});  // 2/z + 1
  // Upper half circle from 1 to -1.
  std::vector<cplx> pts;
  for (int j = 0; j <= 128; ++j) pts.push_back(std::polar(1.0, kPi * j / 128.0));
  cplx v = integrate_series_along_path(f, pts);
  // integral = 2*(i*pi) + (-1 - 1)
  CHECK(std::abs(v - cplx(-2.0, 2.0 * kPi)) < 1e-12);

  // Lower half circle gains the opposite branch.
  std::vector<cplx> down;
  for (int j = 0; j <= 128; ++j) down.push_back(std::polar(1.0, -kPi * j / 128.0));
  cplx w = integrate_series_along_path(f, down);
  CHECK(std::abs(w - cplx(-2.0, -2.0 * kPi)) < 1e-12);
}

TEST_CASE("series cycle integral equals 2 pi i times the residue") {
  LaurentSeries f(-2, {cplx(4.0), cplx(0.0, 3.0), cplx(7.0), cplx(1.0)});
  Cycle c = circle_cycle(0.8, 256);
  cplx v = integrate_series_over_cycle(f, c);
  CHECK(std::abs(v - cplx(0.0, 2.0 * kPi) * f.residue()) < 1e-12);
}

TEST_CASE("quadrature and exact primitive agree on a mixed series") {
  LaurentSeries f(-3, {cplx(1.0, 2.0), cplx(0.5), cplx(-2.0, 1.0), cplx(3.0),
                       cplx(0.0), cplx(1.0), cplx(0.25, -0.5)});
  Cycle c = circle_cycle(1.3, 512);
  cplx gl = contour_integral([&](cplx z) { return f.eval(z); }, c);
  cplx exact = integrate_series_over_cycle(f, c);
  CHECK(std::abs(gl - exact) < 1e-11);
}
