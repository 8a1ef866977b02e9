#include <doctest.h>

#include <cmath>
#include <numbers>

#include "minsurf/error.hpp"
#include "minsurf/laurent.hpp"

using namespace minsurf;

namespace {
double dist(cplx a, cplx b) { return std::abs(a - b); }
}

TEST_CASE("evaluation matches hand-computed values") {
  // f(z) = 2/z + 3 + z^2
  LaurentSeries f(-1, {cplx(2.0), cplx(3.0), cplx(0.0), cplx(1.0)});
  CHECK(dist(f.eval(2.0), cplx(8.0)) < 1e-14);
  // f(1+i) = (1-i) + 3 + 2i = 4+i
  CHECK(dist(f.eval(cplx(1.0, 1.0)), cplx(4.0, 1.0)) < 1e-14);
  CHECK(f.min_degree() == -1);
  CHECK(f.max_degree() == 2);
  CHECK(f.has_negative_powers());
}

TEST_CASE("evaluation with positive lowest degree") {
  // f(z) = z^2 - z^3 stored with lo = 2
  LaurentSeries f(2, {cplx(1.0), cplx(-1.0)});
  CHECK(dist(f.eval(cplx(2.0)), cplx(-4.0)) < 1e-14);
  CHECK(dist(f.eval(cplx(0.0)), cplx(0.0)) < 1e-14);
}

TEST_CASE("derivative and primitive") {
  LaurentSeries f(-1, {cplx(2.0), cplx(3.0), cplx(0.0), cplx(1.0)});
  LaurentSeries d = f.derivative();
  // f' = -2/z^2 + 2z
  CHECK(dist(d.coeff(-2), cplx(-2.0)) < 1e-15);
  CHECK(dist(d.coeff(0), cplx(0.0)) < 1e-15);
  CHECK(dist(d.coeff(1), cplx(2.0)) < 1e-15);

  CHECK(dist(f.residue(), cplx(2.0)) < 1e-15);
  LaurentSeries F = f.antiderivative_dropping_residue();
  // F = 3z + z^3/3, no log term stored
  CHECK(dist(F.coeff(1), cplx(3.0)) < 1e-15);
  CHECK(dist(F.coeff(3), cplx(1.0 / 3.0)) < 1e-15);
  CHECK(dist(F.coeff(0), cplx(0.0)) < 1e-15);
  // d/dz of the primitive returns f minus its residue mode
  LaurentSeries back = F.derivative();
  CHECK(dist(back.coeff(0), f.coeff(0)) < 1e-15);
  CHECK(dist(back.coeff(2), f.coeff(2)) < 1e-15);
  CHECK(dist(back.coeff(-1), cplx(0.0)) < 1e-15);
}

TEST_CASE("arithmetic") {
  LaurentSeries a(0, {cplx(1.0), cplx(1.0)});   // 1 + z
  LaurentSeries b(-1, {cplx(1.0), cplx(1.0)});  // 1/z + 1
  LaurentSeries p = a * b;
  CHECK(dist(p.coeff(-1), cplx(1.0)) < 1e-15);
  CHECK(dist(p.coeff(0), cplx(2.0)) < 1e-15);
  CHECK(dist(p.coeff(1), cplx(1.0)) < 1e-15);

  LaurentSeries s = a + b;
  CHECK(dist(s.coeff(-1), cplx(1.0)) < 1e-15);
  CHECK(dist(s.coeff(0), cplx(2.0)) < 1e-15);

  LaurentSeries sc = cplx(0.0, 2.0) * a;
  CHECK(dist(sc.coeff(1), cplx(0.0, 2.0)) < 1e-15);

  CHECK(dist(a.shifted(-3).coeff(-3), cplx(1.0)) < 1e-15);
}

TEST_CASE("set_coeff grows the window") {
  LaurentSeries f;
  f.set_coeff(3, cplx(1.0));
  f.set_coeff(-2, cplx(5.0));
  CHECK(f.min_degree() == -2);
  CHECK(f.max_degree() == 3);
  CHECK(dist(f.eval(cplx(1.0)), cplx(6.0)) < 1e-14);
}

TEST_CASE("trimmed drops negligible edges") {
  LaurentSeries f(-3, {cplx(1e-18), cplx(0.0), cplx(0.0), cplx(1.0), cplx(2.0), cplx(1e-18)});
  LaurentSeries t = f.trimmed(1e-12);
  CHECK(t.min_degree() == 0);
  CHECK(t.max_degree() == 1);
  CHECK(dist(t.coeff(0), cplx(1.0)) < 1e-15);
}

TEST_CASE("ring extraction recovers a Laurent polynomial exactly") {
  // f(z) = 3 z^-2 - i/z + 1/2 + 2 z^3
  LaurentSeries f(-2, {cplx(3.0), cplx(0.0, -1.0), cplx(0.5), cplx(0.0), cplx(0.0), cplx(2.0)});
  auto fn = [&](cplx z) { return f.eval(z); };
  LaurentSeries g = laurent_from_ring(fn, 0.7, -5, 5, 64);
  for (int k = -5; k <= 5; ++k) CHECK(dist(g.coeff(k), f.coeff(k)) < 1e-13);
}

TEST_CASE("ring extraction of exp(z) approximates Taylor coefficients") {
  LaurentSeries g = laurent_from_ring([](cplx z) { return std::exp(z); }, 1.0, 0, 8, 64);
  double fact = 1.0;
  for (int k = 0; k <= 4; ++k) {
    if (k > 0) fact *= k;
    CHECK(dist(g.coeff(k), cplx(1.0 / fact)) < 1e-12);
  }
}

TEST_CASE("ring extraction rejects a window wider than the sample count") {
  CHECK_THROWS_AS(laurent_from_ring([](cplx z) { return z; }, 1.0, -40, 40, 64),
                  const Error&);
}

TEST_CASE("eval_many parallel run is bitwise identical to serial") {
  LaurentSeries f(-4, std::vector<cplx>(11, cplx(0.0)));
  for (int k = -4; k <= 6; ++k)
    f.set_coeff(k, cplx(std::sin(1.0 + k), std::cos(2.0 * k)));
  std::vector<cplx> pts;
  for (int i = 0; i < 2000; ++i)
    pts.push_back(std::polar(0.5 + 0.001 * i, 0.01 * i));
  std::vector<cplx> a, b;
  f.eval_many(pts, a, Exec::serial);
  f.eval_many(pts, b, Exec::parallel);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].real() == b[i].real());
    CHECK(a[i].imag() == b[i].imag());
  }
}
