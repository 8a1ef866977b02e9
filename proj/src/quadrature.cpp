#include "minsurf/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "minsurf/error.hpp"

namespace minsurf {

namespace {
// 8-point Gauss-Legendre on [-1, 1].
constexpr double kGlNode[8] = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
constexpr double kGlWeight[8] = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

void check_cycle(const Cycle& c) {
  if (c.pts.size() < 2) fail(ErrorKind::config, "cycle needs at least one segment");
  if (c.pts.front() != c.pts.back()) fail(ErrorKind::config, "cycle is not closed");
}
}  // namespace

cplx contour_integral(const std::function<cplx(cplx)>& f, const Cycle& cycle) {
  check_cycle(cycle);
  cplx acc(0.0);
  for (std::size_t s = 0; s + 1 < cycle.pts.size(); ++s) {
    cplx a = cycle.pts[s], b = cycle.pts[s + 1];
    cplx mid = 0.5 * (a + b), half = 0.5 * (b - a);
    cplx seg(0.0);
    for (int q = 0; q < 8; ++q) seg += kGlWeight[q] * f(mid + kGlNode[q] * half);
    acc += seg * half;
  }
  return acc;
}

cplx contour_integral_trapezoid(const std::function<cplx(cplx)>& f, const Cycle& cycle) {
  check_cycle(cycle);
  cplx acc(0.0);
  for (std::size_t s = 0; s + 1 < cycle.pts.size(); ++s) {
    cplx a = cycle.pts[s], b = cycle.pts[s + 1];
    acc += 0.5 * (f(a) + f(b)) * (b - a);
  }
  return acc;
}

cplx ring_integral(const std::function<cplx(cplx)>& f, double radius, int nodes) {
  if (nodes < 3) fail(ErrorKind::config, "ring integral needs at least 3 nodes");
  // sum f(z_j) * i * z_j * (2*pi/n): the periodic trapezoid rule for
  // z = radius * e^{i t}.
  const double two_pi = 2.0 * std::numbers::pi;
  cplx acc(0.0);
  for (int j = 0; j < nodes; ++j) {
    cplx z = std::polar(radius, two_pi * static_cast<double>(j) / nodes);
    acc += f(z) * z;
  }
  return acc * cplx(0.0, two_pi / static_cast<double>(nodes));
}

cplx integrate_series_along_path(const LaurentSeries& f, const std::vector<cplx>& pts) {
  if (pts.size() < 2) return cplx(0.0);
  LaurentSeries F = f.antiderivative_dropping_residue();
  cplx res = f.residue();
  cplx acc = F.eval(pts.back()) - F.eval(pts.front());
  if (res != cplx(0.0)) {
    double turn = 0.0;
    for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
      if (pts[s] == cplx(0.0) || pts[s + 1] == cplx(0.0))
        fail(ErrorKind::config, "path touches the origin");
      turn += std::arg(pts[s + 1] / pts[s]);
    }
    double stretch = std::log(std::abs(pts.back())) - std::log(std::abs(pts.front()));
    acc += res * cplx(stretch, turn);
  }
  return acc;
}

cplx integrate_series_over_cycle(const LaurentSeries& f, const Cycle& cycle) {
  check_cycle(cycle);
  return integrate_series_along_path(f, cycle.pts);
}

}  // namespace minsurf
