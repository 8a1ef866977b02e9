#pragma once

#include <functional>

#include "minsurf/domain.hpp"

namespace minsurf {

// Contour integral of f(z) dz over a closed polyline, Gauss-Legendre with 8
// nodes per segment.  For analytic integrands on smooth contours the error is
// dominated by the polyline's approximation of the intended curve, not by the
// per-segment rule.
cplx contour_integral(const std::function<cplx(cplx)>& f, const Cycle& cycle);

// Same contour, vertex trapezoid rule: (f(a)+f(b))/2 * (b-a) per segment.
// Second-order in the segment length; kept as the comparison rule.
cplx contour_integral_trapezoid(const std::function<cplx(cplx)>& f, const Cycle& cycle);

// Equispaced-ring trapezoid of f(z) dz on |z| = radius with n nodes.  On a
// Laurent mode z^k this equals 2*pi*i exactly for k = -1 and 0 for other k
// with k != -1 (mod n), so it is machine-exact on series of width < n.
cplx ring_integral(const std::function<cplx(cplx)>& f, double radius, int nodes);

// Integral of a Laurent series along a polyline, via the exact primitive plus
// the residue term a_{-1} * (log|.| difference + i * accumulated turning).
// The winding is accumulated per segment, so no segment may cross the origin.
cplx integrate_series_along_path(const LaurentSeries& f, const std::vector<cplx>& pts);

cplx integrate_series_over_cycle(const LaurentSeries& f, const Cycle& cycle);

}  // namespace minsurf
