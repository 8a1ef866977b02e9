#pragma once

#include <array>
#include <functional>
#include <optional>
#include <variant>

#include "minsurf/domain.hpp"
#include "minsurf/quadrature.hpp"

namespace minsurf {

// Nonvanishing function with explicit index around the origin:
// g(z) = z^winding * exp(log_part(z)).  The winding keeps single-valued data
// even when log g is not (the annulus case).
struct GaussExpForm {
  int winding = 0;
  LaurentSeries log_part;
  cplx eval(cplx z) const;
};

struct GaussRationalForm {
  LaurentSeries num, den;
  cplx eval(cplx z) const;
};

using GaussForm = std::variant<GaussExpForm, GaussRationalForm>;
cplx eval_gauss(const GaussForm& g, cplx z);

// Holomorphic coordinate differentials phi_j = (phi_j/dz) dz of a conformal
// immersion X = Re integral of phi.  The component series are the normative
// data; carrier records where they are meant to be used.
struct WeierstrassTriple {
  Domain carrier = Domain::disk(1.0);
  std::array<LaurentSeries, 3> phi;

  std::array<cplx, 3> eval(cplx z) const {
    return {phi[0].eval(z), phi[1].eval(z), phi[2].eval(z)};
  }
};

// Per-node samples of all three components (the hot kernel input).
std::array<std::vector<cplx>, 3> sample_triple(const WeierstrassTriple& t, const Grid& grid,
                                               Exec exec = Exec::serial);

// --- construction from (g, phi3) ------------------------------------------

struct GaussPair {
  GaussForm g;
  LaurentSeries phi3;
};

struct MaterializeOptions {
  int degree_cap = 192;       // initial half-width of the extraction window
  int max_degree_cap = 2048;  // growth limit before giving up
  int ring_samples = 4096;    // lower bound; raised to 4x the window width
  double residual_tol = 1e-9; // sup-norm check on verification rings
  Exec exec = Exec::serial;
};

struct MaterializeReport {
  int degree_used = 0;
  double tail = 0.0;       // largest relative coefficient near the window edge
  double residual = 0.0;   // sup |series - pointwise formula| / scale on rings
};

// Builds (phi1, phi2, phi3) = ((1/g - g)/2, i(1/g + g)/2, 1) * phi3 by
// sampling the closed forms on a ring and extracting Laurent windows.  The
// isotropy phi1^2 + phi2^2 + phi3^2 = 0 is inherited from the algebra, up to
// the reported truncation residual.  Throws `representation` when the data
// cannot be represented on the carrier (pole at a disk centre, residual
// stuck above tolerance).
WeierstrassTriple triple_from_gauss(const Domain& carrier, const GaussPair& pair,
                                    const MaterializeOptions& opts = {},
                                    MaterializeReport* report = nullptr);

// --- pointwise verification ------------------------------------------------

// sup over grid nodes of |phi1^2+phi2^2+phi3^2| / sum |phi_j|^2.
double isotropy_residual(const WeierstrassTriple& t, const Grid& grid, Exec exec = Exec::serial);

// Conformal factor lambda^2 = sum_j |phi_j/dz|^2 of ds^2 = lambda^2 |dz|^2.
struct MetricField {
  GridPtr grid;
  std::vector<double> lambda2;
  double min_value = 0.0, max_value = 0.0;
  std::size_t argmin = 0;
};

// Throws `branch_point` when the factor vanishes on the grid (relative
// threshold: min <= 1e-24 * max).
MetricField induced_metric(const WeierstrassTriple& t, GridPtr grid, Exec exec = Exec::serial);

// Gauss map g = phi3 / (phi1 - i phi2) sampled on the grid.
struct GaussMapReport {
  std::vector<cplx> values;
  double min_abs = 0.0, max_abs = 0.0;
  double min_denominator = 0.0;  // min |phi1 - i phi2|
  bool omits_zero_and_infinity = false;
};

GaussMapReport gauss_map(const WeierstrassTriple& t, const Grid& grid, Exec exec = Exec::serial);

// --- periods and flux ------------------------------------------------------

// Component periods over a closed contour, vertex-trapezoid on the polyline
// (exact for Laurent series on equispaced circle cycles).
std::array<cplx, 3> periods(const WeierstrassTriple& t, const Cycle& cycle);

// Imaginary parts of the periods: the flux vector of the cycle.
std::array<double, 3> flux_vector(const WeierstrassTriple& t, const Cycle& cycle);

// Largest real period magnitude across components (well-definedness check).
double real_period_residual(const WeierstrassTriple& t, const Cycle& cycle);

// --- immersion -------------------------------------------------------------

struct ImmersionField {
  GridPtr grid;
  std::size_t basepoint = 0;
  std::vector<std::array<double, 3>> position;   // X = Re F, X(basepoint) = 0
  std::vector<std::array<double, 3>> conjugate;  // Im F along the same paths
};

struct ImmersionResult {
  ImmersionField field;
  double loop_residual = 0.0;     // max |Re (full angular loop integral)|
  double prescribed_error = 0.0;  // sup |X3 - h| after matching at basepoint
};

// Integrates the triple along radial-then-angular grid paths with 8-point
// Gauss-Legendre per edge.  Well-definedness (vanishing real periods) is
// checked on the outer angular loop; violation throws `well_definedness`.
// `prescribed_third`, when given, is compared against X3 up to an additive
// constant and reported.
ImmersionResult integrate_immersion(const WeierstrassTriple& t, GridPtr grid,
                                    std::size_t basepoint, Exec exec = Exec::serial,
                                    const std::function<double(cplx)>* prescribed_third = nullptr,
                                    double loop_tol = 1e-9);

// --- conjugate swap into the Lorentzian setting ---------------------------

// Reorders (phi, conjugates) into a triple whose real integral is:
//   first:  (X3, X2*, X1*)   psi = ( phi3, -i phi2, -i phi1)
//   second: (X1*, X3,  X2)   psi = (-i phi1,  phi3,    phi2)
// Both land in the signature (-,+,+): the first slot is timelike, and
// -psi1^2 + psi2^2 + psi3^2 = -(phi1^2+phi2^2+phi3^2) = 0 carries the
// conformality over.  Requires the imaginary periods of every conjugated
// component to vanish on the carrier's generator.
enum class SwapMode { first, second };

struct MaximalSwapResult {
  WeierstrassTriple lorentz;   // psi series on the same carrier
  ImmersionField immersion;    // Re integral of psi
  double isotropy_sup = 0.0;   // sup |-psi1^2+psi2^2+psi3^2| / sum |psi_j|^2
  double spacelike_min = 0.0;  // min over grid of the Lorentz conformal factor
  int timelike_slot = 0;
};

MaximalSwapResult maximal_swap(const WeierstrassTriple& t, SwapMode mode, GridPtr grid,
                               std::size_t basepoint, Exec exec = Exec::serial,
                               double period_tol = 1e-9);

}  // namespace minsurf
