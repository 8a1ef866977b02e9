#pragma once
// Least-squares holomorphic blending in (log g, phi3) variables.
//
// The unknown is a Laurent correction u with g = z^winding * exp(u); the
// third form is never touched, so the isotropy identity and the prescribed
// vertical data survive any choice of u.  Region targets (approximation on
// U, amplified values on the band union, soft guidance elsewhere) become a
// weighted least-squares problem in log-space; cycle periods of phi1/phi2
// are then pinned by a Newton correction of the two lowest basis
// coefficients u_0, u_{-1}, whose period derivatives are available in
// closed form.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "minsurf/domain.hpp"
#include "minsurf/laurent.hpp"
#include "minsurf/weierstrass.hpp"

namespace minsurf {

// Blendable representation of a triple: Gauss map in exponential form plus
// the fixed third component.
struct GaussTriple {
  Domain carrier = Domain::disk(1.0);
  int winding = 0;
  LaurentSeries log_gauss;  // u with g = z^winding exp(u)
  LaurentSeries phi3;

  GaussExpForm gauss_form() const { return GaussExpForm{winding, log_gauss}; }
  cplx gauss(cplx z) const { return gauss_form().eval(z); }
  // Pointwise triple value ((1/g-g)/2, i(1/g+g)/2, 1) * phi3(z).
  std::array<cplx, 3> eval(cplx z) const;
};

// Series materialization of the pair; phi3 is copied bitwise into phi[2].
WeierstrassTriple materialize(const GaussTriple& data,
                              const MaterializeOptions& opts = {},
                              MaterializeReport* report = nullptr);

struct SampleGroup {
  std::string name;        // diagnostic label
  std::vector<cplx> z;     // sample points
  std::vector<cplx> w;     // log-space targets: desired log(g / z^winding)
  double weight = 1.0;     // least-squares row weight
};

struct BlendTarget {
  Domain carrier = Domain::disk(1.0);
  int winding = 0;
  LaurentSeries phi3;
  // groups[0] is the approximation region U (conventionally weight 10);
  // later groups carry band targets and soft guidance.
  std::vector<SampleGroup> groups;
  // Period constraints: for each cycle, the required complex periods of
  // (phi1, phi2).  Leave empty on simply connected carriers.
  std::vector<Cycle> cycles;
  std::vector<std::array<cplx, 2>> period_targets;
};

struct BlendOptions {
  int K = 32;                 // correction degree: powers 0..K (disk), -K..K (annulus)
  int newton_max = 50;
  double newton_tol = 1e-12;  // period residual target during iteration
  double exact_tol = 1e-8;    // hard post-check on |period - target|
  int period_ring = 2048;     // samples for single-coefficient period extraction
  double ridge = 0.0;         // optional penalty on each mode's sup over the carrier
                              // closure; off by default — amplification targets need
                              // the fit free to grow where no sample pins it
  MaterializeOptions materialize;
  Exec exec = Exec::serial;
};

struct BlendReport {
  double ls_residual = 0.0;            // ||W(A c - b)||_2 over all groups
  std::vector<std::array<double, 3>> group_sup;  // sup |phi - phi_target| per group/component
  double u_region_sup = 0.0;           // max over components of group_sup[0]
  double period_error = 0.0;           // max |period(result) - target|
  double flux_error = 0.0;             // max |Im period(result) - Im target|
  int newton_iters = 0;
  int K_used = 0;
  double isotropy = 0.0;               // materialized-triple residual on a carrier grid
};

struct BlendResult {
  GaussTriple data;
  WeierstrassTriple triple;
  BlendReport report;
};

// Weighted fit + period Newton + materialization.  Throws
// `flux_mismatch` when the Newton loop cannot meet the period targets and
// `approximation` when materialization fails its own residual check.
BlendResult blend(const BlendTarget& target, const BlendOptions& opts = {});

// The least-squares stage of blend() alone: fit the exponent correction to the
// weighted sample groups without materializing or checking periods.  Lets a
// caller inspect a candidate fit (or escalate degrees) before paying for the
// series extraction.
struct ExponentFit {
  GaussTriple data;
  double ls_residual = 0.0;
};
ExponentFit fit_exponent(const BlendTarget& target, const BlendOptions& opts = {});

// Log-space target value for a raw Gauss-map sample (principal branch of
// log(g / z^winding)); callers stitching targets across branch cuts must
// supply coherent w values themselves.
cplx log_target(cplx gauss_value, cplx z, int winding);

// --- amplification barriers -------------------------------------------------

// A coarse family of concentric amplified bands with alternating gate
// sectors.  Band targets follow a mean-zero angular profile: plateau P on
// the kept sector and a compensating dip inside the gate.  Mean zero per
// circle is forced by harmonicity (Re u over any circle averages to
// Re u(0) ~ 0 when the data is unchanged near the origin), so this is the
// shape a bounded holomorphic exponent can actually take — and the dip is
// itself amplifying, since the conformal factor grows like e^{|Re u|} in
// both directions away from zero.
struct BarrierSpec {
  Domain zone = Domain::annulus(0.5, 1.0);  // annulus holding the bands
  int bands = 4;
  double gate_width = 1.0;  // angular width of the dip sector (radians)
  double plateau = 3.0;     // log-amplification over the kept sector
  double duty = 0.5;        // radial fraction of each pitch cell the band occupies
};

// Mean-zero angular target for band `index` (0-based; gates alternate
// between angles 0 and pi).
double barrier_profile(const BarrierSpec& spec, int index, double theta);

// Radial interval of band `index`.
std::array<double, 2> barrier_band_interval(const BarrierSpec& spec, int index);

// Sample groups prescribing the barrier: one group per band plus, when
// `rim_radii` is nonempty, a guidance ring repeating the outermost band's
// profile (it keeps the exponent from running away between the last band
// and the carrier edge, where nothing else constrains it).
std::vector<SampleGroup> barrier_groups(const BarrierSpec& spec, int rings_per_band,
                                        int angular, double band_weight,
                                        const std::vector<double>& rim_radii = {},
                                        double rim_weight = 0.5);

// --- marked data along arcs -------------------------------------------------

// Immersion data transported along an arc: the pinned third component
// theta3 = dh(gamma) gamma', the free complex exponent w with
//   theta = ((e^-w - e^w)/2, i(e^-w + e^w)/2, 1) * theta3,
// which is isotropic for every w.  tangent = Re theta, normal = the unit
// direction of Im theta.
struct MarkedArcData {
  ArcPolyline gamma;
  std::vector<double> param;                  // chord-length parameters
  std::array<std::vector<cplx>, 3> theta;     // combined samples
  std::array<std::vector<double>, 3> tangent;
  std::array<std::vector<double>, 3> normal;
  std::vector<cplx> dh_along;                 // = theta[2]
};

struct ArcExtension {
  MarkedArcData data;
  double endpoint_error = 0.0;     // |theta(0) - phi(gamma(0)) gamma'(0)|
  double orthogonality = 0.0;      // sup |tangent . normal| (normalized)
  std::array<double, 2> flux = {0.0, 0.0};  // achieved Im integrals, slots 1,2
  double flux_error = 0.0;
  int newton_iters = 0;
};

// Extends `current` along `gamma` (gamma(0) on the carrier boundary):
// w starts at log g(gamma(0)) so the data attaches continuously, and a
// one-complex-parameter bump tau * t^2 rotates the normal family until the
// imaginary integrals of (theta1, theta2) over the arc meet `flux_12`.
// Unreachable targets raise `flux_mismatch`.
ArcExtension extend_along_arc(const GaussTriple& current, const ArcPolyline& gamma,
                              std::array<double, 2> flux_12, int samples_per_segment = 64,
                              int newton_max = 50, double tol = 1e-10);

}  // namespace minsurf
