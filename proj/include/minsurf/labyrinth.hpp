#pragma once
// Alternating slit-band family inside an annulus.  Bands are thin concentric
// annuli with one angular sector removed; the removed sector alternates
// between angle 0 (even bands) and angle pi (odd bands), so any curve that
// crosses the annulus radially while avoiding the bands has to wind back and
// forth between the slits.  Deforming the Gauss map to a large constant M on
// the bands amplifies the induced metric there; the combination forces long
// intrinsic length on every crossing curve.

#include <cstddef>
#include <vector>

#include "minsurf/domain.hpp"
#include "minsurf/laurent.hpp"
#include "minsurf/weierstrass.hpp"

namespace minsurf {

// One band: radial interval [r_lo, r_hi], full circle minus an open angular
// sector of half-width `slit_half_width` centered at `slit_angle`.
struct Band {
  double r_lo = 0.0;
  double r_hi = 0.0;
  double slit_angle = 0.0;       // 0 for even index, pi for odd
  double slit_half_width = 0.0;  // 1/N^2
};

struct LabyrinthSpec {
  int N = 0;                 // sharpness parameter; 2*N^2 bands
  Domain carrier;            // the annulus the bands live in
  std::vector<Band> bands;   // index n = 1..2N^2, outermost first
  double band_pitch = 0.0;   // 1/N^3, radial distance between band anchors
  double inset = 0.0;        // 1/(4N^3), gap clipped off both band edges

  // Radial anchors: s(0) = outer radius, s(n) = s(0) - n/N^3.
  double anchor(int n) const;
};

// Lay out 2N^2 bands in `annulus`.  Band n sits in [s(n)+1/(4N^3),
// s(n-1)-1/(4N^3)], keeps angles with |angle - slit| >= 1/N^2.  The stack
// of bands descends a total depth 2/N from the outer radius, so it only
// fits when 2/N < outer - inner; otherwise a labyrinth_fit error.
LabyrinthSpec build_labyrinth(const Domain& annulus, int N);

// Point membership in the band union, with boundary tolerance `tol`
// (points within tol of the closed band count as inside).
bool in_labyrinth(const LabyrinthSpec& spec, cplx z, double tol = 1e-12);
// Index (1-based) of the band containing z, or 0.
int band_of(const LabyrinthSpec& spec, cplx z, double tol = 1e-12);

// mu = 0.9 * min |phi3/dz| over a grid on the inset sub-annulus of `d`.
// If the minimum is indistinguishable from zero (phi3 vanishes near the
// deformation zone) the inset is stepped up to dodge the zero; if that
// fails, a branch_point error.
struct MuReport {
  double mu = 0.0;
  double min_abs = 0.0;    // raw grid minimum of |phi3/dz|
  double inset_used = 0.0;
  Domain zone;             // the sub-annulus the minimum was taken over
};
MuReport compute_mu(const LaurentSeries& phi3, const Domain& annulus,
                    std::size_t radial = 64, std::size_t angular = 256,
                    Exec exec = Exec::serial);

// Constant-Gauss-map deformation: phi1 -> (1/M - M)/2 * phi3,
// phi2 -> i(1/M + M)/2 * phi3, phi3 unchanged.  Exact coefficient
// arithmetic; isotropy holds identically.  The induced metric becomes
// (M + 1/M)^2/2 * |phi3/dz|^2 pointwise.
WeierstrassTriple deform_to_constant_gauss(const WeierstrassTriple& t, double M);
// Same deformation applied directly to a third form.
WeierstrassTriple deformed_triple_from_phi3(const LaurentSeries& phi3,
                                            const Domain& carrier, double M);

// Check the amplified-metric inequality min lambda^2 / (N^8 mu^2) > 1 over
// the band samples of `metric`'s grid, for the deformation amplitude M.
// Requires every band to contain at least `min_rings_per_band` grid rings
// (resolution error otherwise).
// Interior sample points of every band: `rings` radii per band (inset 10%
// from the band edges) crossed with `angular` angles spread over the kept
// sector (the slit sector is excluded).  band_index[i] gives the 1-based
// band of points[i].
struct BandSamples {
  std::vector<cplx> points;
  std::vector<int> band_index;
};
BandSamples band_sample_points(const LabyrinthSpec& spec, int rings, int angular);

struct MetricBoundReport {
  double min_ratio = 0.0;        // min over band nodes of lambda^2/(N^8 mu^2)
  double algebraic_margin = 0.0; // ((1/M + M)/2)^2 / N^8, the M-only factor
  double mu = 0.0;
  double M = 0.0;
  bool holds = false;            // min_ratio > 1
  std::size_t band_nodes = 0;
};
MetricBoundReport verify_metric_bound(const LabyrinthSpec& spec,
                                      const MetricField& metric, double M,
                                      double mu,
                                      std::size_t min_rings_per_band = 3);

// Default deformation amplitude.
inline double default_amplitude(int N) {
  double n4 = static_cast<double>(N) * N * N * N;
  return 4.0 * n4;
}

}  // namespace minsurf
