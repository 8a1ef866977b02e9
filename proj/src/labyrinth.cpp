#include "minsurf/labyrinth.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "minsurf/error.hpp"

namespace minsurf {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Wrap-aware distance between two angles, in [0, pi].
double angle_distance(double a, double b) {
  double d = std::fmod(a - b, 2.0 * kPi);
  if (d < 0.0) d += 2.0 * kPi;
  return std::min(d, 2.0 * kPi - d);
}

}  // namespace

double LabyrinthSpec::anchor(int n) const {
  return carrier.outer_radius() - static_cast<double>(n) * band_pitch;
}

LabyrinthSpec build_labyrinth(const Domain& annulus, int N) {
  if (annulus.kind() != Domain::Kind::annulus)
    fail(ErrorKind::config, "labyrinth carrier must be an annulus");
  if (N < 2) fail(ErrorKind::config, "labyrinth sharpness N must be >= 2");

  const double r = annulus.inner_radius();
  const double R = annulus.outer_radius();
  const double depth = 2.0 / static_cast<double>(N);
  if (!(depth < R - r)) {
    std::ostringstream msg;
    msg << "band stack of depth 2/N = " << depth
        << " does not fit the annulus width " << (R - r);
    fail(ErrorKind::labyrinth_fit, msg.str());
  }

  LabyrinthSpec spec;
  spec.N = N;
  spec.carrier = annulus;
  const double n3 = static_cast<double>(N) * N * N;
  spec.band_pitch = 1.0 / n3;
  spec.inset = 0.25 / n3;
  const int count = 2 * N * N;
  spec.bands.reserve(static_cast<std::size_t>(count));
  const double half_width = 1.0 / (static_cast<double>(N) * N);
  for (int n = 1; n <= count; ++n) {
    Band b;
    b.r_lo = spec.anchor(n) + spec.inset;
    b.r_hi = spec.anchor(n - 1) - spec.inset;
    b.slit_angle = (n % 2 == 0) ? 0.0 : kPi;
    b.slit_half_width = half_width;
    spec.bands.push_back(b);
  }
  return spec;
}

int band_of(const LabyrinthSpec& spec, cplx z, double tol) {
  const double rho = std::abs(z);
  for (std::size_t i = 0; i < spec.bands.size(); ++i) {
    const Band& b = spec.bands[i];
    if (rho < b.r_lo - tol || rho > b.r_hi + tol) continue;
    const double theta = std::arg(z);
    if (angle_distance(theta, b.slit_angle) >= b.slit_half_width - tol)
      return static_cast<int>(i) + 1;
    return 0;  // radial intervals are disjoint: at most one candidate
  }
  return 0;
}

bool in_labyrinth(const LabyrinthSpec& spec, cplx z, double tol) {
  return band_of(spec, z, tol) != 0;
}

MuReport compute_mu(const LaurentSeries& phi3, const Domain& annulus,
                    std::size_t radial, std::size_t angular, Exec exec) {
  if (annulus.kind() != Domain::Kind::annulus)
    fail(ErrorKind::config, "mu is computed over an annulus");
  // Step the inset outward if the raw minimum is consistent with an exact
  // zero of phi3 on the sampled zone.
  const double insets[] = {0.10, 0.15, 0.20, 0.25, 0.30};
  MuReport report;
  for (double inset : insets) {
    Domain zone = deformation_annulus(annulus, inset);
    Grid grid(zone, radial, angular);
    std::vector<double> mags(grid.node_count());
    for_each_index(grid.node_count(), exec, [&](std::size_t i) {
      mags[i] = std::abs(phi3.eval(grid.node(i)));
    });
    double lo = mags[0], hi = mags[0];
    for (double m : mags) {
      lo = std::min(lo, m);
      hi = std::max(hi, m);
    }
    report.mu = 0.9 * lo;
    report.min_abs = lo;
    report.inset_used = inset;
    report.zone = zone;
    if (lo > 1e-12 * std::max(hi, 1.0)) return report;
  }
  fail(ErrorKind::branch_point,
       "third form vanishes throughout the deformation zone candidates");
}

WeierstrassTriple deformed_triple_from_phi3(const LaurentSeries& phi3,
                                            const Domain& carrier, double M) {
  if (!(M > 0.0)) fail(ErrorKind::config, "deformation amplitude must be positive");
  WeierstrassTriple t;
  t.carrier = carrier;
  t.phi[0] = cplx(0.5 * (1.0 / M - M), 0.0) * phi3;
  t.phi[1] = cplx(0.0, 0.5 * (1.0 / M + M)) * phi3;
  t.phi[2] = phi3;
  return t;
}

WeierstrassTriple deform_to_constant_gauss(const WeierstrassTriple& t, double M) {
  return deformed_triple_from_phi3(t.phi[2], t.carrier, M);
}

BandSamples band_sample_points(const LabyrinthSpec& spec, int rings, int angular) {
  if (rings < 1 || angular < 1)
    fail(ErrorKind::config, "band samples: counts must be positive");
  BandSamples out;
  out.points.reserve(spec.bands.size() * rings * angular);
  for (std::size_t bi = 0; bi < spec.bands.size(); ++bi) {
    const Band& band = spec.bands[bi];
    double thick = band.r_hi - band.r_lo;
    double lo = band.r_lo + 0.1 * thick, hi = band.r_hi - 0.1 * thick;
    // Kept sector: everything at angular distance >= half-width from the slit.
    double a0 = band.slit_angle + band.slit_half_width;
    double span = 2.0 * kPi - 2.0 * band.slit_half_width;
    for (int i = 0; i < rings; ++i) {
      double r = rings == 1 ? 0.5 * (lo + hi)
                            : lo + (hi - lo) * static_cast<double>(i) / (rings - 1);
      for (int j = 0; j < angular; ++j) {
        double th = a0 + span * (j + 0.5) / angular;
        out.points.push_back(std::polar(r, th));
        out.band_index.push_back(static_cast<int>(bi) + 1);
      }
    }
  }
  return out;
}

MetricBoundReport verify_metric_bound(const LabyrinthSpec& spec,
                                      const MetricField& metric, double M,
                                      double mu,
                                      std::size_t min_rings_per_band) {
  const Grid& grid = *metric.grid;
  // Every band must meet enough grid rings to sample its interior.
  for (std::size_t bi = 0; bi < spec.bands.size(); ++bi) {
    const Band& b = spec.bands[bi];
    std::size_t rings = 0;
    for (std::size_t i = 0; i < static_cast<std::size_t>(grid.radial_count()); ++i) {
      double rho = grid.ring_radius(static_cast<int>(i));
      if (rho >= b.r_lo && rho <= b.r_hi) ++rings;
    }
    if (rings < min_rings_per_band) {
      std::ostringstream msg;
      msg << "band " << (bi + 1) << " meets only " << rings
          << " grid rings; need >= " << min_rings_per_band;
      fail(ErrorKind::resolution, msg.str());
    }
  }

  MetricBoundReport report;
  report.M = M;
  report.mu = mu;
  const double n8 = std::pow(static_cast<double>(spec.N), 8);
  report.algebraic_margin = 0.25 * (1.0 / M + M) * (1.0 / M + M) / n8;
  const double denom = n8 * mu * mu;
  double min_ratio = 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    if (!in_labyrinth(spec, grid.node(i))) continue;
    double ratio = metric.lambda2[i] / denom;
    if (hits == 0 || ratio < min_ratio) min_ratio = ratio;
    ++hits;
  }
  if (hits == 0)
    fail(ErrorKind::resolution, "no grid nodes fall inside the bands");
  report.band_nodes = hits;
  report.min_ratio = min_ratio;
  report.holds = min_ratio > 1.0;
  return report;
}

}  // namespace minsurf
