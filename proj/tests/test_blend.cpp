#include "minsurf/blend.hpp"

#include <cmath>
#include <complex>
#include <cstring>
#include <vector>

#include "doctest.h"
#include "minsurf/domain.hpp"
#include "minsurf/error.hpp"
#include "minsurf/labyrinth.hpp"
#include "minsurf/laurent.hpp"
#include "minsurf/weierstrass.hpp"

using namespace minsurf;

namespace {

const double kPi = 3.14159265358979323846;

bool same_bits(const LaurentSeries& a, const LaurentSeries& b) {
  if (a.min_degree() != b.min_degree()) return false;
  if (a.raw().size() != b.raw().size()) return false;
  return a.raw().empty() ||
         std::memcmp(a.raw().data(), b.raw().data(), a.raw().size() * sizeof(cplx)) == 0;
}

GaussTriple catenoid_data(Domain carrier) {
  GaussTriple gt;
  gt.carrier = carrier;
  gt.winding = 1;
  gt.phi3 = LaurentSeries::monomial(-1, 1.0);
  return gt;
}

// U-region samples with constant log-target w0 over a grid of `inner`.
SampleGroup grid_group(const Domain& inner, int radial, int angular, cplx w0, double weight,
                       const char* name) {
  SampleGroup g;
  g.name = name;
  g.weight = weight;
  Grid grid(inner, radial, angular);
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    g.z.push_back(grid.node(i));
    g.w.push_back(w0);
  }
  return g;
}

}  // namespace

TEST_CASE("materialized exponential-form data keeps the third form bitwise") {
  auto gt = catenoid_data(Domain::annulus(0.5, 2.0));
  auto t = materialize(gt);
  CHECK(same_bits(t.phi[2], gt.phi3));
  Grid grid(gt.carrier, 17, 64);
  CHECK(isotropy_residual(t, grid, Exec::serial) < 1e-12);
  for (cplx z : {cplx(0.8, 0.1), cplx(-0.3, 1.1), cplx(1.4, -0.9)}) {
    auto direct = gt.eval(z);
    auto series = t.eval(z);
    for (int j = 0; j < 3; ++j) CHECK(std::abs(direct[j] - series[j]) < 1e-12);
  }
}

TEST_CASE("blend with identity target reproduces the data to round-off") {
  Domain carrier = Domain::annulus(0.5, 2.0);
  auto gt = catenoid_data(carrier);

  BlendTarget target;
  target.carrier = carrier;
  target.winding = 1;
  target.phi3 = gt.phi3;
  target.groups.push_back(grid_group(Domain::annulus(0.75, 1.5), 17, 64, 0.0, 10.0, "U"));
  target.cycles.push_back(generator_cycle(carrier));
  target.period_targets.push_back({cplx(0.0, 0.0), cplx(0.0, 0.0)});

  auto res = blend(target, {});
  CHECK(res.report.u_region_sup < 1e-10);
  CHECK(res.report.newton_iters == 0);
  CHECK(res.report.period_error < 1e-8);
  CHECK(res.report.isotropy < 1e-12);
  CHECK(same_bits(res.triple.phi[2], target.phi3));
  // The fitted correction is numerically zero.
  CHECK(res.data.log_gauss.max_abs_coeff() < 1e-12);
}

TEST_CASE("blend recovers an explicit smooth exponent on a disk carrier") {
  Domain carrier = Domain::disk(1.0);
  BlendTarget target;
  target.carrier = carrier;
  target.winding = 0;
  target.phi3 = LaurentSeries::constant(1.0);

  SampleGroup g;
  g.name = "U";
  g.weight = 1.0;
  Grid grid(Domain::disk(0.9), 15, 48);
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    cplx z = grid.node(i);
    g.z.push_back(z);
    g.w.push_back(0.25 * z + cplx(0.1, 0.0));
  }
  target.groups.push_back(g);

  auto res = blend(target, {});
  CHECK(res.report.u_region_sup < 1e-10);
  CHECK(std::abs(res.data.log_gauss.coeff(1) - cplx(0.25, 0.0)) < 1e-12);
  CHECK(std::abs(res.data.log_gauss.coeff(0) - cplx(0.1, 0.0)) < 1e-12);
  CHECK(res.report.period_error == 0.0);
}

TEST_CASE("period correction steers the two lowest exponent coefficients") {
  Domain carrier = Domain::annulus(0.5, 2.0);
  auto gt = catenoid_data(carrier);

  BlendTarget target;
  target.carrier = carrier;
  target.winding = 1;
  target.phi3 = gt.phi3;
  target.groups.push_back(grid_group(Domain::annulus(0.75, 1.5), 17, 64, 0.0, 10.0, "U"));
  target.cycles.push_back(generator_cycle(carrier));
  // d(period)/d(u_{-1}) at the catenoid is (-i pi, -pi); ask for a small
  // move along that reachable direction.
  double delta = 1e-3;
  target.period_targets.push_back({cplx(0.0, -kPi * delta), cplx(-kPi * delta, 0.0)});

  auto res = blend(target, {});
  CHECK(res.report.newton_iters >= 1);
  CHECK(res.report.period_error < 1e-8);
  // First-order the correction lands at u_{-1} = delta.
  CHECK(std::abs(res.data.log_gauss.coeff(-1) - cplx(delta, 0.0)) < 1e-4);
  // The data only drifted by O(delta) on U.
  for (int j = 0; j < 3; ++j) CHECK(res.report.group_sup[0][j] < 1e-2);
  CHECK(same_bits(res.triple.phi[2], target.phi3));
}

TEST_CASE("unmet period constraints fail loudly") {
  Domain carrier = Domain::annulus(0.5, 2.0);
  auto gt = catenoid_data(carrier);

  BlendTarget target;
  target.carrier = carrier;
  target.winding = 1;
  target.phi3 = gt.phi3;
  target.groups.push_back(grid_group(Domain::annulus(0.75, 1.5), 9, 32, 0.0, 10.0, "U"));
  target.cycles.push_back(generator_cycle(carrier));
  target.period_targets.push_back({cplx(0.3, 0.0), cplx(0.0, 0.0)});

  BlendOptions opts;
  opts.newton_max = 0;  // forbid correction: residual 0.3 must surface
  CHECK_THROWS_AS(blend(target, opts), Error);
  try {
    blend(target, opts);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::flux_mismatch);
  }
}

TEST_CASE("labyrinth-valued blend: flat on U, amplified on the bands") {
  // Carrier disk(2) holding U = disk(1); the band family lives in the inset
  // annulus of the gap, so the exponent must climb from 0 to log M across a
  // sample-free collar.
  Domain carrier = Domain::disk(2.0);
  Domain gap = Domain::annulus(1.0, 2.0);
  Domain zone = deformation_annulus(gap, 0.1);
  int N = 3;
  auto spec = build_labyrinth(zone, N);
  double M = default_amplitude(N);  // 324
  double logM = std::log(M);

  BlendTarget target;
  target.carrier = carrier;
  target.winding = 0;
  target.phi3 = LaurentSeries::constant(1.0);
  target.groups.push_back(grid_group(Domain::disk(1.0), 24, 96, 0.0, 10.0, "U"));
  auto bs = band_sample_points(spec, 3, 48);
  SampleGroup bands;
  bands.name = "bands";
  bands.weight = 1.0;
  for (cplx z : bs.points) {
    bands.z.push_back(z);
    bands.w.push_back(cplx(logM, 0.0));
  }
  target.groups.push_back(bands);
  // Soft plateau continuation through the outer collar: without it the
  // exponent is unconstrained between the last band and the carrier edge
  // and can grow past what the series materialization can represent.
  // Angular count must stay above the largest basis bandwidth (2K+1) or the
  // exponent is free to oscillate between collar samples.
  SampleGroup collar;
  collar.name = "collar";
  collar.weight = 0.5;
  for (double r : {1.93, 2.0}) {
    for (int j = 0; j < 192; ++j) {
      collar.z.push_back(std::polar(r, 2.0 * kPi * j / 192));
      collar.w.push_back(cplx(logM, 0.0));
    }
  }
  target.groups.push_back(collar);

  // The fit either meets the change budget on U at some K, or the report
  // carries the achieved sup so the caller can reject the result; a quiet
  // miss is the only wrong outcome.  Growing K never makes the fit worse.
  double prev_residual = -1.0;
  BlendResult last;
  bool met = false;
  for (int K : {8, 16, 32, 64}) {
    BlendOptions opts;
    opts.K = K;
    last = blend(target, opts);
    if (prev_residual >= 0.0) CHECK(last.report.ls_residual <= prev_residual + 1e-12);
    prev_residual = last.report.ls_residual;
    if (last.report.u_region_sup < 1e-2) met = true;
  }

  auto phi_of = [](cplx g, cplx f3) {
    return std::array<cplx, 3>{0.5 * (1.0 / g - g) * f3,
                               cplx(0.0, 0.5) * (1.0 / g + g) * f3, f3};
  };

  if (!met) {
    // Re-measure the miss independently of the report.
    double sup = 0.0;
    const auto& ug = target.groups[0];
    for (std::size_t i = 0; i < ug.z.size(); ++i) {
      auto want = phi_of(std::exp(ug.w[i]), target.phi3.eval(ug.z[i]));
      auto got = last.triple.eval(ug.z[i]);
      for (int j = 0; j < 3; ++j) sup = std::max(sup, std::abs(got[j] - want[j]));
    }
    CHECK(last.report.u_region_sup == doctest::Approx(sup).epsilon(1e-6));
    CHECK(last.report.u_region_sup >= 1e-2);
  }

  CHECK(same_bits(last.triple.phi[2], target.phi3));
  CHECK(last.report.isotropy < 1e-10);

  // The exponent is pulled up on the bands, not down — but most of the
  // plateau is simply outside the span of a rim-tame polynomial exponent,
  // and the per-group sup in the report is the honest remainder.
  double mean_u = 0.0;
  for (cplx z : bs.points) mean_u += last.data.log_gauss.eval(z).real();
  mean_u /= static_cast<double>(bs.points.size());
  CHECK(mean_u > 0.0);
  double band_sup = 0.0;
  const auto& bg = target.groups[1];
  for (std::size_t i = 0; i < bg.z.size(); ++i) {
    auto want = phi_of(std::exp(bg.w[i]), target.phi3.eval(bg.z[i]));
    auto got = last.triple.eval(bg.z[i]);
    for (int j = 0; j < 3; ++j) band_sup = std::max(band_sup, std::abs(got[j] - want[j]));
  }
  double reported = std::max({last.report.group_sup[1][0], last.report.group_sup[1][1],
                              last.report.group_sup[1][2]});
  CHECK(reported == doctest::Approx(band_sup).epsilon(1e-6));

  // Away from the samples nothing constrains the exponent, but the result
  // still materializes cleanly on the whole carrier.
  Grid full(carrier, 33, 128);
  CHECK(isotropy_residual(last.triple, full, Exec::serial) < 1e-10);
}

TEST_CASE("arc extension carries isotropic frames with pinned third component") {
  auto gt = catenoid_data(Domain::annulus(0.5, 2.0));
  ArcPolyline gamma;
  gamma.pts = {cplx(2.0, 0.0), cplx(2.3, 0.0), cplx(2.6, 0.0)};

  auto ext = extend_along_arc(gt, gamma, {0.1, -0.05});
  CHECK(ext.flux_error < 1e-10);
  CHECK(ext.endpoint_error < 1e-9);
  CHECK(ext.orthogonality < 1e-12);
  CHECK(ext.newton_iters >= 1);
  std::size_t n = ext.data.param.size();
  REQUIRE(n == ext.data.theta[0].size());
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(ext.data.theta[2][i] == ext.data.dh_along[i]);
    // Conformality of the frame: |Re theta| = |Im theta| exactly by isotropy.
    double re2 = 0.0, im2 = 0.0;
    for (int j = 0; j < 3; ++j) {
      re2 += ext.data.theta[j][i].real() * ext.data.theta[j][i].real();
      im2 += ext.data.theta[j][i].imag() * ext.data.theta[j][i].imag();
    }
    CHECK(std::abs(re2 - im2) <= 1e-12 * std::max(re2, im2));
  }
}

TEST_CASE("arc extension refuses an unreachable flux target") {
  auto gt = catenoid_data(Domain::annulus(0.5, 2.0));
  ArcPolyline gamma;
  gamma.pts = {cplx(2.0, 0.0), cplx(2.5, 0.0)};
  CHECK_THROWS_AS(extend_along_arc(gt, gamma, {1e9, 0.0}), Error);
  try {
    extend_along_arc(gt, gamma, {0.2, 0.0}, 64, 0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::flux_mismatch);
  }
}
