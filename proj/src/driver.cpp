#include "minsurf/driver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include "minsurf/error.hpp"

namespace minsurf {

namespace {

constexpr double kPi = 3.14159265358979323846;

// A fitted exponent is only trusted where samples pinned it; past its own
// carrier the polynomial tail is extrapolation.  Data whose exponent
// exceeds this on the new rim never takes the skip branch (the blend is
// about to rewrite that region anyway).
constexpr double kTameRimSup = 20.0;

// Steering amplitude budget.  The series form of e^u carries a rounding
// floor that grows like e^{2 sup|Re u|}; past ~4 the materialized triple
// can no longer hold the isotropy identity to the 1e-10 class.  Band
// targets are clamped here and the unreached remainder shows up in
// blend_band_gap.
constexpr double kBandAmplitudeCap = 4.0;

GridPtr make_grid(const Domain& d, int radial, int angular) {
  return std::make_shared<const Grid>(d, radial, angular);
}

// Distance from the basepoint to the boundary the stage pushes against:
// the outer circle (the inner one, if any, belongs to the limit region).
double outward_distance(const MetricField& field, cplx basepoint) {
  MetricGraph graph = metric_graph(field);
  std::size_t src = field.grid->nearest_node(basepoint);
  if (field.grid->domain().kind() == Domain::Kind::disk)
    return boundary_distance(graph, src);
  return intrinsic_distance(graph, src, field.grid->outer_boundary_nodes());
}

// lambda^2 = |phi3/dz|^2: the floor every conformal factor sits on,
// whatever the Gauss map does.
MetricField floor_field(const LaurentSeries& phi3, GridPtr grid) {
  MetricField f;
  f.grid = grid;
  f.lambda2.resize(grid->node_count());
  for (std::size_t i = 0; i < grid->node_count(); ++i)
    f.lambda2[i] = std::norm(phi3.eval(grid->node(i)));
  auto mm = std::minmax_element(f.lambda2.begin(), f.lambda2.end());
  f.min_value = *mm.first;
  f.max_value = *mm.second;
  f.argmin = static_cast<std::size_t>(mm.first - f.lambda2.begin());
  return f;
}

double min_abs_on_grid(const LaurentSeries& s, const Grid& grid) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.node_count(); ++i)
    m = std::min(m, std::abs(s.eval(grid.node(i))));
  return m;
}

// sup over the U grid of |Re integral (a - b)| with both anchored at the
// basepoint; a and b agree there, so this is the immersion change on U.
double immersion_change(const WeierstrassTriple& a, const WeierstrassTriple& b,
                        const Domain& U, cplx basepoint, Exec exec) {
  WeierstrassTriple diff;
  diff.carrier = U;
  for (int j = 0; j < 3; ++j) diff.phi[j] = a.phi[j] - b.phi[j];
  GridPtr grid = make_grid(U, 129, 256);
  // differences of well-defined data stay well-defined; allow numerical dust
  ImmersionResult r = integrate_immersion(diff, grid, grid->nearest_node(basepoint),
                                          exec, nullptr, 1e-6);
  double sup = 0.0;
  for (const auto& x : r.field.position)
    sup = std::max(sup, std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
  return sup;
}

double flux_error_on(const WeierstrassTriple& t, const Domain& V,
                     const std::array<double, 3>& p) {
  if (V.cycle_rank() == 0) return 0.0;
  std::array<double, 3> f = flux_vector(t, generator_cycle(V));
  double e = 0.0;
  for (int j = 0; j < 3; ++j) e = std::max(e, std::abs(f[j] - p[j]));
  return e;
}

std::string stage_diag(const StageReport& rep, const std::string& what) {
  std::ostringstream os;
  os << "stage " << rep.stage << ": " << what << " (distance " << rep.distance
     << " vs target " << rep.distance_target << ", crossing " << rep.crossing
     << ", N " << rep.N << ", M " << rep.M << ", mu " << rep.mu
     << ", sup-change " << rep.sup_change << " vs " << rep.sup_change_target << ")";
  return os.str();
}

}  // namespace

HarmonicPrescription prescription_re_z() {
  HarmonicPrescription p;
  p.name = "re-z";
  p.h = [](cplx z) { return z.real(); };
  p.dh = LaurentSeries::constant(1.0);
  p.flux = {0.0, 0.0, 0.0};
  return p;
}

HarmonicPrescription prescription_log_abs() {
  HarmonicPrescription p;
  p.name = "log-abs";
  p.h = [](cplx z) { return std::log(std::abs(z)); };
  p.dh = LaurentSeries::monomial(-1, 1.0);
  p.flux = {0.0, 0.0, 2.0 * kPi};
  return p;
}

HarmonicPrescription prescription_custom(const LaurentSeries& dh,
                                         std::array<double, 3> flux,
                                         std::string name) {
  cplx res = dh.residue();
  if (std::abs(res.imag()) > 1e-12)
    fail(ErrorKind::config,
         "custom vertical data: imaginary residue makes h multivalued");
  double want = 2.0 * kPi * res.real();
  if (dh.min_degree() < 0 && std::abs(flux[2] - want) > 1e-9) {
    std::ostringstream os;
    os << "custom vertical data: flux[2] = " << flux[2]
       << " but the residue forces " << want;
    fail(ErrorKind::flux_mismatch, os.str());
  }
  HarmonicPrescription p;
  p.name = std::move(name);
  LaurentSeries F = dh.antiderivative_dropping_residue();
  double r = res.real();
  if (r == 0.0) {
    p.h = [F](cplx z) { return F.eval(z).real(); };
  } else {
    p.h = [F, r](cplx z) { return F.eval(z).real() + r * std::log(std::abs(z)); };
  }
  p.dh = dh;
  p.flux = flux;
  return p;
}

double harmonic_residual(const HarmonicPrescription& p, const Grid& grid,
                         double step) {
  double sup = 0.0;
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    cplx z = grid.node(i);
    double s = step * std::max(1.0, std::abs(z));
    if (std::abs(z) < 2.0 * s) continue;  // keep the stencil away from z = 0
    double lap = p.h(z + s) + p.h(z - s) + p.h(z + cplx(0, s)) + p.h(z - cplx(0, s)) -
                 4.0 * p.h(z);
    sup = std::max(sup, std::abs(lap) / (s * s));
  }
  return sup;
}

double flux_compatibility(const HarmonicPrescription& p, const Domain& d) {
  if (d.cycle_rank() == 0) return 0.0;
  WeierstrassTriple t;
  t.carrier = d;
  t.phi[2] = p.dh;
  std::array<cplx, 3> per = periods(t, generator_cycle(d));
  return std::abs(per[2].imag() - p.flux[2]);
}

StageResult completeness_stage(const GaussTriple& data, const Domain& V,
                               const HarmonicPrescription& presc,
                               const StageOptions& opts) {
  const Domain& U = data.carrier;
  const bool trivial = (U.kind() == V.kind() &&
                        std::abs(U.outer_radius() - V.outer_radius()) < 1e-12 &&
                        std::abs(U.inner_radius() - V.inner_radius()) < 1e-12);
  if (!trivial) {
    bool annular_gap =
        (U.kind() == Domain::Kind::disk && V.kind() == Domain::Kind::disk) ||
        (U.kind() == Domain::Kind::annulus && V.kind() == Domain::Kind::annulus &&
         std::abs(U.inner_radius() - V.inner_radius()) < 1e-12);
    if (!annular_gap || V.outer_radius() <= U.outer_radius())
      fail(ErrorKind::config, "stage gap must be a single annulus");
  }

  StageReport rep;
  rep.stage = opts.stage_index;
  rep.sup_change_target = opts.eps;
  rep.distance_target =
      opts.distance_target > 0.0 ? opts.distance_target : 1.0 / opts.eps;

  WeierstrassTriple prev_triple = materialize(data, opts.materialize);
  GridPtr gm = make_grid(V, opts.grid_radial, opts.grid_angular);

  double rim_sup = 0.0;
  for (int j = 0; j < 384; ++j) {
    cplx z = std::polar(V.outer_radius(), 2.0 * kPi * j / 384.0);
    rim_sup = std::max(rim_sup, std::abs(data.log_gauss.eval(z)));
  }
  const bool tame = trivial || rim_sup <= kTameRimSup;

  GaussTriple out = data;
  out.carrier = V;
  WeierstrassTriple out_triple;
  if (tame) {
    out_triple = trivial ? prev_triple : materialize(out, opts.materialize);
    MetricField induced = induced_metric(out_triple, gm, opts.exec);
    rep.distance_induced = outward_distance(induced, opts.basepoint);
  }

  if (trivial || (tame && rep.distance_induced > rep.distance_target)) {
    rep.distance = rep.distance_induced;
    rep.distance_source = "induced";
    rep.min_phi3 = min_abs_on_grid(out.phi3, *gm);
    rep.isotropy = isotropy_residual(out_triple, *gm, opts.exec);
    rep.flux_err = flux_error_on(out_triple, V, presc.flux);
    if (!trivial)
      rep.sup_change = immersion_change(out_triple, prev_triple, U, opts.basepoint,
                                        opts.exec);
    std::function<double(cplx)> hf = presc.h;
    ImmersionResult im = integrate_immersion(out_triple, gm,
                                             gm->nearest_node(opts.basepoint),
                                             opts.exec, &hf);
    rep.h_err = im.prescribed_error;
    rep.sup_ok = rep.sup_change <= opts.eps;
    rep.dist_ok = rep.distance > rep.distance_target;
    rep.flux_ok = rep.flux_err <= kStageFluxTol;
    rep.h_ok = rep.h_err <= kStageThirdTol;
    if (trivial && opts.require_distance && !rep.dist_ok)
      fail(ErrorKind::approximation,
           stage_diag(rep, "no room to deform and the boundary is too close"));
    return {out, out_triple, rep};
  }

  // --- certify an amplified crossing in the gap ---------------------------
  Domain gap = Domain::annulus(U.outer_radius(), V.outer_radius());
  Domain zone = deformation_annulus(gap);
  double width = zone.outer_radius() - zone.inner_radius();
  MuReport mu = compute_mu(data.phi3, zone, 64, 256, opts.exec);
  rep.mu = mu.mu;

  int N_min = static_cast<int>(std::floor(2.0 / width)) + 1;
  while (2.0 / N_min >= width) ++N_min;

  LabyrinthSpec spec;
  bool certified = false;
  for (int k = 0; k <= opts.escalation_cap && !certified; ++k) {
    int N = N_min << k;
    double extent = 0.5 / (static_cast<double>(N) * N * N);  // band radial extent
    int zr = std::max(129, static_cast<int>(std::ceil(3.0 * width / extent)) + 2);
    if (static_cast<std::size_t>(zr) * static_cast<std::size_t>(opts.grid_angular) >
        opts.max_metric_nodes) {
      rep.N = N;
      if (opts.require_distance)
        fail(ErrorKind::resolution,
             stage_diag(rep, "certificate grid exceeds the node budget"));
      break;
    }
    LabyrinthSpec cand = build_labyrinth(zone, N);
    double M = default_amplitude(N);
    GridPtr zg = make_grid(zone, zr, opts.grid_angular);
    MetricField zf = labyrinth_bound_metric(cand, data.phi3, M, zg, opts.exec);
    CrossingReport cr = crossing_length(cand, zf, mu.mu);
    rep.N = N;
    rep.M = M;
    rep.crossing = cr.length;
    if (cr.length > rep.distance_target) {
      spec = cand;
      rep.min_ratio = verify_metric_bound(cand, zf, M, mu.mu).min_ratio;
      certified = true;
    }
  }
  if (!certified && opts.require_distance)
    fail(ErrorKind::approximation,
         stage_diag(rep, "distance target unmet after band escalation"));

  // --- steer the data toward the amplified values -------------------------
  BlendTarget target;
  target.carrier = V;
  target.winding = data.winding;
  target.phi3 = data.phi3;

  SampleGroup ug;
  ug.name = "U";
  ug.weight = opts.blend_u_weight;
  GridPtr ugrid = make_grid(U, 49, 128);
  for (std::size_t i = 0; i < ugrid->node_count(); ++i) {
    cplx z = ugrid->node(i);
    ug.z.push_back(z);
    ug.w.push_back(data.log_gauss.eval(z));
  }
  target.groups.push_back(std::move(ug));

  std::vector<cplx> band_z, band_w;
  std::size_t band_group = 0;
  if (certified) {
    // angular count well above the correction bandwidth: junk at the
    // Nyquist edge of the fit basis otherwise slips between the samples
    BandSamples bs = band_sample_points(spec, 2, 128);
    SampleGroup bg;
    bg.name = "bands";
    bg.weight = opts.blend_band_weight;
    double logM = std::log(rep.M);
    for (cplx z : bs.points) {
      // amplitude target only: |g| = M with the phase left to z^winding —
      // the metric sees |g| alone, and a winding phase is not in the span
      // of a single-valued exponent.
      double amp = logM - data.winding * std::log(std::abs(z));
      bg.z.push_back(z);
      // steering value is clamped to the amplitude budget; blend_band_gap
      // below is still measured against the full target
      bg.w.push_back(cplx(std::min(amp, kBandAmplitudeCap), 0.0));
      band_z.push_back(z);
      band_w.push_back(cplx(amp, 0.0));
    }
    band_group = target.groups.size();
    target.groups.push_back(std::move(bg));
  }

  // Guidance rings hold the exponent at zero along the carrier edge, where
  // no other sample constrains it; they also keep the output trustworthy on
  // the rim the next stage will extend from.
  SampleGroup rim;
  rim.name = "rim";
  rim.weight = opts.blend_rim_weight;
  auto add_ring = [&rim](double radius) {
    for (int j = 0; j < 192; ++j) {
      rim.z.push_back(std::polar(radius, 2.0 * kPi * j / 192.0));
      rim.w.push_back(cplx(0.0, 0.0));
    }
  };
  add_ring(V.outer_radius());
  add_ring(0.5 * (zone.outer_radius() + V.outer_radius()));
  if (V.kind() == Domain::Kind::annulus) add_ring(V.inner_radius());
  target.groups.push_back(std::move(rim));

  if (V.cycle_rank() > 0) {
    target.cycles.push_back(generator_cycle(V));
    target.period_targets.push_back(
        {cplx(0.0, presc.flux[0]), cplx(0.0, presc.flux[1])});
  }

  BlendOptions bopts;
  bopts.K = opts.blend_K;
  bopts.ridge = opts.blend_ridge;
  bopts.materialize = opts.materialize;
  bopts.exec = opts.exec;

  // Band rows are guidance, not a contract: when the change budget on U
  // breaks, soften them and refit.
  BlendResult br;
  for (int attempt = 0;; ++attempt) {
    br = blend(target, bopts);
    rep.sup_change =
        immersion_change(br.triple, prev_triple, U, opts.basepoint, opts.exec);
    if (rep.sup_change <= opts.eps || band_group == 0 || attempt >= 2) break;
    target.groups[band_group].weight *= 0.25;
  }
  rep.blend_residual = br.report.ls_residual;
  rep.blend_u_sup = br.report.u_region_sup;
  rep.isotropy = br.report.isotropy;
  for (std::size_t i = 0; i < band_z.size(); ++i)
    rep.blend_band_gap = std::max(
        rep.blend_band_gap, std::abs(br.data.log_gauss.eval(band_z[i]) - band_w[i]));

  out = br.data;
  out_triple = br.triple;

  rep.min_phi3 = min_abs_on_grid(out.phi3, *gm);
  rep.flux_err = flux_error_on(out_triple, V, presc.flux);
  std::function<double(cplx)> hf = presc.h;
  ImmersionResult im = integrate_immersion(out_triple, gm,
                                           gm->nearest_node(opts.basepoint),
                                           opts.exec, &hf);
  rep.h_err = im.prescribed_error;

  MetricField blended = induced_metric(out_triple, gm, opts.exec);
  rep.distance_induced = outward_distance(blended, opts.basepoint);

  if (certified) {
    double extent = 0.5 / (static_cast<double>(rep.N) * rep.N * rep.N);
    double vwidth = V.outer_radius() - V.inner_radius();
    int vr = std::max(opts.grid_radial,
                      static_cast<int>(std::ceil(3.0 * vwidth / extent)) + 2);
    if (static_cast<std::size_t>(vr) * static_cast<std::size_t>(opts.grid_angular) <=
        opts.max_metric_nodes) {
      GridPtr vg = make_grid(V, vr, opts.grid_angular);
      MetricField vf = labyrinth_bound_metric(spec, data.phi3, rep.M, vg, opts.exec);
      rep.distance = outward_distance(vf, opts.basepoint);
      rep.distance_source = "amplified-bound";
    } else {
      // resolve only the gap; approach the zone on the |phi3| floor
      Domain sub = V.kind() == Domain::Kind::disk
                       ? Domain::disk(zone.inner_radius())
                       : Domain::annulus(V.inner_radius(), zone.inner_radius());
      MetricField sf =
          floor_field(data.phi3, make_grid(sub, opts.grid_radial, opts.grid_angular));
      rep.distance = outward_distance(sf, opts.basepoint) + rep.crossing;
      rep.distance_source = "amplified-bound-composite";
    }
  } else {
    rep.distance = rep.distance_induced;
    rep.distance_source = "induced";
  }

  rep.sup_ok = rep.sup_change <= opts.eps;
  rep.dist_ok = rep.distance > rep.distance_target;
  rep.flux_ok = rep.flux_err <= kStageFluxTol;
  rep.h_ok = rep.h_err <= kStageThirdTol;

  if (!rep.sup_ok)
    fail(ErrorKind::approximation, stage_diag(rep, "change budget on U broken"));
  if (opts.require_distance && !rep.dist_ok)
    fail(ErrorKind::approximation,
         stage_diag(rep, "certified distance below target"));

  return {out, out_triple, rep};
}

namespace {

cplx tower_basepoint(const Domain& first) {
  if (first.kind() == Domain::Kind::disk) return {0.0, 0.0};
  return {std::sqrt(first.inner_radius() * first.outer_radius()), 0.0};
}

RunReports run_stages(GaussTriple data, const HarmonicPrescription& presc,
                      const ExhaustionTower& tower, const RunOptions& opts,
                      bool require_distance, double nonvanish_tol) {
  tower.validate();
  int stages = std::min({opts.stages, static_cast<int>(tower.stages.size()), 6});
  if (stages < 1) fail(ErrorKind::config, "run needs at least one stage");

  RunReports run;
  cplx p0 = tower_basepoint(tower.stages[0]);

  for (int n = 1; n <= stages; ++n) {
    StageOptions so = opts.stage;
    so.stage_index = n;
    so.eps = opts.eps / (static_cast<double>(n) * n);
    so.distance_target = static_cast<double>(n) * n / opts.eps;
    so.require_distance = require_distance;
    so.basepoint = p0;
    try {
      StageResult sr = completeness_stage(
          data, tower.stages[static_cast<std::size_t>(n - 1)], presc, so);
      run.stages.push_back(sr.report);
      run.total_drift += sr.report.sup_change;
      if (nonvanish_tol > 0.0 && sr.report.min_phi3 <= nonvanish_tol) {
        std::ostringstream os;
        os << "branch_point: stage " << n << ": |phi3/dz| reaches "
           << sr.report.min_phi3;
        run.failed_stage = n;
        run.failure = os.str();
        return run;
      }
      data = std::move(sr.data);
      run.final_triple = std::move(sr.triple);
    } catch (const Error& e) {
      run.failed_stage = n;
      run.failure = e.what();
      return run;
    }
  }

  run.final_data = data;
  const Domain& last = tower.stages[static_cast<std::size_t>(stages - 1)];
  GridPtr grid = make_grid(last, opts.stage.grid_radial, opts.stage.grid_angular);
  std::function<double(cplx)> hf = presc.h;
  run.immersion = integrate_immersion(run.final_triple, grid, grid->nearest_node(p0),
                                      opts.stage.exec, &hf);
  run.gauss = gauss_map(run.final_triple, *grid, opts.stage.exec);
  run.metric_min = induced_metric(run.final_triple, grid, opts.stage.exec).min_value;
  run.completed = true;
  return run;
}

}  // namespace

RunReports run_exhaustion(const HarmonicPrescription& presc,
                          const ExhaustionTower& tower, const RunOptions& opts) {
  for (const Domain& d : tower.stages) {
    if (presc.dh.min_degree() < 0 && !d.allows_negative_powers())
      fail(ErrorKind::flux_mismatch,
           "prescribed flux needs a cycle the carrier does not have");
    if (flux_compatibility(presc, d) > 1e-9)
      fail(ErrorKind::flux_mismatch,
           "prescribed flux[2] disagrees with the vertical form's period");
  }
  GaussTriple seed;
  seed.carrier = tower.stages.at(0);
  seed.winding = 0;
  seed.log_gauss = LaurentSeries::constant(0.0);
  seed.phi3 = presc.dh;
  return run_stages(std::move(seed), presc, tower, opts, /*require_distance=*/true,
                    /*nonvanish_tol=*/0.0);
}

RunReports run_nonvanishing(const GaussTriple& seed, std::array<double, 3> p,
                            const ExhaustionTower& tower, const RunOptions& opts) {
  HarmonicPrescription presc = prescription_custom(seed.phi3, p, "induced");
  return run_stages(seed, presc, tower, opts, /*require_distance=*/false,
                    /*nonvanish_tol=*/1e-12);
}

}  // namespace minsurf
