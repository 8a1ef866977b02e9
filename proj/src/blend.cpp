#include "minsurf/blend.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "minsurf/error.hpp"
#include "minsurf/parallel.hpp"

namespace minsurf {

namespace {

std::array<cplx, 3> pair_eval(cplx g, cplx f3) {
  return {0.5 * (1.0 / g - g) * f3, cplx(0.0, 0.5) * (1.0 / g + g) * f3, f3};
}

double basis_scale(const Domain& d) {
  return d.kind() == Domain::Kind::disk
             ? 0.75 * d.outer_radius()
             : std::sqrt(d.inner_radius() * d.outer_radius());
}

// Laurent coefficient a_k of a ring-sampled function; the ring must be a
// uniform circle of radius c.  a_k = (1/n) sum f_l z_l^{-k}.
cplx ring_coeff(const std::vector<cplx>& values, const std::vector<cplx>& ring, int k) {
  cplx acc = 0.0;
  std::size_t n = values.size();
  for (std::size_t l = 0; l < n; ++l) acc += values[l] * std::pow(ring[l], -k);
  return acc / static_cast<double>(n);
}

struct RingState {
  std::vector<cplx> ring;         // sample points on |z| = c
  std::vector<cplx> f3;           // phi3 there
  std::vector<cplx> phi1, phi2;   // refreshed per Newton step
};

void refresh_ring(RingState& rs, const GaussTriple& gt) {
  std::size_t n = rs.ring.size();
  rs.phi1.resize(n);
  rs.phi2.resize(n);
  for (std::size_t l = 0; l < n; ++l) {
    cplx g = gt.gauss(rs.ring[l]);
    auto v = pair_eval(g, rs.f3[l]);
    rs.phi1[l] = v[0];
    rs.phi2[l] = v[1];
  }
}

// Complex periods (contour integrals, not just imaginary parts) of phi1 and
// phi2 over the ring homology generator: 2*pi*i times the (-1) coefficient.
std::array<cplx, 2> ring_periods(const RingState& rs) {
  const cplx tpi(0.0, 2.0 * 3.14159265358979323846);
  return {tpi * ring_coeff(rs.phi1, rs.ring, -1), tpi * ring_coeff(rs.phi2, rs.ring, -1)};
}

}  // namespace

std::array<cplx, 3> GaussTriple::eval(cplx z) const {
  return pair_eval(gauss(z), phi3.eval(z));
}

WeierstrassTriple materialize(const GaussTriple& data, const MaterializeOptions& opts,
                              MaterializeReport* report) {
  GaussPair pair;
  pair.g = data.gauss_form();
  pair.phi3 = data.phi3;
  return triple_from_gauss(data.carrier, pair, opts, report);
}

cplx log_target(cplx gauss_value, cplx z, int winding) {
  if (gauss_value == cplx(0.0, 0.0))
    fail(ErrorKind::branch_point, "log target at a zero of the Gauss map");
  return std::log(gauss_value / std::pow(z, winding));
}

ExponentFit fit_exponent(const BlendTarget& target, const BlendOptions& opts) {
  if (target.groups.empty())
    fail(ErrorKind::config, "blend: no sample groups");
  const int K = opts.K;
  if (K < 1) fail(ErrorKind::config, "blend: degree must be positive");

  const bool negatives = target.carrier.allows_negative_powers();
  const int k_lo = negatives ? -K : 0;
  const int k_hi = K;
  const int cols = k_hi - k_lo + 1;
  const double c = basis_scale(target.carrier);

  std::size_t rows = 0;
  for (const auto& gr : target.groups) {
    if (gr.z.size() != gr.w.size())
      fail(ErrorKind::config, "blend: group '" + gr.name + "' has mismatched z/w sizes");
    if (gr.weight <= 0.0)
      fail(ErrorKind::config, "blend: group '" + gr.name + "' has non-positive weight");
    rows += gr.z.size();
  }
  if (rows < static_cast<std::size_t>(cols))
    fail(ErrorKind::config, "blend: fewer samples than basis functions");

  // Ridge rows damp each mode by its sup over the carrier closure, so the fit
  // cannot run away between or beyond the sample rings where nothing pins it.
  const std::size_t ls_rows = rows;
  if (opts.ridge > 0.0) rows += static_cast<std::size_t>(cols);
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(rows, cols);
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(rows);
  std::size_t r = 0;
  for (const auto& gr : target.groups) {
    for (std::size_t i = 0; i < gr.z.size(); ++i, ++r) {
      cplx zc = gr.z[i] / c;
      // Fill powers by running products: zc^k for k_lo..k_hi.
      cplx p = std::pow(zc, k_lo);
      for (int k = 0; k < cols; ++k) {
        A(r, k) = gr.weight * p;
        p *= zc;
      }
      b(r) = gr.weight * gr.w[i];
    }
  }
  if (opts.ridge > 0.0) {
    double redge_out = target.carrier.outer_radius() / c;
    double redge_in = negatives ? target.carrier.inner_radius() / c : redge_out;
    for (int k = 0; k < cols; ++k) {
      int power = k_lo + k;
      double edge = std::max(std::pow(redge_out, power), std::pow(redge_in, power));
      A(ls_rows + static_cast<std::size_t>(k), k) = opts.ridge * edge;
    }
  }

  // Equilibrate: monomial column norms span many orders of magnitude on fat
  // annuli, which silently truncates the usable degree inside the pivoted QR.
  Eigen::VectorXd colnorm(cols);
  for (int k = 0; k < cols; ++k) {
    double n = A.col(k).norm();
    colnorm(k) = (n > 0.0) ? n : 1.0;
    A.col(k) /= colnorm(k);
  }
  Eigen::VectorXcd coef = A.colPivHouseholderQr().solve(b);
  double ls_residual = (A.topRows(ls_rows) * coef - b.head(ls_rows)).norm();
  for (int k = 0; k < cols; ++k) coef(k) /= colnorm(k);

  GaussTriple out;
  out.carrier = target.carrier;
  out.winding = target.winding;
  out.phi3 = target.phi3;
  for (int k = 0; k < cols; ++k) {
    int power = k_lo + k;
    cplx raw = coef(k) * std::pow(cplx(1.0 / c, 0.0), power);
    if (raw != cplx(0.0, 0.0)) out.log_gauss.set_coeff(power, raw);
  }
  return {std::move(out), ls_residual};
}

BlendResult blend(const BlendTarget& target, const BlendOptions& opts) {
  if (target.cycles.size() != target.period_targets.size())
    fail(ErrorKind::config, "blend: cycles and period targets differ in count");
  if (!target.cycles.empty() && target.carrier.cycle_rank() == 0)
    fail(ErrorKind::config, "blend: period constraints on a simply connected carrier");

  ExponentFit fit = fit_exponent(target, opts);
  GaussTriple out = std::move(fit.data);
  const bool negatives = target.carrier.allows_negative_powers();
  const double c = basis_scale(target.carrier);

  BlendReport rep;
  rep.ls_residual = fit.ls_residual;
  rep.K_used = opts.K;

  // Period correction: Newton on two low Laurent coefficients of the
  // exponent.  d(phi1) = i z^j phi2 du_j and d(phi2) = -i z^j phi1 du_j, so
  // the period derivatives are 2*pi*i times single Laurent coefficients of
  // the current phi1/phi2 ring samples — no refit needed inside the loop.
  //
  // Which two modes act is decided by the data, not fixed up front: for a
  // pole-free exponent the constant mode steers both periods, but when the
  // pair carries a winding the constant only rescales the two period
  // integrals by e^{+-u0} — a flat direction at any balanced point, and a
  // root-finder pushed along it can only meet the target by driving the
  // exponent to huge amplitude.  A column-pivoted QR over the candidate
  // modes picks the best-conditioned two each iteration instead.
  if (!target.cycles.empty()) {
    int n = std::max(opts.period_ring, 256);
    RingState rs;
    rs.ring.resize(n);
    rs.f3.resize(n);
    for (int l = 0; l < n; ++l) {
      double th = 2.0 * 3.14159265358979323846 * l / n;
      rs.ring[l] = std::polar(c, th);
      rs.f3[l] = target.phi3.eval(rs.ring[l]);
    }
    const cplx tpi(0.0, 2.0 * 3.14159265358979323846);
    auto residual = [&](const std::array<cplx, 2>& per) {
      double m = 0.0;
      for (const auto& tgt : target.period_targets) {
        m = std::max(m, std::abs(per[0] - tgt[0]));
        m = std::max(m, std::abs(per[1] - tgt[1]));
      }
      return m;
    };

    std::vector<int> modes = {0};
    if (negatives) {
      modes = {0, -1, 1, -2, 2};
    } else {
      modes = {0, 1, 2};
    }

    refresh_ring(rs, out);
    auto per = ring_periods(rs);
    double res = residual(per);
    int iters = 0;
    // The correction exists to fix periods, not to re-shape the fit: cap the
    // total drift it may add to any single mode.
    const double drift_cap = 4.0;
    std::vector<cplx> drift(modes.size(), cplx(0.0));
    while (res > opts.newton_tol && iters < opts.newton_max) {
      // All period targets are over homologous cycles; steer toward the first.
      const auto& tgt = target.period_targets.front();
      Eigen::MatrixXcd Jall(2, static_cast<Eigen::Index>(modes.size()));
      for (std::size_t mi = 0; mi < modes.size(); ++mi) {
        int j = modes[mi];
        // Rows: phi1 then phi2 period; d(per)/du_j picks the (-1-j) ring mode.
        Jall(0, static_cast<Eigen::Index>(mi)) =
            tpi * cplx(0.0, 1.0) * ring_coeff(rs.phi2, rs.ring, -1 - j);
        Jall(1, static_cast<Eigen::Index>(mi)) =
            -tpi * cplx(0.0, 1.0) * ring_coeff(rs.phi1, rs.ring, -1 - j);
      }
      Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> pivot(Jall);
      auto perm = pivot.colsPermutation().indices();
      std::size_t c0 = static_cast<std::size_t>(perm(0));
      std::size_t c1 = modes.size() > 1 ? static_cast<std::size_t>(perm(1)) : c0;
      Eigen::Matrix2cd J;
      J.col(0) = Jall.col(static_cast<Eigen::Index>(c0));
      J.col(1) = Jall.col(static_cast<Eigen::Index>(c1));
      Eigen::Vector2cd F;
      F << per[0] - tgt[0], per[1] - tgt[1];
      Eigen::Vector2cd step = J.completeOrthogonalDecomposition().solve(-F);
      if (!step.allFinite()) break;
      if (std::abs(drift[c0] + step(0)) > drift_cap ||
          std::abs(drift[c1] + step(1)) > drift_cap)
        break;  // would stop being a correction

      double scale = 1.0;
      GaussTriple trial = out;
      double trial_res = res;
      std::array<cplx, 2> trial_per = per;
      for (int h = 0; h < 7; ++h) {
        trial = out;
        trial.log_gauss.set_coeff(
            modes[c0], out.log_gauss.coeff(modes[c0]) + scale * step(0));
        if (c1 != c0)
          trial.log_gauss.set_coeff(
              modes[c1], out.log_gauss.coeff(modes[c1]) + scale * step(1));
        refresh_ring(rs, trial);
        trial_per = ring_periods(rs);
        trial_res = residual(trial_per);
        if (trial_res < res) break;
        scale *= 0.5;
      }
      if (trial_res >= res) break;  // stalled
      drift[c0] += scale * step(0);
      if (c1 != c0) drift[c1] += scale * step(1);
      out = trial;
      per = trial_per;
      res = trial_res;
      ++iters;
    }
    rep.newton_iters = iters;
  }

  BlendResult result;
  result.data = out;
  result.triple = materialize(out, opts.materialize);
  result.triple.phi[2] = target.phi3;  // bitwise, not via the extraction ring

  // Honest end-to-end period check on the materialized series over the
  // caller's own cycles.
  double period_err = 0.0, flux_err = 0.0;
  for (std::size_t i = 0; i < target.cycles.size(); ++i) {
    auto per = periods(result.triple, target.cycles[i]);
    for (int j = 0; j < 2; ++j) {
      period_err = std::max(period_err, std::abs(per[j] - target.period_targets[i][j]));
      flux_err = std::max(flux_err,
                          std::abs(per[j].imag() - target.period_targets[i][j].imag()));
    }
  }
  rep.period_error = period_err;
  rep.flux_error = flux_err;
  if (!target.cycles.empty() && period_err > opts.exact_tol)
    fail(ErrorKind::flux_mismatch,
         "blend: period residual " + std::to_string(period_err) +
             " exceeds tolerance after Newton");

  rep.group_sup.resize(target.groups.size());
  for (std::size_t gi = 0; gi < target.groups.size(); ++gi) {
    const auto& gr = target.groups[gi];
    std::array<double, 3> sup = {0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < gr.z.size(); ++i) {
      cplx z = gr.z[i];
      cplx g_t = std::pow(z, target.winding) * std::exp(gr.w[i]);
      auto want = pair_eval(g_t, target.phi3.eval(z));
      auto got = result.triple.eval(z);
      for (int j = 0; j < 3; ++j) sup[j] = std::max(sup[j], std::abs(got[j] - want[j]));
    }
    rep.group_sup[gi] = sup;
  }
  rep.u_region_sup = std::max({rep.group_sup[0][0], rep.group_sup[0][1], rep.group_sup[0][2]});

  Grid check(target.carrier, 33, 128);
  rep.isotropy = isotropy_residual(result.triple, check, opts.exec);
  result.report = rep;
  return result;
}

// --- amplification barriers -------------------------------------------------

namespace {
const double kPi = 3.14159265358979323846;

double wrapped_distance(double a, double b) {
  double d = std::fmod(std::abs(a - b), 2.0 * kPi);
  return std::min(d, 2.0 * kPi - d);
}
}  // namespace

double barrier_profile(const BarrierSpec& spec, int index, double theta) {
  double gate = (index % 2 == 0) ? 0.0 : kPi;
  double gw = spec.gate_width;
  double P = spec.plateau;
  double d = wrapped_distance(theta, gate);
  if (d >= 0.5 * gw) return P;
  // Raised-cosine dip; integral of the bump over the gate is gw/2, so the
  // amplitude 4*pi*P/gw makes the circle average exactly zero.
  double bump = 0.5 * (1.0 + std::cos(2.0 * kPi * d / gw));
  return P - (4.0 * kPi * P / gw) * bump;
}

std::array<double, 2> barrier_band_interval(const BarrierSpec& spec, int index) {
  double a = spec.zone.inner_radius(), b = spec.zone.outer_radius();
  double pitch = (b - a) / spec.bands;
  double mid = a + pitch * (index + 0.5);
  double half = 0.5 * spec.duty * pitch;
  return {mid - half, mid + half};
}

std::vector<SampleGroup> barrier_groups(const BarrierSpec& spec, int rings_per_band,
                                        int angular, double band_weight,
                                        const std::vector<double>& rim_radii,
                                        double rim_weight) {
  if (spec.zone.kind() != Domain::Kind::annulus)
    fail(ErrorKind::config, "barrier zone must be an annulus");
  if (spec.bands < 1 || rings_per_band < 1 || angular < 4)
    fail(ErrorKind::config, "barrier sampling counts out of range");
  if (!(spec.gate_width > 0.0) || spec.gate_width >= kPi)
    fail(ErrorKind::config, "barrier gate width must lie in (0, pi)");
  if (!(spec.duty > 0.0) || spec.duty >= 1.0)
    fail(ErrorKind::config, "barrier duty cycle must lie in (0, 1)");

  std::vector<SampleGroup> out;
  for (int bi = 0; bi < spec.bands; ++bi) {
    auto iv = barrier_band_interval(spec, bi);
    SampleGroup g;
    g.name = "band" + std::to_string(bi + 1);
    g.weight = band_weight;
    for (int i = 0; i < rings_per_band; ++i) {
      double r = rings_per_band == 1
                     ? 0.5 * (iv[0] + iv[1])
                     : iv[0] + (iv[1] - iv[0]) * static_cast<double>(i) / (rings_per_band - 1);
      for (int j = 0; j < angular; ++j) {
        double th = 2.0 * kPi * (j + 0.5) / angular;
        g.z.push_back(std::polar(r, th));
        g.w.push_back(cplx(barrier_profile(spec, bi, th), 0.0));
      }
    }
    out.push_back(std::move(g));
  }
  if (!rim_radii.empty()) {
    SampleGroup rim;
    rim.name = "rim";
    rim.weight = rim_weight;
    int last = spec.bands - 1;
    for (double r : rim_radii) {
      for (int j = 0; j < angular; ++j) {
        double th = 2.0 * kPi * (j + 0.5) / angular;
        rim.z.push_back(std::polar(r, th));
        rim.w.push_back(cplx(barrier_profile(spec, last, th), 0.0));
      }
    }
    out.push_back(std::move(rim));
  }
  return out;
}

// --- marked data along arcs -------------------------------------------------

namespace {

struct ArcSampling {
  std::vector<double> s;       // arclength parameters
  std::vector<cplx> pos;       // gamma(s)
  std::vector<cplx> vel;       // unit tangent of the polyline segment
  double total = 0.0;
};

ArcSampling sample_arc(const ArcPolyline& gamma, int per_segment) {
  if (gamma.pts.size() < 2)
    fail(ErrorKind::config, "arc extension: polyline needs at least two points");
  ArcSampling a;
  a.total = gamma.length();
  if (!(a.total > 0.0))
    fail(ErrorKind::domain_degenerate, "arc extension: zero-length arc");
  double s0 = 0.0;
  for (std::size_t e = 0; e + 1 < gamma.pts.size(); ++e) {
    cplx d = gamma.pts[e + 1] - gamma.pts[e];
    double len = std::abs(d);
    if (!(len > 0.0)) continue;
    cplx dir = d / len;
    int m = std::max(per_segment, 2);
    // Include the segment start; the final endpoint is appended once at the end.
    for (int i = 0; i < m; ++i) {
      double f = static_cast<double>(i) / m;
      a.s.push_back(s0 + f * len);
      a.pos.push_back(gamma.pts[e] + f * d);
      a.vel.push_back(dir);
    }
    s0 += len;
  }
  a.s.push_back(a.total);
  a.pos.push_back(gamma.pts.back());
  a.vel.push_back(a.vel.back());
  return a;
}

// Integrated Im(theta_1), Im(theta_2) over the arc for exponent bump tau.
std::array<double, 2> arc_flux(const ArcSampling& a, const std::vector<cplx>& f3,
                               cplx w0, cplx tau) {
  std::array<double, 2> acc = {0.0, 0.0};
  std::size_t n = a.s.size();
  std::vector<std::array<double, 2>> im(n);
  for (std::size_t i = 0; i < n; ++i) {
    double t = a.s[i] / a.total;
    cplx w = w0 + tau * (t * t);
    cplx ew = std::exp(w), iw = std::exp(-w);
    im[i] = {std::imag(0.5 * (iw - ew) * f3[i]),
             std::imag(cplx(0.0, 0.5) * (iw + ew) * f3[i])};
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double ds = a.s[i + 1] - a.s[i];
    acc[0] += 0.5 * (im[i][0] + im[i + 1][0]) * ds;
    acc[1] += 0.5 * (im[i][1] + im[i + 1][1]) * ds;
  }
  return acc;
}

}  // namespace

ArcExtension extend_along_arc(const GaussTriple& current, const ArcPolyline& gamma,
                              std::array<double, 2> flux_12, int samples_per_segment,
                              int newton_max, double tol) {
  ArcSampling a = sample_arc(gamma, samples_per_segment);
  std::size_t n = a.s.size();

  // Pinned third component along the arc.
  std::vector<cplx> f3(n);
  for (std::size_t i = 0; i < n; ++i) f3[i] = current.phi3.eval(a.pos[i]) * a.vel[i];

  cplx g0 = current.gauss(a.pos.front());
  if (g0 == cplx(0.0, 0.0))
    fail(ErrorKind::branch_point, "arc extension: Gauss map vanishes at the attachment point");
  cplx w0 = std::log(g0);

  // Two real parameters (Re tau, Im tau) against two flux components.
  cplx tau = 0.0;
  auto F = [&](cplx t) {
    auto fl = arc_flux(a, f3, w0, t);
    return std::array<double, 2>{fl[0] - flux_12[0], fl[1] - flux_12[1]};
  };
  auto norm2 = [](const std::array<double, 2>& v) {
    return std::max(std::abs(v[0]), std::abs(v[1]));
  };
  auto Fv = F(tau);
  double res = norm2(Fv);
  int iters = 0;
  const double fd = 1e-6;
  // Full Newton steps: the residual surface has ridges where a monotone
  // line search stalls, while the undamped iteration passes straight
  // through them.  Steps are only shortened until the flux stays finite.
  while (res > tol && iters < newton_max) {
    auto Fx = F(tau + fd);
    auto Fy = F(tau + cplx(0.0, fd));
    Eigen::Matrix2d J;
    J << (Fx[0] - Fv[0]) / fd, (Fy[0] - Fv[0]) / fd,
         (Fx[1] - Fv[1]) / fd, (Fy[1] - Fv[1]) / fd;
    Eigen::Vector2d rhs(-Fv[0], -Fv[1]);
    Eigen::Vector2d step = J.completeOrthogonalDecomposition().solve(rhs);
    if (!step.allFinite()) break;
    double scale = 1.0;
    cplx trial = tau;
    auto trial_F = Fv;
    bool finite = false;
    for (int h = 0; h < 40; ++h) {
      trial = tau + scale * cplx(step(0), step(1));
      trial_F = F(trial);
      if (std::isfinite(trial_F[0]) && std::isfinite(trial_F[1])) {
        finite = true;
        break;
      }
      scale *= 0.5;
    }
    if (!finite) break;
    tau = trial;
    Fv = trial_F;
    res = norm2(Fv);
    ++iters;
  }
  if (res > tol)
    fail(ErrorKind::flux_mismatch,
         "arc extension: flux residual " + std::to_string(res) + " after Newton");

  ArcExtension ext;
  ext.data.gamma = gamma;
  ext.data.param = a.s;
  ext.data.dh_along = f3;
  for (int j = 0; j < 3; ++j) {
    ext.data.theta[j].resize(n);
    ext.data.tangent[j].resize(n);
    ext.data.normal[j].resize(n);
  }
  double ortho = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double t = a.s[i] / a.total;
    cplx w = w0 + tau * (t * t);
    cplx ew = std::exp(w), iw = std::exp(-w);
    std::array<cplx, 3> th = {0.5 * (iw - ew) * f3[i], cplx(0.0, 0.5) * (iw + ew) * f3[i],
                              f3[i]};
    double nrm_im = 0.0, nrm_re = 0.0, dot = 0.0;
    for (int j = 0; j < 3; ++j) {
      ext.data.theta[j][i] = th[j];
      ext.data.tangent[j][i] = th[j].real();
      nrm_re += th[j].real() * th[j].real();
      nrm_im += th[j].imag() * th[j].imag();
      dot += th[j].real() * th[j].imag();
    }
    nrm_re = std::sqrt(nrm_re);
    nrm_im = std::sqrt(nrm_im);
    for (int j = 0; j < 3; ++j)
      ext.data.normal[j][i] = nrm_im > 0.0 ? th[j].imag() / nrm_im : 0.0;
    if (nrm_re > 0.0 && nrm_im > 0.0) ortho = std::max(ortho, std::abs(dot) / (nrm_re * nrm_im));
  }
  ext.orthogonality = ortho;

  auto start = current.eval(a.pos.front());
  double ep = 0.0;
  for (int j = 0; j < 3; ++j)
    ep = std::max(ep, std::abs(ext.data.theta[j][0] - start[j] * a.vel.front()));
  ext.endpoint_error = ep;

  auto achieved = arc_flux(a, f3, w0, tau);
  ext.flux = achieved;
  ext.flux_error = std::max(std::abs(achieved[0] - flux_12[0]), std::abs(achieved[1] - flux_12[1]));
  ext.newton_iters = iters;
  return ext;
}

}  // namespace minsurf
