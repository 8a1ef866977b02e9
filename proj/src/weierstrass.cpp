#include "minsurf/weierstrass.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "minsurf/error.hpp"

namespace minsurf {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double kGlNode[8] = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
constexpr double kGlWeight[8] = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
}  // namespace

cplx GaussExpForm::eval(cplx z) const {
  cplx v = std::exp(log_part.eval(z));
  if (winding != 0) v *= std::pow(z, static_cast<double>(winding));
  return v;
}

cplx GaussRationalForm::eval(cplx z) const { return num.eval(z) / den.eval(z); }

cplx eval_gauss(const GaussForm& g, cplx z) {
  return std::visit([&](const auto& form) { return form.eval(z); }, g);
}

std::array<std::vector<cplx>, 3> sample_triple(const WeierstrassTriple& t, const Grid& grid,
                                               Exec exec) {
  std::array<std::vector<cplx>, 3> out;
  for (int j = 0; j < 3; ++j) t.phi[static_cast<std::size_t>(j)].eval_many(grid.nodes(), out[static_cast<std::size_t>(j)], exec);
  return out;
}

namespace {
// sup |series(z) - f(z)| / sup |f(z)| over sample rings of the carrier.
double verification_residual(const LaurentSeries& s, const std::function<cplx(cplx)>& f,
                             const Domain& carrier) {
  double rin = carrier.kind() == Domain::Kind::disk ? 0.25 * carrier.outer_radius()
                                                    : carrier.inner_radius();
  double rout = carrier.outer_radius();
  double rmid = std::sqrt(rin * rout);
  double worst = 0.0, scale = 0.0;
  for (double r : {rin, rmid, rout}) {
    for (int j = 0; j < 97; ++j) {
      cplx z = std::polar(r, kTwoPi * static_cast<double>(j) / 97.0);
      cplx exact = f(z);
      worst = std::max(worst, std::abs(s.eval(z) - exact));
      scale = std::max(scale, std::abs(exact));
    }
  }
  double rel = worst / std::max(scale, 1e-300);
  // A non-finite residual (overflowing data) must read as failure, never
  // slip through the <= / > comparisons that both reject NaN.
  return std::isfinite(rel) ? rel : std::numeric_limits<double>::infinity();
}

LaurentSeries nonneg_part(const LaurentSeries& s) {
  std::vector<cplx> c;
  for (int k = 0; k <= s.max_degree(); ++k) c.push_back(s.coeff(k));
  if (c.empty()) c.push_back(cplx(0.0));
  return LaurentSeries(0, std::move(c));
}

// Annulus extraction takes each sign of the spectrum on the rim it decays
// away from: positive modes at the outer edge, negative modes at the inner.
// Rounding noise in mode k then shrinks into the carrier from both sides
// instead of being unscaled toward an edge by (r/c)^{+-k}.
LaurentSeries two_rim_laurent(const std::function<cplx(cplx)>& f, double rin, double rout,
                              int cap, int n, Exec exec) {
  LaurentSeries pos = laurent_from_ring(f, rout, 0, cap, n, exec, 1e-13);
  LaurentSeries neg = laurent_from_ring(f, rin, -cap, -1, n, exec, 1e-13);
  std::vector<cplx> c(static_cast<std::size_t>(2 * cap) + 1, cplx(0.0));
  for (int k = neg.min_degree(); k <= std::min(neg.max_degree(), -1); ++k)
    c[static_cast<std::size_t>(k + cap)] = neg.coeff(k);
  for (int k = std::max(pos.min_degree(), 0); k <= pos.max_degree(); ++k)
    c[static_cast<std::size_t>(k + cap)] = pos.coeff(k);
  return LaurentSeries(-cap, std::move(c)).trimmed(0.0);
}

double edge_tail(const LaurentSeries& s) {
  int lo = s.min_degree(), hi = s.max_degree();
  int band = std::max(4, (hi - lo + 1) / 10);
  double m = s.max_abs_coeff();
  if (m == 0.0) return 0.0;
  double t = 0.0;
  for (int k = lo; k < std::min(lo + band, hi + 1); ++k) t = std::max(t, std::abs(s.coeff(k)));
  for (int k = std::max(hi - band + 1, lo); k <= hi; ++k) t = std::max(t, std::abs(s.coeff(k)));
  return t / m;
}
}  // namespace

WeierstrassTriple triple_from_gauss(const Domain& carrier, const GaussPair& pair,
                                    const MaterializeOptions& opts, MaterializeReport* report) {
  const bool disk = carrier.kind() == Domain::Kind::disk;
  // Disk extraction samples the rim itself: coefficients are then never
  // amplified anywhere in the closed carrier, so rounding noise in the high
  // modes decays inward instead of growing like (R/c)^k toward the edge.
  const double rout = carrier.outer_radius();
  const double rin = disk ? 0.0 : carrier.inner_radius();
  auto f1 = [&](cplx z) {
    cplx g = eval_gauss(pair.g, z);
    return 0.5 * (1.0 / g - g) * pair.phi3.eval(z);
  };
  auto f2 = [&](cplx z) {
    cplx g = eval_gauss(pair.g, z);
    return cplx(0.0, 0.5) * (1.0 / g + g) * pair.phi3.eval(z);
  };

  int cap = std::max(opts.degree_cap, 8);
  double residual = std::numeric_limits<double>::infinity();
  double tail = 0.0;
  LaurentSeries s1, s2;
  // growing the window can add amplified noise faster than it adds signal;
  // the best window wins, not the last
  double best_residual = std::numeric_limits<double>::infinity();
  double best_tail = 0.0;
  int best_cap = 0;
  LaurentSeries b1, b2;
  for (;;) {
    // The carrier holds the origin: genuine disk data has no negative modes,
    // so only a short sentinel window is extracted there (a pole of the pair
    // shows up in it).  Growing the negative side with the cap would just
    // unscale rounding noise by c^|k| until it overflows.
    int n = std::max(opts.ring_samples, 2 * (2 * cap + 1));
    if (disk) {
      const int lo = -std::min(cap, 16);
      s1 = laurent_from_ring(f1, rout, lo, cap, n, opts.exec, 1e-13);
      s2 = laurent_from_ring(f2, rout, lo, cap, n, opts.exec, 1e-13);
    } else {
      s1 = two_rim_laurent(f1, rin, rout, cap, n, opts.exec);
      s2 = two_rim_laurent(f2, rin, rout, cap, n, opts.exec);
    }
    if (disk) {
      const int lo = -std::min(cap, 16);
      double neg = 0.0, all = std::max(s1.max_abs_coeff(), s2.max_abs_coeff());
      for (int k = lo; k < 0; ++k)
        neg = std::max({neg, std::abs(s1.coeff(k)), std::abs(s2.coeff(k))});
      if (all > 0.0 && neg / all > 1e-8)
        fail(ErrorKind::representation, "Gauss data has a pole inside the disk carrier");
      if (s1.min_degree() < 0) s1 = nonneg_part(s1);
      if (s2.min_degree() < 0) s2 = nonneg_part(s2);
    }
    residual = std::max(verification_residual(s1, f1, carrier),
                        verification_residual(s2, f2, carrier));
    tail = std::max(edge_tail(s1), edge_tail(s2));
    if (residual < best_residual) {
      best_residual = residual;
      best_tail = tail;
      best_cap = cap;
      b1 = s1;
      b2 = s2;
    }
    if (residual <= opts.residual_tol || cap >= opts.max_degree_cap) break;
    cap = std::min(2 * cap, opts.max_degree_cap);
  }
  if (report) {
    report->degree_used = best_cap;
    report->tail = best_tail;
    report->residual = best_residual;
  }
  if (best_residual > opts.residual_tol) {
    std::ostringstream msg;
    msg << "pair not representable on the carrier within tolerance (residual "
        << best_residual << ")";
    fail(ErrorKind::representation, msg.str());
  }
  WeierstrassTriple t;
  t.carrier = carrier;
  t.phi = {b1.trimmed(1e-300), b2.trimmed(1e-300), pair.phi3};
  return t;
}

double isotropy_residual(const WeierstrassTriple& t, const Grid& grid, Exec exec) {
  auto s = sample_triple(t, grid, exec);
  std::size_t n = grid.node_count();
  std::vector<double> rel(n, 0.0);
  for_each_index(n, exec, [&](std::size_t i) {
    cplx a = s[0][i], b = s[1][i], c = s[2][i];
    double den = std::norm(a) + std::norm(b) + std::norm(c);
    if (den > 0.0) rel[i] = std::abs(a * a + b * b + c * c) / den;
  });
  double sup = 0.0;
  for (double v : rel) sup = std::max(sup, v);
  return sup;
}

MetricField induced_metric(const WeierstrassTriple& t, GridPtr grid, Exec exec) {
  auto s = sample_triple(t, *grid, exec);
  MetricField m;
  m.grid = grid;
  std::size_t n = grid->node_count();
  m.lambda2.resize(n);
  for_each_index(n, exec, [&](std::size_t i) {
    m.lambda2[i] = std::norm(s[0][i]) + std::norm(s[1][i]) + std::norm(s[2][i]);
  });
  m.min_value = std::numeric_limits<double>::infinity();
  m.max_value = 0.0;
  m.argmin = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (m.lambda2[i] < m.min_value) {
      m.min_value = m.lambda2[i];
      m.argmin = i;
    }
    m.max_value = std::max(m.max_value, m.lambda2[i]);
  }
  if (!(m.min_value > 1e-24 * m.max_value))
    fail(ErrorKind::branch_point, "conformal factor vanishes on the grid");
  return m;
}

GaussMapReport gauss_map(const WeierstrassTriple& t, const Grid& grid, Exec exec) {
  auto s = sample_triple(t, grid, exec);
  GaussMapReport rep;
  std::size_t n = grid.node_count();
  rep.values.resize(n);
  std::vector<double> den(n);
  for_each_index(n, exec, [&](std::size_t i) {
    cplx d = s[0][i] - cplx(0.0, 1.0) * s[1][i];
    den[i] = std::abs(d);
    rep.values[i] = s[2][i] / d;
  });
  rep.min_abs = std::numeric_limits<double>::infinity();
  rep.max_abs = 0.0;
  rep.min_denominator = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    double a = std::abs(rep.values[i]);
    rep.min_abs = std::min(rep.min_abs, a);
    rep.max_abs = std::max(rep.max_abs, a);
    rep.min_denominator = std::min(rep.min_denominator, den[i]);
  }
  rep.omits_zero_and_infinity = std::isfinite(rep.max_abs) && rep.min_denominator > 0.0 &&
                                rep.min_abs > 1e-14 * (1.0 + rep.max_abs);
  return rep;
}

namespace {
// Detects an equispaced circle polyline; those get the parameter-space
// trapezoid rule, which is spectrally accurate (exact on Laurent windows
// narrower than the node count).
bool uniform_circle(const Cycle& cycle, double* radius, double* orientation) {
  std::size_t n = cycle.pts.size() - 1;
  if (n < 3) return false;
  double r = std::abs(cycle.pts[0]);
  if (r == 0.0) return false;
  for (const auto& p : cycle.pts)
    if (std::abs(std::abs(p) - r) > 1e-12 * r) return false;
  double step = std::arg(cycle.pts[1] / cycle.pts[0]);
  if (std::abs(std::abs(step) - kTwoPi / static_cast<double>(n)) > 1e-9) return false;
  for (std::size_t j = 0; j + 1 < cycle.pts.size(); ++j) {
    double s = std::arg(cycle.pts[j + 1] / cycle.pts[j]);
    if (std::abs(s - step) > 1e-9) return false;
  }
  *radius = r;
  *orientation = step > 0 ? 1.0 : -1.0;
  return true;
}
}  // namespace

std::array<cplx, 3> periods(const WeierstrassTriple& t, const Cycle& cycle) {
  std::array<cplx, 3> out;
  double radius = 0.0, orientation = 1.0;
  if (uniform_circle(cycle, &radius, &orientation)) {
    int n = static_cast<int>(cycle.pts.size()) - 1;
    for (std::size_t j = 0; j < 3; ++j) {
      cplx acc(0.0);
      for (int k = 0; k < n; ++k) {
        cplx z = cycle.pts[static_cast<std::size_t>(k)];
        acc += t.phi[j].eval(z) * z;
      }
      out[j] = acc * cplx(0.0, orientation * kTwoPi / static_cast<double>(n));
    }
    return out;
  }
  for (std::size_t j = 0; j < 3; ++j)
    out[j] = contour_integral([&](cplx z) { return t.phi[j].eval(z); }, cycle);
  return out;
}

std::array<double, 3> flux_vector(const WeierstrassTriple& t, const Cycle& cycle) {
  auto p = periods(t, cycle);
  return {p[0].imag(), p[1].imag(), p[2].imag()};
}

double real_period_residual(const WeierstrassTriple& t, const Cycle& cycle) {
  auto p = periods(t, cycle);
  return std::max({std::abs(p[0].real()), std::abs(p[1].real()), std::abs(p[2].real())});
}

namespace {
// 8-point Gauss-Legendre of all three components along the chord a -> b.
std::array<cplx, 3> edge_integral(const WeierstrassTriple& t, cplx a, cplx b) {
  cplx mid = 0.5 * (a + b), half = 0.5 * (b - a);
  std::array<cplx, 3> acc{cplx(0.0), cplx(0.0), cplx(0.0)};
  for (int q = 0; q < 8; ++q) {
    auto v = t.eval(mid + kGlNode[q] * half);
    for (int j = 0; j < 3; ++j) acc[static_cast<std::size_t>(j)] += kGlWeight[q] * v[static_cast<std::size_t>(j)];
  }
  for (auto& v : acc) v *= half;
  return acc;
}
}  // namespace

ImmersionResult integrate_immersion(const WeierstrassTriple& t, GridPtr grid,
                                    std::size_t basepoint, Exec exec,
                                    const std::function<double(cplx)>* prescribed_third,
                                    double loop_tol) {
  const Grid& G = *grid;
  const int R = G.radial_count(), A = G.angular_count();
  auto [ring0, col0] = G.ring_angle_of(basepoint);
  const int first_ring = G.has_center() ? 1 : 0;
  if (ring0 < 0) col0 = 0;  // centre basepoint: pick column 0 for the radial chain

  // Angular edges: edge (ring, j) joins column j to j+1 (wrapping when the
  // grid does).  Radial edges live on column col0 only.
  const int ang_edges_per_ring = G.wraps() ? A : A - 1;
  const int rings = R - first_ring;
  std::vector<std::array<cplx, 3>> ang(static_cast<std::size_t>(rings) * ang_edges_per_ring);
  for_each_index(ang.size(), exec, [&](std::size_t e) {
    int ring = first_ring + static_cast<int>(e) / ang_edges_per_ring;
    int j = static_cast<int>(e) % ang_edges_per_ring;
    ang[e] = edge_integral(t, G.node(G.index_of(ring, j)), G.node(G.index_of(ring, j + 1)));
  });

  std::vector<std::array<cplx, 3>> rad(static_cast<std::size_t>(R));  // rad[i]: edge ring i -> i+1
  for_each_index(static_cast<std::size_t>(R - 1), exec, [&](std::size_t i) {
    int ring = static_cast<int>(i);
    cplx a = (G.has_center() && ring == 0) ? G.node(0) : G.node(G.index_of(ring, col0));
    rad[i] = edge_integral(t, a, G.node(G.index_of(ring + 1, col0)));
  });

  // Loop residual: the full angular circuit must have no real part.
  double loop_residual = 0.0;
  if (G.wraps()) {
    for (int ring = first_ring; ring < R; ++ring) {
      std::array<cplx, 3> loop{cplx(0.0), cplx(0.0), cplx(0.0)};
      for (int j = 0; j < A; ++j) {
        const auto& e = ang[static_cast<std::size_t>((ring - first_ring) * ang_edges_per_ring + j)];
        for (int k = 0; k < 3; ++k) loop[static_cast<std::size_t>(k)] += e[static_cast<std::size_t>(k)];
      }
      for (int k = 0; k < 3; ++k)
        loop_residual = std::max(loop_residual, std::abs(loop[static_cast<std::size_t>(k)].real()));
    }
    if (loop_residual > loop_tol)
      fail(ErrorKind::well_definedness, "real period on an angular loop: " + std::to_string(loop_residual));
  }

  // Complex primitive F with F(basepoint) = 0: radial chain through col0,
  // then angular prefix sums the short way around each ring.
  std::vector<std::array<cplx, 3>> F(G.node_count(), {cplx(0.0), cplx(0.0), cplx(0.0)});
  auto add = [](std::array<cplx, 3>& x, const std::array<cplx, 3>& d, double s) {
    for (int k = 0; k < 3; ++k) x[static_cast<std::size_t>(k)] += s * d[static_cast<std::size_t>(k)];
  };

  // F along the radial chain, anchored at the basepoint's ring.
  std::vector<std::array<cplx, 3>> chain(static_cast<std::size_t>(R), {cplx(0.0), cplx(0.0), cplx(0.0)});
  int anchor = std::max(ring0, G.has_center() ? 0 : first_ring);
  for (int ring = anchor + 1; ring < R; ++ring) {
    chain[static_cast<std::size_t>(ring)] = chain[static_cast<std::size_t>(ring - 1)];
    add(chain[static_cast<std::size_t>(ring)], rad[static_cast<std::size_t>(ring - 1)], 1.0);
  }
  for (int ring = anchor - 1; ring >= (G.has_center() ? 0 : first_ring); --ring) {
    chain[static_cast<std::size_t>(ring)] = chain[static_cast<std::size_t>(ring + 1)];
    add(chain[static_cast<std::size_t>(ring)], rad[static_cast<std::size_t>(ring)], -1.0);
  }

  if (G.has_center()) F[0] = chain[0];
  for (int ring = first_ring; ring < R; ++ring) {
    const std::size_t base_e = static_cast<std::size_t>((ring - first_ring) * ang_edges_per_ring);
    std::array<cplx, 3> fwd = chain[static_cast<std::size_t>(ring)];
    F[G.index_of(ring, col0)] = fwd;
    if (G.wraps()) {
      int half = A / 2;
      for (int s = 1; s <= half; ++s) {
        int j = col0 + s - 1;
        add(fwd, ang[base_e + static_cast<std::size_t>(((j % A) + A) % A)], 1.0);
        F[G.index_of(ring, col0 + s)] = fwd;
      }
      std::array<cplx, 3> bwd = chain[static_cast<std::size_t>(ring)];
      for (int s = 1; s < A - half; ++s) {
        int j = col0 - s;
        add(bwd, ang[base_e + static_cast<std::size_t>(((j % A) + A) % A)], -1.0);
        F[G.index_of(ring, col0 - s)] = bwd;
      }
    } else {
      for (int j = col0; j + 1 < A; ++j) {
        add(fwd, ang[base_e + static_cast<std::size_t>(j)], 1.0);
        F[G.index_of(ring, j + 1)] = fwd;
      }
      std::array<cplx, 3> bwd = chain[static_cast<std::size_t>(ring)];
      for (int j = col0 - 1; j >= 0; --j) {
        add(bwd, ang[base_e + static_cast<std::size_t>(j)], -1.0);
        F[G.index_of(ring, j)] = bwd;
      }
    }
  }

  ImmersionResult res;
  res.field.grid = grid;
  res.field.basepoint = basepoint;
  res.field.position.resize(G.node_count());
  res.field.conjugate.resize(G.node_count());
  std::array<cplx, 3> F0 = F[basepoint];
  for_each_index(G.node_count(), exec, [&](std::size_t i) {
    for (int k = 0; k < 3; ++k) {
      cplx v = F[i][static_cast<std::size_t>(k)] - F0[static_cast<std::size_t>(k)];
      res.field.position[i][static_cast<std::size_t>(k)] = v.real();
      res.field.conjugate[i][static_cast<std::size_t>(k)] = v.imag();
    }
  });
  res.loop_residual = loop_residual;

  if (prescribed_third) {
    double h0 = (*prescribed_third)(G.node(basepoint));
    double worst = 0.0;
    for (std::size_t i = 0; i < G.node_count(); ++i)
      worst = std::max(worst, std::abs(res.field.position[i][2] -
                                       ((*prescribed_third)(G.node(i)) - h0)));
    res.prescribed_error = worst;
  }
  return res;
}

MaximalSwapResult maximal_swap(const WeierstrassTriple& t, SwapMode mode, GridPtr grid,
                               std::size_t basepoint, Exec exec, double period_tol) {
  const cplx mi(0.0, -1.0);
  WeierstrassTriple psi;
  psi.carrier = t.carrier;
  if (mode == SwapMode::first) {
    psi.phi = {t.phi[2], mi * t.phi[1], mi * t.phi[0]};
  } else {
    psi.phi = {mi * t.phi[0], t.phi[2], t.phi[1]};
  }

  if (t.carrier.cycle_rank() == 1) {
    auto p = periods(psi, generator_cycle(t.carrier));
    double worst = std::max({std::abs(p[0].real()), std::abs(p[1].real()), std::abs(p[2].real())});
    if (worst > period_tol)
      fail(ErrorKind::period,
           "conjugate coordinates are multivalued on the carrier (residual " +
               std::to_string(worst) + ")");
  }

  MaximalSwapResult out;
  out.lorentz = psi;
  out.timelike_slot = 0;
  out.immersion = integrate_immersion(psi, grid, basepoint, exec, nullptr, period_tol).field;

  auto s = sample_triple(psi, *grid, exec);
  std::size_t n = grid->node_count();
  std::vector<double> iso(n, 0.0), factor(n, 0.0);
  for_each_index(n, exec, [&](std::size_t i) {
    cplx a = s[0][i], b = s[1][i], c = s[2][i];
    double den = std::norm(a) + std::norm(b) + std::norm(c);
    if (den > 0.0) iso[i] = std::abs(-a * a + b * b + c * c) / den;
    factor[i] = -std::norm(a) + std::norm(b) + std::norm(c);
  });
  out.isotropy_sup = 0.0;
  out.spacelike_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    out.isotropy_sup = std::max(out.isotropy_sup, iso[i]);
    out.spacelike_min = std::min(out.spacelike_min, factor[i]);
  }
  return out;
}

}  // namespace minsurf
