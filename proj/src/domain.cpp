#include "minsurf/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "minsurf/error.hpp"

namespace minsurf {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Distance from `ang` to `center` on the circle, in [0, pi].
double angular_distance(double ang, double center) {
  double d = std::remainder(ang - center, kTwoPi);
  return std::abs(d);
}
}  // namespace

Domain Domain::disk(double outer) {
  if (!(outer > 0.0)) fail(ErrorKind::domain_degenerate, "disk radius must be positive");
  Domain d;
  d.kind_ = Kind::disk;
  d.inner_ = 0.0;
  d.outer_ = outer;
  return d;
}

Domain Domain::annulus(double inner, double outer) {
  if (!(inner > 0.0) || !(outer > inner))
    fail(ErrorKind::domain_degenerate, "annulus needs 0 < inner < outer");
  Domain d;
  d.kind_ = Kind::annulus;
  d.inner_ = inner;
  d.outer_ = outer;
  return d;
}

Domain Domain::slit_annulus(double inner, double outer, double slit_angle, double slit_half_width) {
  if (!(inner > 0.0) || !(outer > inner))
    fail(ErrorKind::domain_degenerate, "slit annulus needs 0 < inner < outer");
  if (!(slit_half_width > 0.0) || !(slit_half_width < std::numbers::pi))
    fail(ErrorKind::domain_degenerate, "slit half width must lie in (0, pi)");
  Domain d;
  d.kind_ = Kind::slit_annulus;
  d.inner_ = inner;
  d.outer_ = outer;
  d.slit_angle_ = slit_angle;
  d.slit_half_width_ = slit_half_width;
  return d;
}

bool Domain::contains(cplx z, double tol) const {
  double r = std::abs(z);
  if (r > outer_ + tol) return false;
  if (kind_ == Kind::disk) return true;
  if (r < inner_ - tol) return false;
  if (kind_ == Kind::annulus) return true;
  // Slit annulus: the open sector around slit_angle_ is removed.
  return angular_distance(std::arg(z), slit_angle_) >= slit_half_width_ - tol;
}

bool Domain::strictly_contains(const Domain& other, double gap) const {
  if (!(other.outer_ < outer_ - gap)) return false;
  if (inner_ > 0.0 && !(other.inner_ > inner_ + gap)) return false;
  return true;
}

Domain deformation_annulus(const Domain& d, double inset) {
  if (d.kind() != Domain::Kind::annulus)
    fail(ErrorKind::config, "deformation room is defined for annuli only");
  if (!(inset > 0.0) || !(inset < 0.5))
    fail(ErrorKind::config, "inset must lie in (0, 0.5)");
  double w = d.outer_radius() - d.inner_radius();
  return Domain::annulus(d.inner_radius() + inset * w, d.outer_radius() - inset * w);
}

Grid::Grid(const Domain& d, int radial, int angular) : domain_(d), radial_(radial), angular_(angular) {
  if (radial < 2) fail(ErrorKind::resolution, "grid needs at least 2 radial samples");
  switch (d.kind()) {
    case Domain::Kind::disk: {
      if (angular < 3) fail(ErrorKind::resolution, "grid needs at least 3 angular samples");
      has_center_ = true;
      wraps_ = true;
      radial_step_ = d.outer_radius() / static_cast<double>(radial - 1);
      angular_step_ = kTwoPi / static_cast<double>(angular);
      angle0_ = 0.0;
      radii_.resize(static_cast<std::size_t>(radial));
      radii_[0] = 0.0;
      for (int i = 1; i < radial; ++i) radii_[static_cast<std::size_t>(i)] = radial_step_ * i;
      nodes_.reserve(1 + static_cast<std::size_t>(radial - 1) * static_cast<std::size_t>(angular));
      nodes_.push_back(cplx(0.0));
      for (int i = 1; i < radial; ++i)
        for (int j = 0; j < angular; ++j)
          nodes_.push_back(std::polar(radii_[static_cast<std::size_t>(i)], angle(j)));
      break;
    }
    case Domain::Kind::annulus:
    case Domain::Kind::slit_annulus: {
      wraps_ = (d.kind() == Domain::Kind::annulus);
      if (wraps_ && angular < 3) fail(ErrorKind::resolution, "grid needs at least 3 angular samples");
      if (!wraps_ && angular < 2) fail(ErrorKind::resolution, "grid needs at least 2 angular samples");
      radial_step_ = (d.outer_radius() - d.inner_radius()) / static_cast<double>(radial - 1);
      if (wraps_) {
        angular_step_ = kTwoPi / static_cast<double>(angular);
        angle0_ = 0.0;
      } else {
        double span = kTwoPi - 2.0 * d.slit_half_width();
        angular_step_ = span / static_cast<double>(angular - 1);
        angle0_ = d.slit_angle() + d.slit_half_width();
      }
      radii_.resize(static_cast<std::size_t>(radial));
      for (int i = 0; i < radial; ++i)
        radii_[static_cast<std::size_t>(i)] = d.inner_radius() + radial_step_ * i;
      nodes_.reserve(static_cast<std::size_t>(radial) * static_cast<std::size_t>(angular));
      for (int i = 0; i < radial; ++i)
        for (int j = 0; j < angular; ++j)
          nodes_.push_back(std::polar(radii_[static_cast<std::size_t>(i)], angle(j)));
      break;
    }
  }
}

double Grid::angle(int j) const {
  if (wraps_) {
    int jj = ((j % angular_) + angular_) % angular_;
    return angle0_ + angular_step_ * jj;
  }
  return angle0_ + angular_step_ * j;
}

std::pair<int, int> Grid::ring_angle_of(std::size_t i) const {
  if (has_center_) {
    if (i == 0) return {-1, 0};
    std::size_t k = i - 1;
    return {1 + static_cast<int>(k) / angular_, static_cast<int>(k) % angular_};
  }
  return {static_cast<int>(i) / angular_, static_cast<int>(i) % angular_};
}

std::size_t Grid::index_of(int ring, int j) const {
  if (wraps_) j = ((j % angular_) + angular_) % angular_;
  if (has_center_) {
    if (ring <= 0) return 0;
    return 1 + static_cast<std::size_t>(ring - 1) * angular_ + static_cast<std::size_t>(j);
  }
  return static_cast<std::size_t>(ring) * angular_ + static_cast<std::size_t>(j);
}

std::size_t Grid::nearest_node(cplx z) const {
  double r = std::abs(z);
  int first_ring = has_center_ ? 1 : 0;
  double r0 = radii_[static_cast<std::size_t>(first_ring)];
  int ring = first_ring + static_cast<int>(std::lround((r - r0) / radial_step_));
  ring = std::clamp(ring, first_ring, radial_ - 1);
  if (has_center_ && r < 0.5 * radii_[1]) return 0;
  double th = std::arg(z);
  int j;
  if (wraps_) {
    j = static_cast<int>(std::lround((th - angle0_) / angular_step_));
  } else {
    double rel = std::remainder(th - angle0_, kTwoPi);
    if (rel < 0) rel += kTwoPi;
    j = std::clamp(static_cast<int>(std::lround(rel / angular_step_)), 0, angular_ - 1);
  }
  return index_of(ring, j);
}

std::size_t Grid::center_index() const {
  if (!has_center_) fail(ErrorKind::config, "grid has no centre node");
  return 0;
}

std::vector<std::size_t> Grid::inner_boundary_nodes() const {
  std::vector<std::size_t> out;
  if (has_center_) return out;  // a disk has no inner boundary circle
  for (int j = 0; j < angular_; ++j) out.push_back(index_of(0, j));
  return out;
}

std::vector<std::size_t> Grid::outer_boundary_nodes() const {
  std::vector<std::size_t> out;
  for (int j = 0; j < angular_; ++j) out.push_back(index_of(radial_ - 1, j));
  return out;
}

Cycle circle_cycle(double radius, int segments, bool clockwise) {
  if (segments < 3) fail(ErrorKind::config, "circle cycle needs at least 3 segments");
  Cycle c;
  c.pts.reserve(static_cast<std::size_t>(segments) + 1);
  double sgn = clockwise ? -1.0 : 1.0;
  for (int j = 0; j < segments; ++j)
    c.pts.push_back(std::polar(radius, sgn * kTwoPi * static_cast<double>(j) / segments));
  c.pts.push_back(c.pts.front());
  return c;
}

Cycle generator_cycle(const Domain& d, int segments) {
  if (d.cycle_rank() != 1) fail(ErrorKind::config, "domain has no homology generator");
  return circle_cycle(std::sqrt(d.inner_radius() * d.outer_radius()), segments);
}

void ExhaustionTower::validate() const {
  if (stages.empty()) fail(ErrorKind::config, "tower has no stages");
  for (std::size_t i = 0; i + 1 < stages.size(); ++i)
    if (!stages[i + 1].strictly_contains(stages[i], 0.0))
      fail(ErrorKind::domain_degenerate, "tower stages are not strictly nested");
}

ExhaustionTower disk_tower(int stages) {
  if (stages < 1) fail(ErrorKind::config, "tower needs at least one stage");
  ExhaustionTower t;
  for (int n = 1; n <= stages; ++n) t.stages.push_back(Domain::disk(static_cast<double>(n)));
  t.validate();
  return t;
}

ExhaustionTower annulus_tower(double inner, double outer, int stages) {
  if (stages < 1) fail(ErrorKind::config, "tower needs at least one stage");
  if (!(inner > 0.0) || !(outer > inner))
    fail(ErrorKind::domain_degenerate, "annulus tower needs 0 < inner < outer");
  double lo = std::log(inner), hi = std::log(outer);
  double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  ExhaustionTower t;
  for (int n = 1; n <= stages; ++n) {
    double h = half * static_cast<double>(n) / static_cast<double>(n + 1);
    t.stages.push_back(Domain::annulus(std::exp(mid - h), std::exp(mid + h)));
  }
  t.validate();
  return t;
}

double ArcPolyline::length() const {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) s += std::abs(pts[i + 1] - pts[i]);
  return s;
}

namespace {
double point_segment_distance(cplx p, cplx a, cplx b) {
  cplx d = b - a;
  double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(p - a);
  double t = std::clamp(((p - a) * std::conj(d)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + t * d));
}

double polyline_distance(const ArcPolyline& u, const ArcPolyline& v) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : u.pts)
    for (std::size_t i = 0; i + 1 < v.pts.size(); ++i)
      best = std::min(best, point_segment_distance(p, v.pts[i], v.pts[i + 1]));
  for (const auto& p : v.pts)
    for (std::size_t i = 0; i + 1 < u.pts.size(); ++i)
      best = std::min(best, point_segment_distance(p, u.pts[i], u.pts[i + 1]));
  return best;
}
}  // namespace

void AdmissibleSet::validate(double tol) const {
  for (const auto& arc : arcs) {
    if (arc.pts.size() < 2) fail(ErrorKind::config, "arc needs at least 2 points");
    cplx p0 = arc.pts.front();
    double r0 = std::abs(p0);
    bool on_boundary = std::abs(r0 - region.outer_radius()) <= tol ||
                       (region.inner_radius() > 0.0 && std::abs(r0 - region.inner_radius()) <= tol);
    if (!on_boundary || !region.contains(p0, tol))
      fail(ErrorKind::config, "arc must start on the region boundary");
    for (std::size_t i = 1; i < arc.pts.size(); ++i)
      if (region.contains(arc.pts[i], tol))
        fail(ErrorKind::config, "arc re-enters the region");
  }
  for (std::size_t a = 0; a < arcs.size(); ++a)
    for (std::size_t b = a + 1; b < arcs.size(); ++b)
      if (polyline_distance(arcs[a], arcs[b]) <= tol)
        fail(ErrorKind::config, "arcs must be pairwise disjoint");
}

}  // namespace minsurf
