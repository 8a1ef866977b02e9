#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "minsurf/laurent.hpp"

namespace minsurf {

// Planar regions the toolkit works on, all centred at the origin:
//   disk          |z| <= R
//   annulus       r <= |z| <= R
//   slit_annulus  annulus minus an angular sector (simply connected)
// The slit sector is { |arg(z) - slit_angle| < slit_half_width }.
class Domain {
 public:
  enum class Kind { disk, annulus, slit_annulus };

  static Domain disk(double outer);
  static Domain annulus(double inner, double outer);
  static Domain slit_annulus(double inner, double outer, double slit_angle, double slit_half_width);

  Kind kind() const { return kind_; }
  double inner_radius() const { return inner_; }  // 0 for disks
  double outer_radius() const { return outer_; }
  double slit_angle() const { return slit_angle_; }
  double slit_half_width() const { return slit_half_width_; }

  bool contains(cplx z, double tol = 1e-12) const;

  // Rank of the first homology group: 1 for an annulus, else 0.
  int cycle_rank() const { return kind_ == Kind::annulus ? 1 : 0; }

  // Whether Laurent expansions on this region may carry negative powers.
  // Slit annuli live inside a punctured plane, so they do.
  bool allows_negative_powers() const { return kind_ != Kind::disk; }

  // Strict containment with a positive gap everywhere (used for exhaustions
  // and for sub-annulus construction).
  bool strictly_contains(const Domain& other, double gap = 0.0) const;

 private:
  Kind kind_ = Kind::disk;
  double inner_ = 0.0, outer_ = 1.0;
  double slit_angle_ = 0.0, slit_half_width_ = 0.0;
};

// The concentric sub-annulus used as deformation room: shrink both gaps of
// [inner, outer] by `inset` of the width (default one tenth).
Domain deformation_annulus(const Domain& d, double inset = 0.1);

// Polar sample grid over a Domain.  Annular grids place rings at
// inner + i*(outer-inner)/(radial-1), so both boundary circles are sampled
// exactly; disk grids add the centre as node 0 and omit the inner rings'
// collapse.  Angular samples wrap for disks/annuli and clip to the kept
// sector for slit annuli.
class Grid {
 public:
  Grid(const Domain& d, int radial, int angular);

  const Domain& domain() const { return domain_; }
  int radial_count() const { return radial_; }
  int angular_count() const { return angular_; }
  bool has_center() const { return has_center_; }
  bool wraps() const { return wraps_; }

  std::size_t node_count() const { return nodes_.size(); }
  cplx node(std::size_t i) const { return nodes_[i]; }
  const std::vector<cplx>& nodes() const { return nodes_; }

  double ring_radius(int ring) const { return radii_[static_cast<std::size_t>(ring)]; }
  double angle(int j) const;
  double radial_step() const { return radial_step_; }
  double angular_step() const { return angular_step_; }

  // ring/angle indices of a node; the disk centre reports ring -1.
  std::pair<int, int> ring_angle_of(std::size_t i) const;
  std::size_t index_of(int ring, int j) const;

  // Nearest grid node to a point (same metric the builders use).
  std::size_t nearest_node(cplx z) const;

  std::size_t center_index() const;  // throws unless has_center()

  // Nodes on |z| = inner/outer boundary circle.
  std::vector<std::size_t> inner_boundary_nodes() const;
  std::vector<std::size_t> outer_boundary_nodes() const;

 private:
  Domain domain_;
  int radial_, angular_;
  bool has_center_ = false, wraps_ = true;
  double radial_step_ = 0.0, angular_step_ = 0.0, angle0_ = 0.0;
  std::vector<double> radii_;
  std::vector<cplx> nodes_;
};

using GridPtr = std::shared_ptr<const Grid>;

// Closed polyline contour, oriented; pts.front() == pts.back().
struct Cycle {
  std::vector<cplx> pts;
};

Cycle circle_cycle(double radius, int segments = 4096, bool clockwise = false);
// The homology generator of an annulus: the concentric circle at the
// geometric-mean radius of the band.
Cycle generator_cycle(const Domain& d, int segments = 4096);

// Nested compact stages V_1 c int(V_2) c ... exhausting an open limit region.
struct ExhaustionTower {
  std::vector<Domain> stages;
  void validate() const;  // strict nesting with positive gaps
};

ExhaustionTower disk_tower(int stages);                 // V_n = disk(n)
// Stages of closed annuli filling the open annulus (inner, outer):
// radii inner^(n/(n+1)) on the unit-log scale, i.e. gap shrinking like 1/(n+1).
ExhaustionTower annulus_tower(double inner, double outer, int stages);

// Jordan arc represented by a polyline.
struct ArcPolyline {
  std::vector<cplx> pts;
  double length() const;
};

// A compact region together with disjoint arcs attached to its boundary;
// the union must stay connected and the arcs must leave the region
// immediately (only the first point may touch it).
struct AdmissibleSet {
  Domain region;
  std::vector<ArcPolyline> arcs;
  void validate(double tol = 1e-9) const;
};

}  // namespace minsurf
