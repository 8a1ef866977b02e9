#include <doctest.h>

#include <cmath>
#include <numbers>

#include "minsurf/domain.hpp"
#include "minsurf/error.hpp"

using namespace minsurf;

TEST_CASE("region construction guards") {
  CHECK_THROWS_AS(Domain::annulus(1.0, 0.5), const Error&);
  CHECK_THROWS_AS(Domain::annulus(0.0, 1.0), const Error&);
  CHECK_THROWS_AS(Domain::disk(-1.0), const Error&);
  CHECK_THROWS_AS(Domain::slit_annulus(0.5, 1.0, 0.0, 4.0), const Error&);
}

TEST_CASE("membership") {
  Domain a = Domain::annulus(0.5, 1.0);
  CHECK(a.contains(cplx(0.75, 0.0)));
  CHECK(!a.contains(cplx(0.4, 0.0)));
  CHECK(!a.contains(cplx(1.2, 0.0)));
  CHECK(a.contains(cplx(0.5, 0.0)));  // boundary included

  Domain s = Domain::slit_annulus(0.5, 1.0, 0.0, std::numbers::pi / 6.0);
  CHECK(!s.contains(cplx(0.75, 0.0)));                 // inside the removed sector
  CHECK(s.contains(cplx(-0.75, 0.0)));                 // opposite side kept
  CHECK(s.contains(std::polar(0.75, std::numbers::pi / 6.0)));  // sector edge is kept
  CHECK(s.cycle_rank() == 0);
  CHECK(a.cycle_rank() == 1);
  CHECK(Domain::disk(1.0).cycle_rank() == 0);
}

TEST_CASE("annulus grid layout") {
  Grid g(Domain::annulus(0.5, 1.0), 4, 8);
  CHECK(g.node_count() == 32);
  CHECK(g.radial_step() == doctest::Approx(0.5 / 3.0).epsilon(1e-14));
  CHECK(g.ring_radius(0) == doctest::Approx(0.5));
  CHECK(g.ring_radius(3) == doctest::Approx(1.0));
  CHECK(g.wraps());
  auto [ring, j] = g.ring_angle_of(27);
  CHECK(ring == 3);
  CHECK(j == 3);
  CHECK(g.index_of(3, 3) == 27);
  CHECK(g.index_of(3, 11) == 27);  // wraps mod 8
  CHECK(g.inner_boundary_nodes().size() == 8);
  CHECK(g.outer_boundary_nodes().front() == 24);
}

TEST_CASE("disk grid has a centre node") {
  Grid g(Domain::disk(1.0), 3, 8);
  CHECK(g.node_count() == 17);
  CHECK(g.has_center());
  CHECK(g.center_index() == 0);
  CHECK(g.ring_radius(1) == doctest::Approx(0.5));
  CHECK(g.inner_boundary_nodes().empty());
  CHECK(g.outer_boundary_nodes().size() == 8);
  auto [ring, j] = g.ring_angle_of(0);
  CHECK(ring == -1);
  (void)j;
}

TEST_CASE("slit annulus grid does not wrap") {
  Domain s = Domain::slit_annulus(0.5, 1.0, 0.0, 0.25);
  Grid g(s, 3, 9);
  CHECK(!g.wraps());
  CHECK(g.node_count() == 27);
  // first and last columns sit on the sector edges
  CHECK(std::abs(std::arg(g.node(g.index_of(0, 0))) - 0.25) < 1e-12);
  CHECK(std::abs(std::remainder(std::arg(g.node(g.index_of(0, 8))) + 0.25, 2 * std::numbers::pi)) < 1e-12);
}

TEST_CASE("nearest node") {
  Grid g(Domain::annulus(0.5, 1.0), 4, 8);
  CHECK(g.nearest_node(std::polar(0.51, 0.01)) == g.index_of(0, 0));
  double th = 2.0 * std::numbers::pi * 3.0 / 8.0 + 0.1;
  CHECK(g.nearest_node(std::polar(1.0, th)) == g.index_of(3, 3));

  Grid d(Domain::disk(1.0), 3, 8);
  CHECK(d.nearest_node(cplx(0.01, 0.0)) == d.center_index());
}

TEST_CASE("cycles") {
  Cycle c = circle_cycle(2.0, 64);
  CHECK(c.pts.size() == 65);
  CHECK(c.pts.front() == c.pts.back());
  Domain a = Domain::annulus(0.5, 1.0);
  Cycle gen = generator_cycle(a, 64);
  CHECK(std::abs(std::abs(gen.pts[0]) - std::sqrt(0.5)) < 1e-14);
  CHECK_THROWS_AS(generator_cycle(Domain::disk(1.0)), const Error&);
}

TEST_CASE("towers nest strictly") {
  ExhaustionTower t = disk_tower(3);
  CHECK(t.stages.size() == 3);
  CHECK(t.stages[0].outer_radius() == doctest::Approx(1.0));
  CHECK(t.stages[2].outer_radius() == doctest::Approx(3.0));

  double e = std::numbers::e;
  ExhaustionTower a = annulus_tower(1.0 / e, e, 2);
  CHECK(a.stages[0].inner_radius() == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
  CHECK(a.stages[0].outer_radius() == doctest::Approx(std::exp(0.5)).epsilon(1e-12));
  CHECK(a.stages[1].inner_radius() == doctest::Approx(std::exp(-2.0 / 3.0)).epsilon(1e-12));
  a.validate();

  ExhaustionTower bad;
  bad.stages = {Domain::disk(2.0), Domain::disk(2.0)};
  CHECK_THROWS_AS(bad.validate(), const Error&);
}

TEST_CASE("deformation room") {
  Domain c = deformation_annulus(Domain::annulus(1.0, 2.0), 0.1);
  CHECK(c.inner_radius() == doctest::Approx(1.1));
  CHECK(c.outer_radius() == doctest::Approx(1.9));
  CHECK_THROWS_AS(deformation_annulus(Domain::disk(1.0)), const Error&);
}

TEST_CASE("admissible sets") {
  AdmissibleSet ok;
  ok.region = Domain::annulus(0.5, 1.0);
  ok.arcs.push_back({{cplx(1.0, 0.0), cplx(1.25, 0.0), cplx(1.5, 0.0)}});
  ok.arcs.push_back({{cplx(-1.0, 0.0), cplx(-1.5, 0.0)}});
  ok.validate();

  AdmissibleSet inside = ok;
  inside.arcs[0].pts[1] = cplx(0.9, 0.0);  // dips back into the region
  CHECK_THROWS_AS(inside.validate(), const Error&);

  AdmissibleSet floating = ok;
  floating.arcs[0].pts[0] = cplx(1.2, 0.0);  // does not start on the boundary
  CHECK_THROWS_AS(floating.validate(), const Error&);

  AdmissibleSet crossing = ok;
  crossing.arcs[1] = {{cplx(1.0, 0.0), cplx(1.6, 0.0)}};  // collides with arc 0
  CHECK_THROWS_AS(crossing.validate(), const Error&);

  CHECK(ok.arcs[0].length() == doctest::Approx(0.5));
}
