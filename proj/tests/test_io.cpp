#include <cmath>
#include <complex>
#include <memory>
#include <string>

#include "doctest.h"
#include "minsurf/domain.hpp"
#include "minsurf/error.hpp"
#include "minsurf/io.hpp"
#include "minsurf/labyrinth.hpp"

using namespace minsurf;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

std::string error_text(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

ImmersionField flat_annulus_field(int radial, int angular) {
  ImmersionField f;
  f.grid = std::make_shared<Grid>(Domain::annulus(1.0, 2.0), radial, angular);
  f.position.resize(f.grid->node_count());
  for (std::size_t i = 0; i < f.grid->node_count(); ++i) {
    cplx z = f.grid->node(i);
    f.position[i] = {z.real(), z.imag(), z.real()};  // planar graph of Re z
  }
  return f;
}

}  // namespace

TEST_CASE("config round-trips through its own serialization") {
  RunConfig c;
  c.domain = Domain::annulus(0.5, 2.0);
  c.prescription = "log-abs";
  c.flux = {0.0, 0.0, 2.0 * kPi};
  c.stages = 2;
  c.eps = 0.25;
  c.K = 32;
  c.grid_radial = 65;
  c.grid_angular = 128;
  c.mesh_path = "out/run.obj";
  c.report_csv = "out/run.csv";
  RunConfig back = parse_config(serialize(c));
  CHECK(back == c);

  RunConfig custom;
  custom.prescription = "custom";
  custom.custom_dh = {{0.0, 1.0, 0.0}, {2.0, 0.5, -0.25}};
  CHECK(parse_config(serialize(custom)) == custom);
}

TEST_CASE("minimal config accepts, inconsistent flux rejects with the field path") {
  std::string minimal = R"({
    "spec_version": "1",
    "domain": {"kind": "disk", "outer": 1.0},
    "prescription": "re-z",
    "flux": [0, 0, 0]
  })";
  RunConfig c = parse_config(minimal);
  CHECK(c.prescription == "re-z");
  CHECK(c.stages == 3);  // defaults fill in

  // log-abs with a horizontal flux claim: the vertical form's cycle
  // integral pins the third component to 2*pi, so (1,0,0) is a lie.
  std::string bad = R"({
    "spec_version": "1",
    "domain": {"kind": "annulus", "inner": 0.5, "outer": 2.0},
    "prescription": "log-abs",
    "flux": [1, 0, 0]
  })";
  std::string msg = error_text([&] { parse_config(bad); });
  CHECK(msg.find("flux") != std::string::npos);
  CHECK(msg.find("2*pi") != std::string::npos);
}

TEST_CASE("config errors carry the offending field path") {
  std::string unknown = R"({"spec_version":"1","domain":{"kind":"disk","outer":1},
    "solver":{"stages":2,"epsilon":0.5}})";
  CHECK(error_text([&] { parse_config(unknown); }).find("solver.epsilon") !=
        std::string::npos);

  std::string badres = R"({"spec_version":"1","domain":{"kind":"disk","outer":1},
    "grid":{"radial":3,"angular":64}})";
  CHECK(error_text([&] { parse_config(badres); }).find("grid.radial") !=
        std::string::npos);

  std::string badtype = R"({"spec_version":"1","domain":{"kind":"disk","outer":1},
    "solver":{"K":"many"}})";
  CHECK(error_text([&] { parse_config(badtype); }).find("solver.K") !=
        std::string::npos);

  std::string baddomain = R"({"spec_version":"1","domain":{"kind":"square","outer":1}})";
  CHECK(error_text([&] { parse_config(baddomain); }).find("domain.kind") !=
        std::string::npos);
}

TEST_CASE("malformed config text reports line and column") {
  std::string broken = "{\n  \"spec_version\": \"1\",\n  \"domain\": }\n";
  std::string msg = error_text([&] { parse_config(broken); });
  CHECK(msg.find("line 3") != std::string::npos);
  CHECK(msg.find("column") != std::string::npos);
}

TEST_CASE("triple serialization round-trips and demands its convention tag") {
  WeierstrassTriple t;
  t.carrier = Domain::annulus(0.5, 2.0);
  t.phi[0] = LaurentSeries(-2, {cplx(0.5, 0.0), cplx(0.0, 0.0), cplx(-0.5, 0.0)});
  t.phi[1] = LaurentSeries(-2, {cplx(0.0, 0.5), cplx(0.0, 0.0), cplx(0.0, 0.5)});
  t.phi[2] = LaurentSeries(-1, {cplx(1.0, 0.0)});
  std::string text = triple_to_json(t);
  CHECK(text.find("dX=Re(phi)") != std::string::npos);

  WeierstrassTriple back = triple_from_json(text);
  CHECK(back.carrier.kind() == Domain::Kind::annulus);
  CHECK(back.carrier.inner_radius() == 0.5);
  for (int i = 0; i < 3; ++i) {
    CHECK(back.phi[static_cast<std::size_t>(i)].min_degree() ==
          t.phi[static_cast<std::size_t>(i)].min_degree());
    CHECK(back.phi[static_cast<std::size_t>(i)].raw() ==
          t.phi[static_cast<std::size_t>(i)].raw());
  }

  // Same numbers without the tag: ambiguous, so refused.
  std::string untagged = text;
  auto pos = untagged.find("dX=Re(phi)");
  untagged.replace(pos, 10, "dX=Im(phi)");
  CHECK_THROWS_AS(triple_from_json(untagged), Error);
}

TEST_CASE("mesh export counts quads with angular wraparound") {
  ImmersionField f = flat_annulus_field(4, 8);
  std::string obj = export_mesh(f);
  std::size_t verts = 0, faces = 0, pos = 0;
  for (pos = 0; pos < obj.size();) {
    if (obj.compare(pos, 2, "v ") == 0) ++verts;
    if (obj.compare(pos, 2, "f ") == 0) ++faces;
    pos = obj.find('\n', pos);
    if (pos == std::string::npos) break;
    ++pos;
  }
  CHECK(verts == 32);
  CHECK(faces == 24);

  // Deterministic bytes on identical input.
  CHECK(export_mesh(f) == obj);

  // The planar graph keeps its height column equal to the prescribed values.
  // (Vertex lines carry x y z; z was set to Re z of the node.)
  CHECK(obj.find("v 2 0 2\n") != std::string::npos);
}

TEST_CASE("mesh export names the node carrying a non-finite coordinate") {
  ImmersionField f = flat_annulus_field(4, 8);
  f.position[13][2] = std::nan("");
  std::string msg = error_text([&] { export_mesh(f); });
  CHECK(msg.find("node 13") != std::string::npos);
}

TEST_CASE("disk grids close the mesh with a centre fan") {
  ImmersionField f;
  f.grid = std::make_shared<Grid>(Domain::disk(1.0), 4, 8);
  f.position.resize(f.grid->node_count());
  for (std::size_t i = 0; i < f.grid->node_count(); ++i) {
    cplx z = f.grid->node(i);
    f.position[i] = {z.real(), z.imag(), 0.0};
  }
  std::string obj = export_mesh(f);
  std::size_t tris = 0, quads = 0;
  for (std::size_t pos = 0; pos < obj.size();) {
    if (obj.compare(pos, 2, "f ") == 0) {
      std::size_t end = obj.find('\n', pos);
      std::size_t spaces = 0;
      for (std::size_t i = pos; i < end; ++i)
        if (obj[i] == ' ') ++spaces;
      (spaces == 3 ? tris : quads) += 1;
    }
    pos = obj.find('\n', pos);
    if (pos == std::string::npos) break;
    ++pos;
  }
  CHECK(tris == 8);
  CHECK(quads == 24);
}

TEST_CASE("report export: fixed columns, schedule targets, empty header") {
  CHECK(reports_to_csv({}) ==
        "stage,sup_change,sup_change_target,distance,distance_target,flux_err,"
        "h_err,min_phi3,N,M,mu\n");

  std::vector<StageReport> reports(3);
  for (int n = 1; n <= 3; ++n) {
    StageReport& r = reports[static_cast<std::size_t>(n - 1)];
    double nn = static_cast<double>(n) * n;
    r.stage = n;
    r.sup_change = 0.5 / nn;
    r.sup_change_target = 1.0 / nn;
    r.distance = nn + 1.0;
    r.distance_target = nn;
    r.min_phi3 = 1.0;
    r.N = 3;
    r.M = 324.0;
    r.mu = 0.9;
  }
  std::string csv = reports_to_csv(reports);
  CHECK(csv.find("\n1,0.5,1,2,1,0,0,1,3,324,0.9\n") != std::string::npos);
  CHECK(csv.find("\n3,0.0555555555556,0.111111111111,10,9,0,0,1,3,324,0.9\n") !=
        std::string::npos);

  std::string jsonl = reports_to_jsonl(reports);
  std::size_t lines = 0;
  for (char ch : jsonl)
    if (ch == '\n') ++lines;
  CHECK(lines == 3);
  CHECK(jsonl.find("\"stage\":1") != std::string::npos);
  CHECK(jsonl.find("\"distance_target\":9.0") != std::string::npos);
  CHECK(reports_to_jsonl({}).empty());
}

TEST_CASE("labyrinth geometry exports for plotting") {
  LabyrinthSpec spec = build_labyrinth(Domain::annulus(1.0, 2.0), 3);
  std::string j = labyrinth_to_json(spec);
  CHECK(j.find("\"N\": 3") != std::string::npos);
  CHECK(j.find("\"bands\"") != std::string::npos);

  Grid g(Domain::annulus(1.0, 2.0), 33, 64);
  std::string csv = labyrinth_membership_csv(spec, g);
  // every node appears; some are in bands, some not
  std::size_t lines = 0;
  bool seen_in = false, seen_out = false;
  for (std::size_t pos = 0; pos < csv.size();) {
    std::size_t end = csv.find('\n', pos);
    if (end == std::string::npos) break;
    if (lines > 0) {
      std::size_t comma = csv.rfind(',', end);
      int band = std::stoi(csv.substr(comma + 1, end - comma - 1));
      (band > 0 ? seen_in : seen_out) = true;
    }
    ++lines;
    pos = end + 1;
  }
  CHECK(lines == g.node_count() + 1);
  CHECK(seen_in);
  CHECK(seen_out);

  CHECK(distance_to_csv({1.5, 2.5}) == "node,value\n0,1.5\n1,2.5\n");
}
