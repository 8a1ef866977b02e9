// Configuration, serialization, and export: the batch interface around the
// numerical modules.  Everything here is deterministic — identical inputs
// produce byte-identical outputs.
#pragma once

#include <array>
#include <string>
#include <vector>

#include "minsurf/domain.hpp"
#include "minsurf/driver.hpp"
#include "minsurf/labyrinth.hpp"
#include "minsurf/weierstrass.hpp"

namespace minsurf {

// One batch run, as described by a JSON config.  The vertical form comes
// from a named catalog; "custom" reads Laurent coefficients from the
// config itself.  `eps` seeds the per-stage schedule eps/n^2.
struct RunConfig {
  std::string spec_version = "1";
  Domain domain = Domain::disk(1.0);  // first carrier of the run
  std::string prescription = "re-z";  // "re-z" | "log-abs" | "custom"
  // rows (k, re, im): coefficient of z^k in the custom vertical form
  std::vector<std::array<double, 3>> custom_dh;
  std::array<double, 3> flux = {0.0, 0.0, 0.0};
  int stages = 3;
  double eps = 1.0;
  int K = 64;
  int newton_max = 50;
  int grid_radial = 193;
  int grid_angular = 384;
  std::string mesh_path;     // outputs; empty = skip
  std::string report_csv;
  std::string report_jsonl;
  std::string triple_path;

  bool operator==(const RunConfig& o) const;
};

// Parses and validates; every complaint names the field it is about
// ("solver.K", "domain.outer", ...), malformed text is reported with line
// and column.  A prescription whose vertical flux cannot match flux[2] is
// rejected here, not at run time.
RunConfig parse_config(const std::string& text);
std::string serialize(const RunConfig& config);

// Resolves the catalog name (and custom coefficients) to the prescription.
HarmonicPrescription prescription_from(const RunConfig& config);

// Triple <-> JSON.  Schema: spec_version, convention tag "dX=Re(phi)",
// carrier, degree, three coefficient arrays as [re, im] pairs with their
// lowest degree.  A file without the convention tag is rejected — the
// numbers would be ambiguous.
std::string triple_to_json(const WeierstrassTriple& t);
WeierstrassTriple triple_from_json(const std::string& text);

// Wavefront OBJ: one vertex per grid node (9 significant digits), quad
// faces from grid adjacency with angular wraparound, a triangle fan around
// the centre node of disk grids.  Non-finite coordinates are an error
// naming the node.
std::string export_mesh(const ImmersionField& field);

// Stage reports as CSV with the fixed column order
//   stage, sup_change, sup_change_target, distance, distance_target,
//   flux_err, h_err, min_phi3, N, M, mu
// and as a JSON-lines mirror of the same fields.  No rows -> header only.
std::string reports_to_csv(const std::vector<StageReport>& reports);
std::string reports_to_jsonl(const std::vector<StageReport>& reports);

// Labyrinth geometry for reproducibility and plotting: JSON of the band
// family, and per-node membership of a grid as CSV
// (node, re, im, band) with band = 0 off the bands.
std::string labyrinth_to_json(const LabyrinthSpec& spec);
std::string labyrinth_membership_csv(const LabyrinthSpec& spec, const Grid& grid);

// Distance field as CSV (node, value).
std::string distance_to_csv(const std::vector<double>& field);

}  // namespace minsurf
