#pragma once
// Discrete geodesics: the conformal factor lambda turns the polar grid into
// a weighted graph (edge weight = endpoint-average lambda times the chord
// length) and intrinsic distances become shortest paths.  8-neighbor
// connectivity (radial, angular, both diagonals) keeps the metrication
// anisotropy within a few percent; graph paths are genuine rectifiable
// curves, so on convex flat regions the distance converges from above.

#include <cstdint>
#include <vector>

#include "minsurf/labyrinth.hpp"
#include "minsurf/weierstrass.hpp"

namespace minsurf {

struct MetricGraph {
  GridPtr grid;
  // CSR adjacency, both directions stored.
  std::vector<std::size_t> offsets;
  std::vector<std::uint32_t> targets;
  std::vector<double> weights;

  std::size_t node_count() const { return offsets.empty() ? 0 : offsets.size() - 1; }
  std::size_t edge_count() const { return targets.size() / 2; }
};

// Builds the weighted graph from a metric field.  Nonpositive or non-finite
// lambda^2 anywhere is a branch_point error.  Serial and parallel builds
// produce bitwise-identical CSR arrays.
MetricGraph metric_graph(const MetricField& field, Exec exec = Exec::serial);

// Single-source (or multi-source: all seeds at distance 0) shortest-path
// field over the graph.
std::vector<double> distance_field(const MetricGraph& graph,
                                   const std::vector<std::size_t>& sources);

// min over `targets` of the shortest-path distance from `source`.
// Empty target set is a config error; unreachable targets a connectivity one.
double intrinsic_distance(const MetricGraph& graph, std::size_t source,
                          const std::vector<std::size_t>& targets);

// Distance from `source` to the domain boundary circles (outer, plus inner
// when the domain has one).
double boundary_distance(const MetricGraph& graph, std::size_t source);

// Lower-bound field for labyrinth crossings: the amplified factor
// (M + 1/M)^2/2 * |phi3|^2 on the bands, the universal bound |phi3|^2 off
// them.  Shortest paths under this field bound every crossing of the
// carrier annulus from below (up to discretization).
MetricField labyrinth_bound_metric(const LabyrinthSpec& spec, const LaurentSeries& phi3,
                                   double M, GridPtr grid, Exec exec = Exec::serial);

struct CrossingReport {
  double length = 0.0;    // shortest inner-to-outer boundary path
  double rho_hat = 0.0;   // length / (mu * N)
  double mu = 0.0;
  int N = 0;
};

// Shortest crossing of the band-carrier annulus under `field` (whose grid
// must cover the carrier; every band must meet at least one grid ring —
// resolution error otherwise).
CrossingReport crossing_length(const LabyrinthSpec& spec, const MetricField& field,
                               double mu);

}  // namespace minsurf
