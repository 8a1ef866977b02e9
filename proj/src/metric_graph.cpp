#include "minsurf/metric_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include "minsurf/error.hpp"

namespace minsurf {

namespace {

// Deterministic neighbor enumeration for one node: down-ring first, then
// same-ring, then up-ring, angular index ascending within each group.
// `ring` is -1 for the disk centre.
template <typename F>
void for_neighbors(const Grid& g, int ring, int j, F&& emit) {
  const int last_ring = g.radial_count() - 1;
  const bool wraps = g.wraps();
  const int na = g.angular_count();
  const int first_ring = g.has_center() ? 1 : 0;

  if (ring == -1) {  // centre: spokes to every first-ring node
    for (int k = 0; k < na; ++k) emit(g.index_of(first_ring, k));
    return;
  }
  auto angular_ok = [&](int jj) { return wraps || (jj >= 0 && jj < na); };
  // toward the centre / inner ring
  if (ring > first_ring) {
    for (int dj : {-1, 0, 1})
      if (angular_ok(j + dj)) emit(g.index_of(ring - 1, j + dj));
  } else if (ring == first_ring && g.has_center()) {
    emit(g.center_index());
  }
  // same ring
  for (int dj : {-1, 1})
    if (angular_ok(j + dj)) emit(g.index_of(ring, j + dj));
  // outward
  if (ring < last_ring) {
    for (int dj : {-1, 0, 1})
      if (angular_ok(j + dj)) emit(g.index_of(ring + 1, j + dj));
  }
}

}  // namespace

MetricGraph metric_graph(const MetricField& field, Exec exec) {
  const Grid& g = *field.grid;
  const std::size_t n = g.node_count();
  if (field.lambda2.size() != n)
    fail(ErrorKind::config, "metric field does not match its grid");
  for (std::size_t i = 0; i < n; ++i) {
    double v = field.lambda2[i];
    if (!(v > 0.0) || !std::isfinite(v)) {
      std::ostringstream msg;
      msg << "conformal factor not positive at node " << i << " (lambda^2 = " << v << ")";
      fail(ErrorKind::branch_point, msg.str());
    }
  }

  std::vector<double> lambda(n);
  for_each_index(n, exec, [&](std::size_t i) { lambda[i] = std::sqrt(field.lambda2[i]); });

  MetricGraph graph;
  graph.grid = field.grid;
  graph.offsets.assign(n + 1, 0);

  // pass 1: degrees
  std::vector<std::size_t> degree(n, 0);
  for_each_index(n, exec, [&](std::size_t i) {
    auto [ring, j] = g.ring_angle_of(i);
    std::size_t d = 0;
    for_neighbors(g, ring, j, [&](std::size_t) { ++d; });
    degree[i] = d;
  });
  for (std::size_t i = 0; i < n; ++i) graph.offsets[i + 1] = graph.offsets[i] + degree[i];
  graph.targets.resize(graph.offsets[n]);
  graph.weights.resize(graph.offsets[n]);

  // pass 2: fill rows (each row written by exactly one index: race-free)
  for_each_index(n, exec, [&](std::size_t i) {
    auto [ring, j] = g.ring_angle_of(i);
    std::size_t at = graph.offsets[i];
    const cplx zi = g.node(i);
    for_neighbors(g, ring, j, [&](std::size_t k) {
      graph.targets[at] = static_cast<std::uint32_t>(k);
      graph.weights[at] = 0.5 * (lambda[i] + lambda[k]) * std::abs(g.node(k) - zi);
      ++at;
    });
  });
  return graph;
}

std::vector<double> distance_field(const MetricGraph& graph,
                                   const std::vector<std::size_t>& sources) {
  const std::size_t n = graph.node_count();
  if (sources.empty()) fail(ErrorKind::config, "shortest path needs at least one source");
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, inf);
  using Item = std::pair<double, std::uint32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  for (std::size_t s : sources) {
    if (s >= n) fail(ErrorKind::config, "source node out of range");
    dist[s] = 0.0;
    heap.emplace(0.0, static_cast<std::uint32_t>(s));
  }
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;  // stale entry
    for (std::size_t e = graph.offsets[u]; e < graph.offsets[u + 1]; ++e) {
      std::uint32_t v = graph.targets[e];
      double nd = d + graph.weights[e];
      if (nd < dist[v]) {
        dist[v] = nd;
        heap.emplace(nd, v);
      }
    }
  }
  return dist;
}

double intrinsic_distance(const MetricGraph& graph, std::size_t source,
                          const std::vector<std::size_t>& targets) {
  if (targets.empty()) fail(ErrorKind::config, "distance query needs a target set");
  std::vector<double> dist = distance_field(graph, {source});
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t t : targets) {
    if (t >= graph.node_count()) fail(ErrorKind::config, "target node out of range");
    best = std::min(best, dist[t]);
  }
  if (!std::isfinite(best)) fail(ErrorKind::connectivity, "target set unreachable from source");
  return best;
}

double boundary_distance(const MetricGraph& graph, std::size_t source) {
  std::vector<std::size_t> targets = graph.grid->outer_boundary_nodes();
  std::vector<std::size_t> inner = graph.grid->inner_boundary_nodes();
  targets.insert(targets.end(), inner.begin(), inner.end());
  return intrinsic_distance(graph, source, targets);
}

MetricField labyrinth_bound_metric(const LabyrinthSpec& spec, const LaurentSeries& phi3,
                                   double M, GridPtr grid, Exec exec) {
  const Grid& g = *grid;
  const double amp = 0.5 * (M + 1.0 / M) * (M + 1.0 / M);
  MetricField field;
  field.grid = grid;
  field.lambda2.resize(g.node_count());
  for_each_index(g.node_count(), exec, [&](std::size_t i) {
    cplx z = g.node(i);
    double base = std::norm(phi3.eval(z));
    field.lambda2[i] = in_labyrinth(spec, z) ? amp * base : base;
  });
  field.min_value = field.lambda2[0];
  field.max_value = field.lambda2[0];
  field.argmin = 0;
  for (std::size_t i = 1; i < field.lambda2.size(); ++i) {
    if (field.lambda2[i] < field.min_value) {
      field.min_value = field.lambda2[i];
      field.argmin = i;
    }
    field.max_value = std::max(field.max_value, field.lambda2[i]);
  }
  return field;
}

CrossingReport crossing_length(const LabyrinthSpec& spec, const MetricField& field,
                               double mu) {
  const Grid& g = *field.grid;
  if (g.domain().kind() != Domain::Kind::annulus)
    fail(ErrorKind::config, "crossing is measured on an annulus grid");
  // every band needs at least one sampled ring, or the labyrinth is invisible
  for (std::size_t bi = 0; bi < spec.bands.size(); ++bi) {
    const Band& b = spec.bands[bi];
    bool hit = false;
    for (int i = 0; i < g.radial_count() && !hit; ++i) {
      double rho = g.ring_radius(i);
      hit = (rho >= b.r_lo && rho <= b.r_hi);
    }
    if (!hit) {
      std::ostringstream msg;
      msg << "band " << (bi + 1) << " falls between grid rings; refine the radial grid";
      fail(ErrorKind::resolution, msg.str());
    }
  }
  MetricGraph graph = metric_graph(field);
  std::vector<double> dist = distance_field(graph, g.inner_boundary_nodes());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t t : g.outer_boundary_nodes()) best = std::min(best, dist[t]);
  if (!std::isfinite(best)) fail(ErrorKind::connectivity, "no crossing path found");

  CrossingReport report;
  report.length = best;
  report.mu = mu;
  report.N = spec.N;
  report.rho_hat = best / (mu * static_cast<double>(spec.N));
  return report;
}

}  // namespace minsurf
