#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "classc/errors.hpp"
#include "classc/graph.hpp"

namespace classc {

enum class Boundary { Torus, Open };

/// L-lattice on an L x L grid of degree-2 nodes. Every node passage turns
/// through +-90 degrees:
///   sublattice A (x+y even): horizontal edges come in, vertical edges go out;
///   sublattice B (x+y odd):  vertical in, horizontal out.
/// Channel labelling (fixed; the classical first-passage weight is cos^2(theta)
/// for a right turn and sin^2(theta) for a left turn):
///   A: in-1 arrives from the west, in-2 from the east; out-1 exits south,
///      out-2 exits north.
///   B: in-1 arrives from the south, in-2 from the north; out-1 exits east,
///      out-2 exits west.
/// All S-matrices are the rotation ((cos, sin), (-sin, cos)).
struct LLattice {
  NetworkGraph graph;
  int size = 0;
  Boundary boundary = Boundary::Torus;
  double theta = 0.0;
  // per edge (dense id 0..E-1): source-node grid position and unit step
  std::vector<std::pair<int, int>> edge_origin;
  std::vector<std::pair<int, int>> edge_step;

  int node_id(int x, int y) const { return y * size + x; }
  std::pair<int, int> node_xy(int id) const { return {id % size, id / size}; }
};

inline LLattice build_l_lattice_full(int length, double theta, Boundary boundary) {
  if (length < 2 || length % 2 != 0) throw ParamError("build_l_lattice: L must be even and >= 2");
  LLattice lat;
  lat.size = length;
  lat.boundary = boundary;
  lat.theta = theta;

  MatX rot(2, 2);
  rot << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);

  std::vector<Node> nodes;
  nodes.reserve(static_cast<std::size_t>(length) * static_cast<std::size_t>(length));
  for (int y = 0; y < length; ++y)
    for (int x = 0; x < length; ++x) {
      Node n;
      n.id = lat.node_id(x, y);
      n.scattering = rot;
      nodes.push_back(std::move(n));
    }

  const bool torus = boundary == Boundary::Torus;
  auto wrap = [&](int c) { return ((c % length) + length) % length; };

  std::vector<Edge> edges;
  int next_id = 0;
  // out-slot scan in node id, then channel order; assigns every full edge and
  // every lead-out half a deterministic id
  for (int y = 0; y < length; ++y)
    for (int x = 0; x < length; ++x) {
      const bool a_node = ((x + y) % 2) == 0;
      for (int ch = 1; ch <= 2; ++ch) {
        int dx = 0, dy = 0;
        if (a_node) {
          dy = (ch == 1) ? -1 : +1;  // out-1 south, out-2 north
        } else {
          dx = (ch == 1) ? +1 : -1;  // out-1 east, out-2 west
        }
        const int tx = x + dx, ty = y + dy;
        Edge e;
        e.id = next_id++;
        e.source = EdgeEndpoint{lat.node_id(x, y), ch};
        lat.edge_origin.emplace_back(x, y);
        lat.edge_step.emplace_back(dx, dy);
        const bool inside = tx >= 0 && tx < length && ty >= 0 && ty < length;
        if (torus || inside) {
          const int nx = wrap(tx), ny = wrap(ty);
          // arrival channel at the target follows the same labelling
          int in_ch;
          if (((nx + ny) % 2) == 0) {
            in_ch = (dx == +1) ? 1 : 2;  // A: 1 from west (moving east), 2 from east
          } else {
            in_ch = (dy == +1) ? 1 : 2;  // B: 1 from south (moving north), 2 from north
          }
          e.target = EdgeEndpoint{lat.node_id(nx, ny), in_ch};
        }
        edges.push_back(e);
      }
    }
  if (!torus) {
    // feed the unreached in-slots with lead-in halves
    std::vector<std::vector<bool>> fed(nodes.size(), std::vector<bool>(2, false));
    for (const Edge& e : edges)
      if (e.target)
        fed[static_cast<std::size_t>(e.target->node)][static_cast<std::size_t>(e.target->channel - 1)] =
            true;
    for (int y = 0; y < length; ++y)
      for (int x = 0; x < length; ++x) {
        const int id = lat.node_id(x, y);
        const bool a_node = ((x + y) % 2) == 0;
        for (int ch = 1; ch <= 2; ++ch) {
          if (fed[static_cast<std::size_t>(id)][static_cast<std::size_t>(ch - 1)]) continue;
          Edge e;
          e.id = next_id++;
          e.target = EdgeEndpoint{id, ch};
          // step direction of the missing feeder edge
          int dx = 0, dy = 0;
          if (a_node) {
            dx = (ch == 1) ? +1 : -1;  // arrives moving east / west
          } else {
            dy = (ch == 1) ? +1 : -1;  // arrives moving north / south
          }
          lat.edge_origin.emplace_back(x - dx, y - dy);
          lat.edge_step.emplace_back(dx, dy);
          edges.push_back(e);
        }
      }
  }
  lat.graph = NetworkGraph::build(std::move(nodes), std::move(edges));
  return lat;
}

/// Lattice builder when only the graph is needed.
inline NetworkGraph build_l_lattice(int length, double theta, Boundary boundary) {
  return build_l_lattice_full(length, theta, boundary).graph;
}

/// Left-turn probability p = sin^2(theta) of the classical hull walk.
inline double theta_for_left_turn_probability(double p) {
  if (p < 0.0 || p > 1.0) throw ParamError("left-turn probability must be in [0,1]");
  return std::asin(std::sqrt(p));
}

/// Scan-convention lead pair: middle lead-in on the left boundary, middle
/// lead-out on the right boundary.
inline std::pair<int, int> scan_lead_pair(const LLattice& lat) {
  if (lat.boundary != Boundary::Open) throw ParamError("scan_lead_pair: open lattice required");
  int best_in = -1, best_out = -1;
  int best_in_dist = 1 << 30, best_out_dist = 1 << 30;
  for (const int id : lat.graph.leads_in()) {
    const Edge& e = lat.graph.edge(id);
    const auto [x, y] = lat.node_xy(e.target->node);
    if (x != 0) continue;
    const int dist = std::abs(2 * y - lat.size);
    if (dist < best_in_dist) {
      best_in_dist = dist;
      best_in = id;
    }
  }
  for (const int id : lat.graph.leads_out()) {
    const Edge& e = lat.graph.edge(id);
    const auto [x, y] = lat.node_xy(e.source->node);
    if (x != lat.size - 1) continue;
    const int dist = std::abs(2 * y - lat.size);
    if (dist < best_out_dist) {
      best_out_dist = dist;
      best_out = id;
    }
  }
  if (best_in < 0 || best_out < 0) throw ParamError("scan_lead_pair: no boundary leads found");
  return {best_in, best_out};
}

}  // namespace classc
