#pragma once

#include <map>
#include <string>

#include "classc/graph.hpp"
#include "classc/rng.hpp"
#include "classc/su2.hpp"
#include "classc/types.hpp"

namespace classc {

/// Edge id -> SU(2) rotation applied when the edge is traversed.
struct DisorderRealization {
  std::map<int, Mat2c> per_edge;

  bool covers(const NetworkGraph& g) const {
    if (per_edge.size() != g.num_edges()) return false;
    for (const Edge& e : g.edges())
      if (!per_edge.count(e.id)) return false;
    return true;
  }
};

/// Independent Haar draws on every edge, in ascending edge-id order.
inline DisorderRealization sample_disorder(const NetworkGraph& g, RngStream& rng) {
  DisorderRealization d;
  for (const Edge& e : g.edges()) d.per_edge[e.id] = haar_su2(rng);
  return d;
}

inline DisorderRealization identity_disorder(const NetworkGraph& g) {
  DisorderRealization d;
  for (const Edge& e : g.edges()) d.per_edge[e.id] = Mat2c::Identity();
  return d;
}

/// Basis index of (edge, spin a in {0,1}) in the 2E-dimensional edge space.
inline Eigen::Index evolution_index(const NetworkGraph& g, int edge_id, int spin) {
  return static_cast<Eigen::Index>(2 * g.edge_position(edge_id) + static_cast<std::size_t>(spin));
}

/// One time step of the network: rotate the spinor by U_e on its current edge,
/// then scatter at that edge's terminal node, S(i,j) taking in-channel j to
/// out-channel i. Unitary on closed graphs, sub-unitary on open ones (lead-out
/// columns annihilate, lead-in rows are never produced).
inline MatXc assemble_evolution(const NetworkGraph& g, const DisorderRealization& d) {
  if (!d.covers(g)) throw ParamError("assemble_evolution: disorder does not cover the graph");
  const Eigen::Index dim = static_cast<Eigen::Index>(2 * g.num_edges());
  MatXc u = MatXc::Zero(dim, dim);
  for (const Edge& e : g.edges()) {
    if (!e.target) continue;  // lead-out half: flux exits
    const Node& n = g.node(e.target->node);
    const int j = e.target->channel;
    const Mat2c& spin_rot = d.per_edge.at(e.id);
    const Eigen::Index col = evolution_index(g, e.id, 0);
    for (int i = 1; i <= n.degree(); ++i) {
      const int out_edge = n.out_edges[static_cast<std::size_t>(i - 1)];
      if (out_edge < 0) continue;
      const double amp = n.scattering(i - 1, j - 1);
      if (amp == 0.0) continue;
      const Eigen::Index row = evolution_index(g, out_edge, 0);
      u.block<2, 2>(row, col) += amp * spin_rot;
    }
  }
  return u;
}

inline double evolution_unitarity_defect(const MatXc& u) {
  return (u.adjoint() * u - MatXc::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

}  // namespace classc
