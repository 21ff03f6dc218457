#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "classc/graph.hpp"
#include "classc/orthogonal.hpp"
#include "classc/rng.hpp"

namespace classc {

template <typename T>
void shuffle_in_place(std::vector<T>& v, RngStream& rng) {
  for (std::size_t k = v.size(); k > 1; --k)
    std::swap(v[k - 1], v[rng.uniform_index(k)]);
}

inline MatX rotation2(double theta) {
  MatX s(2, 2);
  s << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
  return s;
}

/// One N=1 node, one self-loop edge; S = (+1) or (-1).
inline NetworkGraph single_loop_graph(double s_sign = 1.0) {
  Node n;
  n.id = 0;
  n.scattering = MatX::Constant(1, 1, s_sign);
  Edge e;
  e.id = 0;
  e.source = EdgeEndpoint{0, 1};
  e.target = EdgeEndpoint{0, 1};
  return NetworkGraph::build({n}, {e});
}

/// Two N=2 rotation nodes A(id 0, theta_a) and B(id 1, theta_b) with
/// channel-aligned edges a1=0, a2=1 (A->B) and b1=2, b2=3 (B->A).
inline NetworkGraph two_node_fixture(double theta_a, double theta_b) {
  Node a, b;
  a.id = 0;
  a.scattering = rotation2(theta_a);
  b.id = 1;
  b.scattering = rotation2(theta_b);
  std::vector<Edge> edges(4);
  for (int k = 0; k < 2; ++k) {
    edges[k].id = k;
    edges[k].source = EdgeEndpoint{0, k + 1};
    edges[k].target = EdgeEndpoint{1, k + 1};
    edges[k + 2].id = k + 2;
    edges[k + 2].source = EdgeEndpoint{1, k + 1};
    edges[k + 2].target = EdgeEndpoint{0, k + 1};
  }
  return NetworkGraph::build({a, b}, std::move(edges));
}

/// Open chain lead -> n_nodes N=1 nodes -> lead. Edge ids 0..n_nodes in path
/// order; edge 0 is the lead-in, edge n_nodes the lead-out.
inline NetworkGraph chain_open_graph(int n_nodes) {
  if (n_nodes < 1) throw ParamError("chain_open_graph: need >= 1 node");
  std::vector<Node> nodes(static_cast<std::size_t>(n_nodes));
  std::vector<Edge> edges(static_cast<std::size_t>(n_nodes) + 1);
  for (int k = 0; k < n_nodes; ++k) {
    nodes[static_cast<std::size_t>(k)].id = k;
    nodes[static_cast<std::size_t>(k)].scattering = MatX::Constant(1, 1, 1.0);
  }
  for (int k = 0; k <= n_nodes; ++k) {
    edges[static_cast<std::size_t>(k)].id = k;
    if (k > 0) edges[static_cast<std::size_t>(k)].source = EdgeEndpoint{k - 1, 1};
    if (k < n_nodes) edges[static_cast<std::size_t>(k)].target = EdgeEndpoint{k, 1};
  }
  return NetworkGraph::build(std::move(nodes), std::move(edges));
}

/// One N=2 rotation node with all four channels dangling. Lead-ins 0 -> in-1,
/// 1 -> in-2; lead-outs 2 <- out-1, 3 <- out-2.
inline NetworkGraph one_node_open_fixture(double theta) {
  Node n;
  n.id = 0;
  n.scattering = rotation2(theta);
  std::vector<Edge> edges(4);
  for (int k = 0; k < 2; ++k) {
    edges[k].id = k;
    edges[k].target = EdgeEndpoint{0, k + 1};
    edges[k + 2].id = k + 2;
    edges[k + 2].source = EdgeEndpoint{0, k + 1};
  }
  return NetworkGraph::build({n}, std::move(edges));
}

/// Two-node fixture with theta_A = pi/2 and theta_B = theta, cut on a2 and b2.
/// The surviving lead-to-lead trail passes once through the theta node, so the
/// classical mean conductance is exactly 2 cos^2(theta).
struct CutFixture {
  NetworkGraph graph;
  int e_in = -1;
  int e_out = -1;
};

inline CutFixture two_node_cut_fixture(double theta) {
  CutFixture f;
  f.graph = cut_edges(two_node_fixture(M_PI / 2.0, theta), {1, 3});
  f.e_in = 4;   // fresh lead-in half into B in-channel 2 (from cutting a2 = 1)
  f.e_out = 3;  // b2 keeps its id as the lead-out half from B out-channel 2
  return f;
}

/// Random closed multigraph: edge count in [2, max_edges], node degrees in
/// [1, max_degree], Haar-orthogonal S at every node, random slot wiring.
inline NetworkGraph random_closed_graph(RngStream& rng, int max_edges = 10, int max_degree = 3) {
  if (max_edges < 2) throw ParamError("random_closed_graph: need max_edges >= 2");
  const int m = 2 + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(max_edges - 1)));
  std::vector<int> degrees;
  int left = m;
  while (left > 0) {
    const int cap = std::min(max_degree, left);
    const int d = 1 + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(cap)));
    degrees.push_back(d);
    left -= d;
  }
  std::vector<Node> nodes(degrees.size());
  std::vector<std::pair<int, int>> out_slots, in_slots;
  for (std::size_t k = 0; k < degrees.size(); ++k) {
    nodes[k].id = static_cast<int>(k);
    nodes[k].scattering = random_orthogonal(degrees[k], rng);
    for (int ch = 1; ch <= degrees[k]; ++ch) {
      out_slots.emplace_back(static_cast<int>(k), ch);
      in_slots.emplace_back(static_cast<int>(k), ch);
    }
  }
  shuffle_in_place(in_slots, rng);
  std::vector<Edge> edges(out_slots.size());
  for (std::size_t k = 0; k < out_slots.size(); ++k) {
    edges[k].id = static_cast<int>(k);
    edges[k].source = EdgeEndpoint{out_slots[k].first, out_slots[k].second};
    edges[k].target = EdgeEndpoint{in_slots[k].first, in_slots[k].second};
  }
  return NetworkGraph::build(std::move(nodes), std::move(edges));
}

/// Random open fixture: a random closed graph with one edge cut.
inline CutFixture random_open_fixture(RngStream& rng, int max_edges = 8, int max_degree = 3) {
  const NetworkGraph g = random_closed_graph(rng, max_edges, max_degree);
  const int cut = static_cast<int>(rng.uniform_index(g.num_edges()));
  CutFixture f;
  f.graph = cut_edges(g, {cut});
  f.e_out = cut;
  f.e_in = f.graph.leads_in().front();
  return f;
}

}  // namespace classc
