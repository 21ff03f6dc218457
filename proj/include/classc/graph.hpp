#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "classc/errors.hpp"
#include "classc/orthogonal.hpp"
#include "classc/tolerances.hpp"
#include "classc/types.hpp"

namespace classc {

/// (node id, 1-based channel index) endpoint of a directed edge.
struct EdgeEndpoint {
  int node = -1;
  int channel = 0;
  friend bool operator==(const EdgeEndpoint&, const EdgeEndpoint&) = default;
};

/// Directed edge of the network. Lead-in halves have no source, lead-out
/// halves no target; full edges have both.
struct Edge {
  int id = -1;
  std::optional<EdgeEndpoint> source;  // (node, out-channel)
  std::optional<EdgeEndpoint> target;  // (node, in-channel)
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Scattering node: N incoming and N outgoing channels coupled by an
/// orthogonal matrix with rows = out-channels, columns = in-channels,
/// so S(i-1, j-1) is the amplitude from in-channel j to out-channel i.
struct Node {
  int id = -1;
  MatX scattering;
  // slot bindings derived when the graph is built; -1 where unbound
  std::vector<int> in_edges;
  std::vector<int> out_edges;

  int degree() const { return static_cast<int>(scattering.rows()); }
};

struct Violation {
  std::string rule;
  std::string where;
  std::string detail;
};

/// Directed multigraph with per-node ordered channels. Immutable after build().
class NetworkGraph {
 public:
  NetworkGraph() = default;

  /// Assembles the graph, deriving channel bindings and lead lists.
  /// Throws ParamError only on duplicate ids; every other defect is left for
  /// validate() to report as data.
  static NetworkGraph build(std::vector<Node> nodes, std::vector<Edge> edges) {
    NetworkGraph g;
    std::sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) { return a.id < b.id; });
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return a.id < b.id; });
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k)
      if (nodes[k].id == nodes[k + 1].id) throw ParamError("duplicate node id");
    for (std::size_t k = 0; k + 1 < edges.size(); ++k)
      if (edges[k].id == edges[k + 1].id) throw ParamError("duplicate edge id");
    g.nodes_ = std::move(nodes);
    g.edges_ = std::move(edges);
    for (std::size_t k = 0; k < g.nodes_.size(); ++k) {
      Node& n = g.nodes_[k];
      n.in_edges.assign(static_cast<std::size_t>(std::max(0, n.degree())), -1);
      n.out_edges.assign(static_cast<std::size_t>(std::max(0, n.degree())), -1);
      g.node_index_[n.id] = k;
    }
    for (std::size_t k = 0; k < g.edges_.size(); ++k) {
      const Edge& e = g.edges_[k];
      g.edge_index_[e.id] = k;
      if (e.source) bind(g, *e.source, e.id, /*incoming=*/false);
      if (e.target) bind(g, *e.target, e.id, /*incoming=*/true);
      if (!e.source) g.leads_in_.push_back(e.id);
      if (!e.target) g.leads_out_.push_back(e.id);
    }
    return g;
  }

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& leads_in() const { return leads_in_; }
  const std::vector<int>& leads_out() const { return leads_out_; }

  bool is_closed() const { return leads_in_.empty() && leads_out_.empty(); }
  std::size_t num_edges() const { return edges_.size(); }

  bool has_node(int id) const { return node_index_.count(id) != 0; }
  bool has_edge(int id) const { return edge_index_.count(id) != 0; }

  const Node& node(int id) const {
    const auto it = node_index_.find(id);
    if (it == node_index_.end()) throw ParamError("unknown node id " + std::to_string(id));
    return nodes_[it->second];
  }
  const Edge& edge(int id) const {
    const auto it = edge_index_.find(id);
    if (it == edge_index_.end()) throw ParamError("unknown edge id " + std::to_string(id));
    return edges_[it->second];
  }

  /// Dense index of an edge in id order (spin-block index in the evolution
  /// operator basis).
  std::size_t edge_position(int id) const {
    const auto it = edge_index_.find(id);
    if (it == edge_index_.end()) throw ParamError("unknown edge id " + std::to_string(id));
    return it->second;
  }

  friend bool operator==(const NetworkGraph& a, const NetworkGraph& b) {
    if (a.nodes_.size() != b.nodes_.size() || a.edges_ != b.edges_) return false;
    for (std::size_t k = 0; k < a.nodes_.size(); ++k) {
      const Node& x = a.nodes_[k];
      const Node& y = b.nodes_[k];
      if (x.id != y.id || x.scattering.rows() != y.scattering.rows() ||
          x.scattering.cols() != y.scattering.cols() || x.scattering != y.scattering)
        return false;
    }
    return true;
  }

 private:
  static void bind(NetworkGraph& g, const EdgeEndpoint& ep, int edge_id, bool incoming) {
    const auto it = g.node_index_.find(ep.node);
    if (it == g.node_index_.end()) return;  // validate() reports it
    Node& n = g.nodes_[it->second];
    if (ep.channel < 1 || ep.channel > n.degree()) return;
    auto& slots = incoming ? n.in_edges : n.out_edges;
    if (slots[static_cast<std::size_t>(ep.channel - 1)] == -1)
      slots[static_cast<std::size_t>(ep.channel - 1)] = edge_id;
  }

  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<int> leads_in_;
  std::vector<int> leads_out_;
  std::map<int, std::size_t> node_index_;
  std::map<int, std::size_t> edge_index_;
};

/// Invariant scan; an empty result means the graph is well formed.
inline std::vector<Violation> validate(const NetworkGraph& g) {
  std::vector<Violation> out;
  const double tol = tolerances().orthogonality;
  for (const Node& n : g.nodes()) {
    const std::string where = "node " + std::to_string(n.id);
    if (n.scattering.rows() < 1 || n.scattering.rows() != n.scattering.cols()) {
      out.push_back({"s-matrix shape", where,
                     std::to_string(n.scattering.rows()) + "x" + std::to_string(n.scattering.cols())});
      continue;
    }
    if (orthogonality_defect(n.scattering) > tol)
      out.push_back({"orthogonality", where, "max defect " + std::to_string(orthogonality_defect(n.scattering))});
    else if (std::abs(std::abs(n.scattering.determinant()) - 1.0) > tol)
      out.push_back({"determinant", where, "det " + std::to_string(n.scattering.determinant())});
  }

  // per-slot edge counts, recomputed from the edge list
  std::map<std::pair<int, int>, int> in_count, out_count;
  for (const Edge& e : g.edges()) {
    const std::string where = "edge " + std::to_string(e.id);
    if (!e.source && !e.target) {
      out.push_back({"floating edge", where, "no endpoints"});
      continue;
    }
    for (const bool incoming : {false, true}) {
      const auto& ep = incoming ? e.target : e.source;
      if (!ep) continue;
      if (!g.has_node(ep->node)) {
        out.push_back({"dangling channel", where, "missing node " + std::to_string(ep->node)});
        continue;
      }
      const Node& n = g.node(ep->node);
      if (ep->channel < 1 || ep->channel > n.degree()) {
        out.push_back({"dangling channel", where,
                       "channel " + std::to_string(ep->channel) + " of node " + std::to_string(ep->node) +
                           " (degree " + std::to_string(n.degree()) + ")"});
        continue;
      }
      auto& counts = incoming ? in_count : out_count;
      ++counts[{ep->node, ep->channel}];
    }
  }
  for (const Node& n : g.nodes()) {
    for (int ch = 1; ch <= n.degree(); ++ch) {
      const int ic = in_count.count({n.id, ch}) ? in_count[{n.id, ch}] : 0;
      const int oc = out_count.count({n.id, ch}) ? out_count[{n.id, ch}] : 0;
      const std::string where = "node " + std::to_string(n.id);
      if (ic == 0)
        out.push_back({"unbound channel", where, "in-channel " + std::to_string(ch)});
      if (ic > 1)
        out.push_back({"duplicate channel binding", where, "in-channel " + std::to_string(ch)});
      if (oc == 0)
        out.push_back({"unbound channel", where, "out-channel " + std::to_string(ch)});
      if (oc > 1)
        out.push_back({"duplicate channel binding", where, "out-channel " + std::to_string(ch)});
    }
  }
  return out;
}

/// Opens a closed graph by cutting the listed edges. Each cut edge keeps its
/// id as the lead-out half (source side); the lead-in half (target side) gets
/// a fresh id, allocated from max(id)+1 in the order given.
inline NetworkGraph cut_edges(const NetworkGraph& g, const std::vector<int>& edge_ids) {
  if (!g.is_closed()) throw ParamError("cut_edges: graph must be closed");
  {
    std::vector<int> sorted = edge_ids;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw ParamError("cut_edges: duplicate edge id");
  }
  int next_id = 0;
  for (const Edge& e : g.edges()) next_id = std::max(next_id, e.id + 1);

  std::vector<Edge> edges = g.edges();
  for (const int id : edge_ids) {
    if (!g.has_edge(id)) throw ParamError("cut_edges: unknown edge id " + std::to_string(id));
    auto it = std::find_if(edges.begin(), edges.end(), [&](const Edge& e) { return e.id == id; });
    Edge lead_in;
    lead_in.id = next_id++;
    lead_in.target = it->target;
    it->target.reset();  // original id becomes the lead-out half
    edges.push_back(lead_in);
  }
  return NetworkGraph::build(g.nodes(), std::move(edges));
}

}  // namespace classc
