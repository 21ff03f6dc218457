#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "classc/graph.hpp"
#include "classc/rng.hpp"
#include "classc/trails.hpp"

namespace classc {

struct WalkResult {
  Trail trail;                          // closed trail, root first
  std::vector<double> step_probabilities;  // per node passage, closure included
  double probability = 1.0;                // product of the above
};

/// Grows a closed trail from start_edge one node passage at a time. At each
/// node the next out-channel is drawn among the channels unused there, with
/// the conditional weights of the node's history (they sum to one). The walk
/// ends when it re-enters its start edge; since edges are never reused it
/// takes at most one step per edge of the graph.
///
/// Negative conditional weights (below -tolerances().walk_negative) abort with
/// NonProbabilisticNodeError; vanishing-weight branches are never drawn.
inline WalkResult sample_history_walk(const NetworkGraph& g, int start_edge, RngStream& rng) {
  if (!g.is_closed()) throw ParamError("sample_history_walk: closed graph required");
  const Edge& root = g.edge(start_edge);
  if (!root.source || !root.target) throw ParamError("sample_history_walk: bad start edge");

  WalkResult out;
  out.trail.edges.push_back(start_edge);
  out.trail.closed = true;

  std::unordered_map<int, std::vector<std::pair<int, int>>> histories;
  const double neg_tol = tolerances().walk_negative;

  int current = start_edge;
  for (std::size_t step = 0; step <= g.num_edges(); ++step) {
    const EdgeEndpoint at = *g.edge(current).target;
    const Node& n = g.node(at.node);
    auto& visits = histories[at.node];

    double chosen_w = 0.0;
    int chosen_i = -1;
    if (n.degree() == 2 && visits.size() == 1) {
      // second passage through an N=2 node: the remaining channel is forced
      chosen_i = visits[0].second == 1 ? 2 : 1;
      chosen_w = 1.0;
    } else if (n.degree() == 2 && visits.empty()) {
      // first passage: the literal squared amplitudes
      const double w1 = n.scattering(0, at.channel - 1) * n.scattering(0, at.channel - 1);
      const double w2 = n.scattering(1, at.channel - 1) * n.scattering(1, at.channel - 1);
      chosen_i = rng.uniform() < w1 ? 1 : 2;
      chosen_w = chosen_i == 1 ? w1 : w2;
    } else {
      std::vector<bool> used_out(static_cast<std::size_t>(n.degree()), false);
      for (const auto& [j, i] : visits) used_out[static_cast<std::size_t>(i - 1)] = true;
      double u = rng.uniform();
      double w_sum = 0.0;
      for (int i = 1; i <= n.degree(); ++i) {
        if (used_out[static_cast<std::size_t>(i - 1)]) continue;
        const double w = conditional_weight(n.scattering, visits, at.channel, i);
        if (w < -neg_tol)
          throw NonProbabilisticNodeError(
              "negative conditional weight " + std::to_string(w) + " at node " +
                  std::to_string(at.node) + " after " + std::to_string(visits.size()) +
                  " prior visits",
              at.node, w);
        const double wc = w > 0.0 ? w : 0.0;
        w_sum += wc;
        if (chosen_i < 0 && u < w_sum && wc > 0.0) {
          chosen_i = i;
          chosen_w = wc;
        }
      }
      // the weights sum to one; direct any residual rounding mass to the
      // last positive branch
      if (chosen_i < 0) {
        for (int i = n.degree(); i >= 1; --i) {
          if (used_out[static_cast<std::size_t>(i - 1)]) continue;
          const double w = conditional_weight(n.scattering, visits, at.channel, i);
          if (w > 0.0) {
            chosen_i = i;
            chosen_w = w;
            break;
          }
        }
      }
      if (chosen_i < 0)
        throw NonProbabilisticNodeError("no positive-weight outcome at node " +
                                            std::to_string(at.node),
                                        at.node, 0.0);
    }

    visits.emplace_back(at.channel, chosen_i);
    out.step_probabilities.push_back(chosen_w);
    out.probability *= chosen_w;

    const int next_edge = n.out_edges[static_cast<std::size_t>(chosen_i - 1)];
    if (next_edge == start_edge) return out;  // closed
    out.trail.edges.push_back(next_edge);
    current = next_edge;
  }
  // unreachable on a well-formed closed graph: edges are never reused
  throw NumericalError("sample_history_walk: walk exceeded the edge count bound");
}

/// Walk variant on an open graph: starts on a lead-in edge and runs until it
/// exits through some lead-out, which is returned alongside the trail.
struct OpenWalkResult {
  Trail trail;
  int exit_edge = -1;
  double probability = 1.0;
};

inline OpenWalkResult sample_history_walk_open(const NetworkGraph& g, int lead_in,
                                               RngStream& rng) {
  const Edge& start = g.edge(lead_in);
  if (start.source || !start.target) throw ParamError("sample_history_walk_open: not a lead-in");
  OpenWalkResult out;
  out.trail.edges.push_back(lead_in);
  out.trail.closed = false;

  std::unordered_map<int, std::vector<std::pair<int, int>>> histories;
  const double neg_tol = tolerances().walk_negative;
  int current = lead_in;
  for (std::size_t step = 0; step <= g.num_edges(); ++step) {
    const EdgeEndpoint at = *g.edge(current).target;
    const Node& n = g.node(at.node);
    auto& visits = histories[at.node];

    double chosen_w = 0.0;
    int chosen_i = -1;
    if (n.degree() == 2 && visits.size() == 1) {
      chosen_i = visits[0].second == 1 ? 2 : 1;
      chosen_w = 1.0;
    } else if (n.degree() == 2 && visits.empty()) {
      const double w1 = n.scattering(0, at.channel - 1) * n.scattering(0, at.channel - 1);
      const double w2 = n.scattering(1, at.channel - 1) * n.scattering(1, at.channel - 1);
      chosen_i = rng.uniform() < w1 ? 1 : 2;
      chosen_w = chosen_i == 1 ? w1 : w2;
    } else {
      std::vector<bool> used_out(static_cast<std::size_t>(n.degree()), false);
      for (const auto& [j, i] : visits) used_out[static_cast<std::size_t>(i - 1)] = true;
      double u = rng.uniform();
      double w_sum = 0.0;
      for (int i = 1; i <= n.degree(); ++i) {
        if (used_out[static_cast<std::size_t>(i - 1)]) continue;
        const double w = conditional_weight(n.scattering, visits, at.channel, i);
        if (w < -neg_tol)
          throw NonProbabilisticNodeError("negative conditional weight at node " +
                                              std::to_string(at.node),
                                          at.node, w);
        const double wc = w > 0.0 ? w : 0.0;
        w_sum += wc;
        if (chosen_i < 0 && u < w_sum && wc > 0.0) {
          chosen_i = i;
          chosen_w = wc;
        }
      }
      if (chosen_i < 0) {
        for (int i = n.degree(); i >= 1; --i) {
          if (used_out[static_cast<std::size_t>(i - 1)]) continue;
          const double w = conditional_weight(n.scattering, visits, at.channel, i);
          if (w > 0.0) {
            chosen_i = i;
            chosen_w = w;
            break;
          }
        }
      }
      if (chosen_i < 0)
        throw NonProbabilisticNodeError("no positive-weight outcome at node " +
                                            std::to_string(at.node),
                                        at.node, 0.0);
    }
    visits.emplace_back(at.channel, chosen_i);
    out.probability *= chosen_w;
    const int next_edge = n.out_edges[static_cast<std::size_t>(chosen_i - 1)];
    out.trail.edges.push_back(next_edge);
    if (!g.edge(next_edge).target) {
      out.exit_edge = next_edge;
      return out;
    }
    current = next_edge;
  }
  throw NumericalError("sample_history_walk_open: walk exceeded the edge count bound");
}

}  // namespace classc
