#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "classc/graph.hpp"
#include "classc/trails.hpp"

namespace classc {

struct WeightedTrail {
  Trail trail;
  double weight = 1.0;
};

constexpr std::size_t kDefaultTrailCeiling = 1000000;

namespace detail {

class TrailEnumerator {
 public:
  TrailEnumerator(const NetworkGraph& g, std::size_t ceiling) : g_(g), ceiling_(ceiling) {}

  /// All closed trails rooted at root_edge (closure = re-entering the root).
  std::vector<WeightedTrail> closed(int root_edge) {
    const Edge& root = g_.edge(root_edge);
    if (!root.source || !root.target) throw ParamError("closed trails need a full root edge");
    root_ = root_edge;
    open_target_ = -1;
    out_.clear();
    trail_ = {root_edge};
    used_ = {root_edge};
    histories_.clear();
    descend(*root.target);
    finish();
    return std::move(out_);
  }

  /// All open trails from lead-in e_in to lead-out e_out.
  std::vector<WeightedTrail> open(int e_in, int e_out) {
    const Edge& in = g_.edge(e_in);
    const Edge& out_edge = g_.edge(e_out);
    if (in.source || !in.target) throw ParamError("e_in must be a lead-in edge");
    if (out_edge.target || !out_edge.source) throw ParamError("e_out must be a lead-out edge");
    root_ = -1;
    open_target_ = e_out;
    out_.clear();
    trail_ = {e_in};
    used_ = {e_in};
    histories_.clear();
    descend(*in.target);
    finish();
    return std::move(out_);
  }

 private:
  void record() {
    if (out_.size() >= ceiling_)
      throw ResourceError("trail enumeration ceiling (" + std::to_string(ceiling_) + ") exceeded");
    WeightedTrail wt;
    wt.trail.edges = trail_;
    wt.trail.closed = root_ >= 0;
    wt.weight = 1.0;
    for (const auto& [node_id, visits] : histories_)
      wt.weight *= omega(g_.node(node_id).scattering, visits).omega;
    if (wt.weight == 0.0) return;  // exact zeros (vanishing S entries) carry nothing
    out_.push_back(std::move(wt));
  }

  // arrive at `at` = (node, in-channel) on the last edge of trail_
  void descend(const EdgeEndpoint& at) {
    const Node& n = g_.node(at.node);
    auto& visits = histories_[at.node];
    for (int i = 1; i <= n.degree(); ++i) {
      const int next_edge = n.out_edges[static_cast<std::size_t>(i - 1)];
      if (next_edge < 0) continue;
      visits.emplace_back(at.channel, i);
      if (next_edge == root_) {
        record();  // closure visit pairs (j, out-channel of the root)
      } else if (std::find(used_.begin(), used_.end(), next_edge) == used_.end()) {
        const Edge& e = g_.edge(next_edge);
        if (!e.target) {
          if (next_edge == open_target_) {
            trail_.push_back(next_edge);
            record();
            trail_.pop_back();
          }
          // other lead-out: dead end
        } else {
          trail_.push_back(next_edge);
          used_.push_back(next_edge);
          descend(*e.target);
          used_.pop_back();
          trail_.pop_back();
        }
      }
      visits.pop_back();
    }
    if (visits.empty()) histories_.erase(at.node);
  }

  void finish() {
    std::sort(out_.begin(), out_.end(), [](const WeightedTrail& a, const WeightedTrail& b) {
      if (a.trail.edges.size() != b.trail.edges.size())
        return a.trail.edges.size() < b.trail.edges.size();
      return a.trail.edges < b.trail.edges;
    });
  }

  const NetworkGraph& g_;
  std::size_t ceiling_;
  int root_ = -1;
  int open_target_ = -1;
  std::vector<int> trail_;
  std::vector<int> used_;
  std::map<int, std::vector<std::pair<int, int>>> histories_;
  std::vector<WeightedTrail> out_;
};

}  // namespace detail

/// Exhaustive closed-trail enumeration rooted at an edge. Exponential; meant
/// for small graphs, guarded by a trail-count ceiling.
inline std::vector<WeightedTrail> enumerate_closed_trails(
    const NetworkGraph& g, int root_edge, std::size_t ceiling = kDefaultTrailCeiling) {
  if (!g.is_closed()) throw ParamError("enumerate_closed_trails: closed graph required");
  return detail::TrailEnumerator(g, ceiling).closed(root_edge);
}

/// Exhaustive open-trail enumeration from a lead-in to a lead-out edge.
inline std::vector<WeightedTrail> enumerate_open_trails(
    const NetworkGraph& g, int e_in, int e_out, std::size_t ceiling = kDefaultTrailCeiling) {
  if (g.is_closed()) throw ParamError("enumerate_open_trails: open graph required");
  return detail::TrailEnumerator(g, ceiling).open(e_in, e_out);
}

/// Trail-sum value of the quenched mean of Tr G(e,e;z):
///   2 - sum_t w_t z^(2|t|)  (|z| < 1)   /   sum_t w_t z^(-2|t|)  (|z| > 1).
inline Complex classical_mean_trace_green(const NetworkGraph& g, int edge, Complex z,
                                          std::size_t ceiling = kDefaultTrailCeiling) {
  const double az = std::abs(z);
  if (az == 1.0) throw ParamError("classical_mean_trace_green: |z| = 1 is not in either branch");
  Complex sum{0.0, 0.0};
  for (const WeightedTrail& wt : enumerate_closed_trails(g, edge, ceiling)) {
    const auto two_len = static_cast<int>(2 * wt.trail.length());
    sum += wt.weight * std::pow(z, az < 1.0 ? two_len : -two_len);
  }
  return az < 1.0 ? Complex{2.0, 0.0} - sum : sum;
}

/// Trail-sum value of the quenched mean point conductance: twice the sum of
/// open-trail weights between the leads.
inline double classical_mean_conductance(const NetworkGraph& g, int e_in, int e_out,
                                         std::size_t ceiling = kDefaultTrailCeiling) {
  double sum = 0.0;
  for (const WeightedTrail& wt : enumerate_open_trails(g, e_in, e_out, ceiling)) sum += wt.weight;
  return 2.0 * sum;
}

/// CSV dump: trail_id,length,weight,edge_sequence (ids space-separated).
inline std::string trails_to_csv(const std::vector<WeightedTrail>& trails) {
  std::string out = "trail_id,length,weight,edge_sequence\n";
  char buf[64];
  for (std::size_t k = 0; k < trails.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%zu,%zu,%.17g,", k, trails[k].trail.length(),
                  trails[k].weight);
    out += buf;
    for (std::size_t e = 0; e < trails[k].trail.edges.size(); ++e) {
      if (e) out += ' ';
      out += std::to_string(trails[k].trail.edges[e]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace classc
