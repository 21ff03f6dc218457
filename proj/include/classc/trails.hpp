#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "classc/errors.hpp"
#include "classc/minors.hpp"
#include "classc/tolerances.hpp"
#include "classc/types.hpp"

namespace classc {

/// Ordered (in-channel, out-channel) passages of a trail through one node.
struct NodeHistory {
  int node_id = -1;
  std::vector<std::pair<int, int>> visits;  // (j, i), 1-based channels
};

/// Per-node classical weight of a visit history:
///   Omega(I;J) = sign(pi) * prod_visits S(i,j) * det S_{I,J},
/// with I, J the ascending visited out-/in-channel subsets and pi the pairing
/// permutation read through those orderings.
struct WeightReport {
  double omega = 1.0;
  double matched_product = 1.0;           // prod_visits S(i,j)
  double minor_value = 1.0;               // det S_{I,J}
  int pairing_signature = 1;
  std::vector<double> conditional_factors;  // telescoped w's where defined
};

inline WeightReport omega(const MatX& s, const std::vector<std::pair<int, int>>& visits) {
  const int n = static_cast<int>(s.rows());
  for (const auto& [j, i] : visits)
    if (j < 1 || j > n || i < 1 || i > n) throw ParamError("omega: channel out of range");
  const ChannelPairing pairing = ChannelPairing::from_visits(visits);  // rejects repeats
  WeightReport r;
  r.pairing_signature = pairing.signature;
  for (const auto& [j, i] : visits) r.matched_product *= s(i - 1, j - 1);
  r.minor_value = minor_det(s, pairing.out_subset, pairing.in_subset);
  r.omega = static_cast<double>(r.pairing_signature) * r.matched_product * r.minor_value;
  // conditional factors along the given visit order, while prefixes are regular
  std::vector<std::pair<int, int>> prefix;
  double prev = 1.0;
  for (const auto& v : visits) {
    prefix.push_back(v);
    const ChannelPairing p = ChannelPairing::from_visits(prefix);
    double w = static_cast<double>(p.signature) * minor_det(s, p.out_subset, p.in_subset);
    for (const auto& [j, i] : prefix) w *= s(i - 1, j - 1);
    if (prev == 0.0) {
      r.conditional_factors.clear();
      break;
    }
    r.conditional_factors.push_back(w / prev);
    prev = w;
  }
  return r;
}

/// w(history + (j,i)) = Omega(history + (j,i)) / Omega(history).
inline double conditional_weight(const MatX& s, const std::vector<std::pair<int, int>>& prior,
                                 int j_new, int i_new) {
  const double denom = prior.empty() ? 1.0 : omega(s, prior).omega;
  if (denom == 0.0)
    throw DegeneratePrefixError("conditional weight on a vanishing-weight prefix");
  auto extended = prior;
  extended.emplace_back(j_new, i_new);
  return omega(s, extended).omega / denom;
}

/// Sum of conditional weights over all unused outcomes of in-channel j_new;
/// identically 1 for orthogonal S.
inline double normalization_sum(const MatX& s, const std::vector<std::pair<int, int>>& prior,
                                int j_new) {
  const int n = static_cast<int>(s.rows());
  if (j_new < 1 || j_new > n) throw ParamError("normalization_sum: channel out of range");
  for (const auto& [j, i] : prior)
    if (j == j_new) throw ParamError("normalization_sum: in-channel already used");
  std::vector<bool> used_out(static_cast<std::size_t>(n), false);
  for (const auto& [j, i] : prior) used_out[static_cast<std::size_t>(i - 1)] = true;
  double sum = 0.0;
  for (int i = 1; i <= n; ++i)
    if (!used_out[static_cast<std::size_t>(i - 1)]) sum += conditional_weight(s, prior, j_new, i);
  return sum;
}

/// Sequence of distinct edges consecutively joined through nodes.
struct Trail {
  std::vector<int> edges;
  bool closed = false;

  std::size_t length() const { return edges.size(); }
};

}  // namespace classc
