#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "classc/errors.hpp"
#include "classc/types.hpp"

namespace classc {

/// Strictly ascending subset of channel indices {1, ..., N}.
struct ChannelSubset {
  std::vector<int> indices;

  static ChannelSubset of(std::vector<int> idx) {
    for (std::size_t k = 0; k + 1 < idx.size(); ++k)
      if (idx[k] >= idx[k + 1]) throw ParamError("channel subset not strictly ascending");
    if (!idx.empty() && idx.front() < 1) throw ParamError("channel indices are 1-based");
    return ChannelSubset{std::move(idx)};
  }

  static ChannelSubset from_unsorted(std::vector<int> idx) {
    std::sort(idx.begin(), idx.end());
    return of(std::move(idx));
  }

  std::size_t size() const { return indices.size(); }
  bool empty() const { return indices.empty(); }
  int sum() const { return std::accumulate(indices.begin(), indices.end(), 0); }

  /// Ascending complement within {1, ..., n}.
  ChannelSubset complement(int n) const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(n) - indices.size());
    std::size_t k = 0;
    for (int c = 1; c <= n; ++c) {
      if (k < indices.size() && indices[k] == c) {
        ++k;
      } else {
        out.push_back(c);
      }
    }
    return ChannelSubset{std::move(out)};
  }

  /// Rank (0-based) of a member channel.
  std::size_t rank_of(int channel) const {
    const auto it = std::lower_bound(indices.begin(), indices.end(), channel);
    if (it == indices.end() || *it != channel) throw ParamError("channel not in subset");
    return static_cast<std::size_t>(it - indices.begin());
  }
};

/// Parity (+1/-1) of a permutation given as images perm[k] in 0..n-1.
inline int permutation_parity(const std::vector<std::size_t>& perm) {
  int sign = 1;
  for (std::size_t a = 0; a < perm.size(); ++a)
    for (std::size_t b = a + 1; b < perm.size(); ++b)
      if (perm[a] > perm[b]) sign = -sign;
  return sign;
}

/// The in->out channel matching of a node visit history, with the permutation
/// read through the ascending orderings of both subsets.
struct ChannelPairing {
  ChannelSubset in_subset;   // J
  ChannelSubset out_subset;  // I
  std::vector<std::size_t> perm;  // rank in J -> rank in I
  int signature = 1;

  /// visits: (in channel j, out channel i) pairs, all j distinct, all i distinct.
  static ChannelPairing from_visits(const std::vector<std::pair<int, int>>& visits) {
    std::vector<int> js, is;
    js.reserve(visits.size());
    is.reserve(visits.size());
    for (const auto& [j, i] : visits) {
      js.push_back(j);
      is.push_back(i);
    }
    ChannelPairing p;
    {
      auto js_sorted = js, is_sorted = is;
      std::sort(js_sorted.begin(), js_sorted.end());
      std::sort(is_sorted.begin(), is_sorted.end());
      if (std::adjacent_find(js_sorted.begin(), js_sorted.end()) != js_sorted.end())
        throw ParamError("repeated in-channel in visit list");
      if (std::adjacent_find(is_sorted.begin(), is_sorted.end()) != is_sorted.end())
        throw ParamError("repeated out-channel in visit list");
      p.in_subset = ChannelSubset::of(std::move(js_sorted));
      p.out_subset = ChannelSubset::of(std::move(is_sorted));
    }
    p.perm.resize(visits.size());
    for (const auto& [j, i] : visits)
      p.perm[p.in_subset.rank_of(j)] = p.out_subset.rank_of(i);
    p.signature = permutation_parity(p.perm);
    return p;
  }
};

/// Minor of S on rows I and columns J (both ascending). Empty subsets give 1.
inline double minor_det(const MatX& s, const ChannelSubset& rows, const ChannelSubset& cols) {
  if (rows.size() != cols.size()) throw ParamError("minor_det: |I| != |J|");
  const int n = static_cast<int>(s.rows());
  if (s.cols() != n) throw ParamError("minor_det: square matrix required");
  if (rows.empty()) return 1.0;
  if (!rows.indices.empty() && (rows.indices.back() > n || cols.indices.back() > n))
    throw ParamError("minor_det: channel index out of range");
  const int k = static_cast<int>(rows.size());
  MatX sub(k, k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      sub(a, b) = s(rows.indices[static_cast<std::size_t>(a)] - 1,
                    cols.indices[static_cast<std::size_t>(b)] - 1);
  if (k == 1) return sub(0, 0);
  if (k == 2) return sub(0, 0) * sub(1, 1) - sub(0, 1) * sub(1, 0);
  return sub.determinant();
}

/// Both sides of the signed complementary-minor identity for orthogonal S:
///   det S_{I,J} = (-1)^(sum I + sum J) det S * det S_{Ic,Jc}.
inline std::pair<double, double> jacobi_complement_check(const MatX& s,
                                                         const ChannelSubset& rows,
                                                         const ChannelSubset& cols) {
  if (rows.size() != cols.size()) throw ParamError("jacobi_complement_check: |I| != |J|");
  const int n = static_cast<int>(s.rows());
  const double lhs = minor_det(s, rows, cols);
  const double sign = ((rows.sum() + cols.sum()) % 2 == 0) ? 1.0 : -1.0;
  const double rhs = sign * s.determinant() * minor_det(s, rows.complement(n), cols.complement(n));
  return {lhs, rhs};
}

}  // namespace classc
