#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "classc/errors.hpp"
#include "classc/rng.hpp"
#include "classc/tolerances.hpp"
#include "classc/types.hpp"

namespace classc {

inline double orthogonality_defect(const MatX& s) {
  return (s.transpose() * s - MatX::Identity(s.rows(), s.cols())).cwiseAbs().maxCoeff();
}

inline bool is_orthogonal(const MatX& s, double tol = tolerances().orthogonality) {
  if (s.rows() != s.cols() || s.rows() < 1) return false;
  if (orthogonality_defect(s) > tol) return false;
  return std::abs(std::abs(s.determinant()) - 1.0) <= tol;
}

/// Plane rotation (or reflection) acting on channels i < j of an N-channel node;
/// identity elsewhere. Channels are 1-based.
inline MatX givens_rotation(int n, int i, int j, double theta, bool reflect = false) {
  if (n < 1) throw ParamError("givens_rotation: N must be >= 1");
  if (i < 1 || j > n || i >= j) throw ParamError("givens_rotation: need 1 <= i < j <= N");
  MatX m = MatX::Identity(n, n);
  const double c = std::cos(theta), s = std::sin(theta);
  const int a = i - 1, b = j - 1;
  if (!reflect) {
    m(a, a) = c;
    m(a, b) = s;
    m(b, a) = -s;
    m(b, b) = c;
  } else {
    m(a, a) = s;
    m(a, b) = c;
    m(b, a) = c;
    m(b, b) = -s;
  }
  return m;
}

/// Haar-uniform O(N) via QR of a Gaussian matrix with sign-fixed R diagonal.
inline MatX random_orthogonal(int n, RngStream& rng) {
  if (n < 1) throw ParamError("random_orthogonal: N must be >= 1");
  MatX g(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) g(r, c) = rng.normal();
  Eigen::HouseholderQR<MatX> qr(g);
  MatX q = qr.householderQ();
  const MatX r_mat = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < n; ++c)
    if (r_mat(c, c) < 0.0) q.col(c) = -q.col(c);
  return q;
}

/// Haar O(N) resampled until every entry has magnitude > min_abs_entry.
inline MatX random_orthogonal_zero_free(int n, RngStream& rng, double min_abs_entry = 1e-4) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    MatX s = random_orthogonal(n, rng);
    if (s.cwiseAbs().minCoeff() > min_abs_entry) return s;
  }
  throw StatsError("random_orthogonal_zero_free: resampling did not converge");
}

/// A composition of 2x2 factors whose channel-pair graph is a tree, i.e. a
/// matrix that is completely reducible by construction.
struct GivensTree {
  MatX matrix;
  std::vector<std::pair<int, int>> pairs;  // 1-based channel pairs, factor order
  std::vector<double> angles;
  std::vector<bool> reflections;
};

/// Random tree-composed O(N). With boundary_angles, some factors get
/// theta in {0, pi/2} to exercise vanishing-entry edge cases.
inline GivensTree random_givens_tree(int n, RngStream& rng, bool boundary_angles = false,
                                     bool allow_reflections = true) {
  if (n < 1) throw ParamError("random_givens_tree: N must be >= 1");
  GivensTree t;
  t.matrix = MatX::Identity(n, n);
  if (n == 1) {
    if (allow_reflections && rng.uniform() < 0.5) t.matrix(0, 0) = -1.0;
    return t;
  }
  // random attachment tree on {1..n}
  std::vector<std::pair<int, int>> edges;
  for (int k = 2; k <= n; ++k) {
    const int other = 1 + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(k - 1)));
    edges.emplace_back(std::min(other, k), std::max(other, k));
  }
  // random multiplication order
  for (std::size_t k = edges.size(); k > 1; --k) {
    const std::size_t swap_with = rng.uniform_index(k);
    std::swap(edges[k - 1], edges[swap_with]);
  }
  for (const auto& [i, j] : edges) {
    double theta = 2.0 * M_PI * rng.uniform();
    if (boundary_angles && rng.uniform() < 0.25)
      theta = rng.uniform() < 0.5 ? 0.0 : M_PI / 2.0;
    const bool reflect = allow_reflections && rng.uniform() < 0.25;
    t.matrix = t.matrix * givens_rotation(n, i, j, theta, reflect);
    t.pairs.emplace_back(i, j);
    t.angles.push_back(theta);
    t.reflections.push_back(reflect);
  }
  return t;
}

}  // namespace classc
