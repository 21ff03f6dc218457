#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "classc/errors.hpp"
#include "classc/sign_analysis.hpp"
#include "classc/tolerances.hpp"
#include "classc/types.hpp"

namespace classc {

/// One step of the zero-block factorization S = S1 * S2 (after independent
/// re-orderings of the outgoing and incoming channel labels), with
///   S1 = blockdiag(s1_p, I_{N-p}),  S2 = blockdiag(I_q, s2_{N-q}),  p >= q.
/// p = q is the degenerate fully-decoupled split.
struct ReduceOnceResult {
  int p = 0;
  int q = 0;
  std::vector<int> row_order;  // permuted row r of S' is S row row_order[r] (0-based)
  std::vector<int> col_order;
  MatX s1;       // p x p
  MatX s2;       // (N-q) x (N-q)
  MatX factor1;  // N x N blockdiag(s1, I)
  MatX factor2;  // N x N blockdiag(I, s2)
  bool degenerate = false;  // p == q: S' is block diagonal
};

namespace detail {

/// Orthonormal completion: rows of `fixed` (orthonormal, k x m) extended to a
/// full m x m orthogonal matrix whose LAST k rows are `fixed`. Deterministic
/// Gram-Schmidt over the identity basis.
inline MatX complete_orthonormal_rows(const MatX& fixed) {
  const int k = static_cast<int>(fixed.rows());
  const int m = static_cast<int>(fixed.cols());
  MatX full(m, m);
  full.bottomRows(k) = fixed;
  int filled = 0;
  for (int cand = 0; cand < m && filled < m - k; ++cand) {
    VecX v = VecX::Zero(m);
    v(cand) = 1.0;
    for (int r = 0; r < k; ++r) v -= fixed.row(r).dot(v) * fixed.row(r).transpose();
    for (int r = 0; r < filled; ++r) v -= full.row(r).dot(v) * full.row(r).transpose();
    // repeat once for numerical orthogonality
    for (int r = 0; r < k; ++r) v -= fixed.row(r).dot(v) * fixed.row(r).transpose();
    for (int r = 0; r < filled; ++r) v -= full.row(r).dot(v) * full.row(r).transpose();
    const double norm = v.norm();
    if (norm < 1e-8) continue;
    full.row(filled) = v.transpose() / norm;
    ++filled;
  }
  if (filled != m - k) throw NumericalError("orthonormal completion failed");
  return full;
}

struct ZeroBlockCandidate {
  std::vector<int> rows;  // 0-based rows with zeros across all cols
  std::vector<int> cols;
};

/// All (A, B) with S[A, B] vanishing, 1 <= |A|,|B| <= N-1, |A| + |B| <= N,
/// largest blocks first (those leave the least completion freedom).
inline std::vector<ZeroBlockCandidate> zero_block_candidates(const MatX& s) {
  const int n = static_cast<int>(s.rows());
  const double tol = tolerances().zero_entry;
  std::vector<ZeroBlockCandidate> out;
  for (unsigned am = 1; am < (1u << n); ++am) {
    const int a = __builtin_popcount(am);
    if (a > n - 1) continue;
    for (unsigned bm = 1; bm < (1u << n); ++bm) {
      const int b = __builtin_popcount(bm);
      if (b > n - 1 || a + b > n) continue;
      bool all_zero = true;
      for (int r = 0; r < n && all_zero; ++r) {
        if (!(am & (1u << r))) continue;
        for (int c = 0; c < n; ++c) {
          if (!(bm & (1u << c))) continue;
          if (std::abs(s(r, c)) > tol) {
            all_zero = false;
            break;
          }
        }
      }
      if (!all_zero) continue;
      ZeroBlockCandidate cand;
      for (int r = 0; r < n; ++r)
        if (am & (1u << r)) cand.rows.push_back(r);
      for (int c = 0; c < n; ++c)
        if (bm & (1u << c)) cand.cols.push_back(c);
      out.push_back(std::move(cand));
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const ZeroBlockCandidate& x, const ZeroBlockCandidate& y) {
                     return x.rows.size() + x.cols.size() > y.rows.size() + y.cols.size();
                   });
  return out;
}

inline ReduceOnceResult factor_from_candidate(const MatX& s, const ZeroBlockCandidate& cand) {
  const int n = static_cast<int>(s.rows());
  ReduceOnceResult r;
  r.p = n - static_cast<int>(cand.rows.size());
  r.q = static_cast<int>(cand.cols.size());
  r.degenerate = r.p == r.q;
  // rows of A go to the bottom, columns of B to the front
  std::vector<bool> in_a(static_cast<std::size_t>(n), false), in_b(static_cast<std::size_t>(n), false);
  for (const int x : cand.rows) in_a[static_cast<std::size_t>(x)] = true;
  for (const int x : cand.cols) in_b[static_cast<std::size_t>(x)] = true;
  for (int x = 0; x < n; ++x)
    if (!in_a[static_cast<std::size_t>(x)]) r.row_order.push_back(x);
  r.row_order.insert(r.row_order.end(), cand.rows.begin(), cand.rows.end());
  r.col_order = cand.cols;
  for (int x = 0; x < n; ++x)
    if (!in_b[static_cast<std::size_t>(x)]) r.col_order.push_back(x);

  MatX sp(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) sp(a, b) = s(r.row_order[static_cast<std::size_t>(a)],
                                             r.col_order[static_cast<std::size_t>(b)]);
  // s2's last N-p rows are fixed by S'; the rest is an orthonormal completion
  const int m = n - r.q;
  r.s2 = complete_orthonormal_rows(sp.bottomRightCorner(n - r.p, m));
  r.factor2 = MatX::Identity(n, n);
  r.factor2.bottomRightCorner(m, m) = r.s2;
  const MatX s1_full = sp * r.factor2.transpose();
  r.factor1 = s1_full;
  r.s1 = s1_full.topLeftCorner(r.p, r.p);
  return r;
}

}  // namespace detail

/// Single factorization step; nullopt when no channel relabeling exposes a
/// suitable zero block. The largest available zero block is used.
inline std::optional<ReduceOnceResult> reduce_once(const MatX& s) {
  const int n = static_cast<int>(s.rows());
  if (n < 3) throw ParamError("reduce_once: N >= 3 required");
  const auto candidates = detail::zero_block_candidates(s);
  const double tol = tolerances().reduction_product;
  for (const auto& cand : candidates) {
    ReduceOnceResult r = detail::factor_from_candidate(s, cand);
    // factor1 must really be blockdiag(s1, I): reject candidates whose
    // completion failed to isolate the block (does not happen for orthogonal
    // inputs, but guards ill-conditioned near-zero patterns)
    MatX expected = MatX::Identity(n, n);
    expected.topLeftCorner(r.p, r.p) = r.s1;
    if ((r.factor1 - expected).cwiseAbs().maxCoeff() > tol) continue;
    r.factor1 = expected;
    return r;
  }
  return std::nullopt;
}

struct ReductionFactor {
  MatX matrix;                // full-size orthogonal factor
  std::string kind;           // "block1", "block2", "permutation"
  std::vector<int> channels;  // active channels (1-based, positional frame)
};

struct ReductionTree {
  std::vector<ReductionFactor> factors;   // ordered product reproduces S
  std::optional<MatX> residual;           // irreducible block on failure
};

struct CompleteReductionResult {
  bool success = false;
  ReductionTree tree;
  double product_defect = 0.0;
};

namespace detail {

inline MatX permutation_matrix_rows(const std::vector<int>& order) {
  const int n = static_cast<int>(order.size());
  MatX p = MatX::Zero(n, n);
  for (int r = 0; r < n; ++r) p(r, order[static_cast<std::size_t>(r)]) = 1.0;
  return p;
}

inline bool is_identity_permutation(const std::vector<int>& order) {
  for (std::size_t k = 0; k < order.size(); ++k)
    if (order[k] != static_cast<int>(k)) return false;
  return true;
}

/// Recursive tree search with backtracking over zero-block candidates.
/// Returns the factor chain of `s` or nullopt; tracks the smallest failing
/// block as the irreducibility witness.
inline std::optional<std::vector<ReductionFactor>> reduce_chain(const MatX& s,
                                                                std::optional<MatX>& witness) {
  const int n = static_cast<int>(s.rows());
  if (n <= 2) {
    ReductionFactor f;
    f.matrix = s;
    f.kind = n == 1 ? "block1" : "block2";
    for (int c = 1; c <= n; ++c) f.channels.push_back(c);
    return std::vector<ReductionFactor>{std::move(f)};
  }
  const auto candidates = zero_block_candidates(s);
  for (const auto& cand : candidates) {
    ReduceOnceResult r = factor_from_candidate(s, cand);
    {
      MatX expected = MatX::Identity(n, n);
      expected.topLeftCorner(r.p, r.p) = r.s1;
      if ((r.factor1 - expected).cwiseAbs().maxCoeff() > tolerances().reduction_product) continue;
    }
    auto chain1 = reduce_chain(r.s1, witness);
    if (!chain1) continue;
    auto chain2 = reduce_chain(r.s2, witness);
    if (!chain2) continue;

    std::vector<ReductionFactor> out;
    if (!is_identity_permutation(r.row_order)) {
      ReductionFactor f;
      f.matrix = permutation_matrix_rows(r.row_order).transpose();
      f.kind = "permutation";
      out.push_back(std::move(f));
    }
    for (auto& f : *chain1) {  // embed p x p factors at the top-left
      ReductionFactor g;
      g.matrix = MatX::Identity(n, n);
      g.matrix.topLeftCorner(r.p, r.p) = f.matrix;
      g.kind = f.kind;
      g.channels = f.channels;
      out.push_back(std::move(g));
    }
    for (auto& f : *chain2) {  // embed (N-q) x (N-q) factors at the bottom-right
      ReductionFactor g;
      g.matrix = MatX::Identity(n, n);
      g.matrix.bottomRightCorner(n - r.q, n - r.q) = f.matrix;
      g.kind = f.kind;
      for (const int c : f.channels) g.channels.push_back(c + r.q);
      out.push_back(std::move(g));
    }
    if (!is_identity_permutation(r.col_order)) {
      ReductionFactor f;
      f.matrix = permutation_matrix_rows(r.col_order);
      f.kind = "permutation";
      out.push_back(std::move(f));
    }
    return out;
  }
  if (!witness || witness->rows() > n) witness = s;
  return std::nullopt;
}

}  // namespace detail

/// Recursive reduction into 2x2 (and scalar) factors, with permutation
/// factors carrying the channel relabelings. On success the ordered factor
/// product reproduces S; on failure the smallest irreducible block found is
/// reported as the residual.
inline CompleteReductionResult complete_reduction(const MatX& s) {
  const int n = static_cast<int>(s.rows());
  if (n < 1 || s.cols() != n) throw ParamError("complete_reduction: square matrix required");
  if (n > 6) throw ResourceError("complete_reduction: N > 6");
  CompleteReductionResult result;
  std::optional<MatX> witness;
  auto chain = detail::reduce_chain(s, witness);
  if (!chain) {
    result.success = false;
    result.tree.residual = witness ? witness : std::optional<MatX>(s);
    return result;
  }
  result.tree.factors = std::move(*chain);
  MatX product = MatX::Identity(n, n);
  for (const ReductionFactor& f : result.tree.factors) product = product * f.matrix;
  result.product_defect = (product - s).cwiseAbs().maxCoeff();
  if (result.product_defect > tolerances().reduction_product)
    throw NumericalError("complete_reduction: factor product defect " +
                             std::to_string(result.product_defect),
                         result.product_defect);
  result.success = true;
  return result;
}

struct StructuralItem {
  bool applicable = false;
  bool passed = true;
  std::string witness;
};

/// The vanishing-pattern consequences of uniform signs:
///  (a) N = 3: at least one zero entry;
///  (b) general N: at least N-1 zero entries;
///  (c) every 3x3 submatrix has a zero entry, or every expansion term of its
///      complementary minor vanishes.
struct StructuralReport {
  int n = 0;
  SignUniformity uniformity = SignUniformity::NonNegative;
  bool nonnegative = false;
  int zero_count = 0;
  StructuralItem item_a;
  StructuralItem item_b;
  StructuralItem item_c;
};

inline StructuralReport structural_checks(const MatX& s) {
  const int n = static_cast<int>(s.rows());
  if (n < 1 || s.cols() != n) throw ParamError("structural_checks: square matrix required");
  if (n > 8) throw ResourceError("structural_checks: N > 8");
  const double zero_tol = tolerances().zero_entry;
  StructuralReport rep;
  rep.n = n;
  rep.uniformity = det_expansion_terms(s).uniformity;
  rep.nonnegative = rep.uniformity != SignUniformity::Mixed;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      if (std::abs(s(r, c)) <= zero_tol) ++rep.zero_count;

  rep.item_a.applicable = (n == 3) && rep.nonnegative;
  if (rep.item_a.applicable && rep.zero_count < 1) {
    rep.item_a.passed = false;
    rep.item_a.witness = "no vanishing entry";
  }
  rep.item_b.applicable = rep.nonnegative;
  if (rep.item_b.applicable && rep.zero_count < n - 1) {
    rep.item_b.passed = false;
    rep.item_b.witness = "only " + std::to_string(rep.zero_count) + " vanishing entries";
  }
  rep.item_c.applicable = rep.nonnegative && n >= 3;
  if (rep.item_c.applicable) {
    std::vector<int> rows(3), cols(3);
    auto next_combo = [n](std::vector<int>& v) {
      int k = 2;
      while (k >= 0 && v[static_cast<std::size_t>(k)] == n - 3 + k) --k;
      if (k < 0) return false;
      ++v[static_cast<std::size_t>(k)];
      for (int j = k + 1; j < 3; ++j)
        v[static_cast<std::size_t>(j)] = v[static_cast<std::size_t>(j - 1)] + 1;
      return true;
    };
    rows = {0, 1, 2};
    do {
      cols = {0, 1, 2};
      do {
        bool has_zero = false;
        for (const int r : rows)
          for (const int c : cols)
            if (std::abs(s(r, c)) <= zero_tol) has_zero = true;
        if (has_zero) continue;
        // complementary minor: all (N-3)! expansion terms must vanish
        std::vector<int> rrest, crest;
        for (int x = 0; x < n; ++x) {
          if (std::find(rows.begin(), rows.end(), x) == rows.end()) rrest.push_back(x);
          if (std::find(cols.begin(), cols.end(), x) == cols.end()) crest.push_back(x);
        }
        std::vector<int> perm(crest.size());
        std::iota(perm.begin(), perm.end(), 0);
        bool all_vanish = true;
        do {
          double t = 1.0;
          for (std::size_t k = 0; k < rrest.size(); ++k)
            t *= s(rrest[k], crest[static_cast<std::size_t>(perm[k])]);
          if (std::abs(t) > zero_tol) {
            all_vanish = false;
            break;
          }
        } while (std::next_permutation(perm.begin(), perm.end()));
        if (!all_vanish) {
          rep.item_c.passed = false;
          rep.item_c.witness = "submatrix rows {" + std::to_string(rows[0] + 1) + "," +
                               std::to_string(rows[1] + 1) + "," + std::to_string(rows[2] + 1) +
                               "} cols {" + std::to_string(cols[0] + 1) + "," +
                               std::to_string(cols[1] + 1) + "," + std::to_string(cols[2] + 1) +
                               "}";
          return rep;
        }
      } while (next_combo(cols));
    } while (next_combo(rows));
  }
  return rep;
}

}  // namespace classc
