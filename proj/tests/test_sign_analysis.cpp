#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "classc/fixtures.hpp"
#include "classc/reduction.hpp"
#include "classc/sign_analysis.hpp"

using namespace classc;

namespace {

// the vanishing pattern S13 = S14 = S24 = 0: a three-factor path composition
MatX path_tree4(double ta, double tb, double tc) {
  return givens_rotation(4, 3, 4, ta) * givens_rotation(4, 2, 3, tb) * givens_rotation(4, 1, 2, tc);
}

}  // namespace

TEST_CASE("determinant expansion terms", "[signs]") {
  const double theta = 0.7;
  {
    const SignProfile p = det_expansion_terms(rotation2(theta));
    REQUIRE(p.terms.size() == 2);
    REQUIRE(p.term_sum == Catch::Approx(1.0).margin(1e-14));
    REQUIRE(p.uniformity == SignUniformity::NonNegative);
    // terms are cos^2 and sin^2
    const double a = p.terms[0].second, b = p.terms[1].second;
    REQUIRE(std::min(a, b) == Catch::Approx(std::min(std::sin(theta) * std::sin(theta),
                                                     std::cos(theta) * std::cos(theta))));
  }
  {
    // reflection: both terms non-positive
    const MatX r = givens_rotation(2, 1, 2, theta, true);
    const SignProfile p = det_expansion_terms(r);
    REQUIRE(p.uniformity == SignUniformity::NonPositive);
    REQUIRE(p.term_sum == Catch::Approx(-1.0).margin(1e-14));
  }
  RngStream rng(801);
  {
    const MatX s = random_orthogonal_zero_free(3, rng);
    const SignProfile p = det_expansion_terms(s);
    REQUIRE(p.terms.size() == 6);
    REQUIRE(p.uniformity == SignUniformity::Mixed);
    REQUIRE(p.term_sum == Catch::Approx(s.determinant()).margin(1e-10));
    double sq = 1.0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) sq *= s(a, b) * s(a, b);
    REQUIRE(p.term_product == Catch::Approx(-sq).margin(1e-10));
  }
  {
    // decoupled pairs factorize into non-negative 2x2 terms
    MatX s = MatX::Zero(4, 4);
    s.topLeftCorner(2, 2) = rotation2(0.3);
    s.bottomRightCorner(2, 2) = rotation2(1.2);
    REQUIRE(det_expansion_terms(s).uniformity == SignUniformity::NonNegative);
  }
  REQUIRE_THROWS_AS(det_expansion_terms(MatX::Identity(9, 9)), ResourceError);
}

TEST_CASE("weight non-negativity criterion", "[signs]") {
  RngStream rng(802);
  for (int c = 0; c < 50; ++c) {
    RngStream cr = rng.split(static_cast<std::uint64_t>(c));
    REQUIRE(weights_nonnegative(random_orthogonal(2, cr)));
    REQUIRE_FALSE(weights_nonnegative(random_orthogonal_zero_free(3, cr)));
  }
  REQUIRE(weights_nonnegative(path_tree4(0.3, 0.8, 1.4)));

  // the criterion agrees with brute-force Omega enumeration
  for (int c = 0; c < 30; ++c) {
    RngStream cr = rng.split(1000 + static_cast<std::uint64_t>(c));
    const int n = 2 + static_cast<int>(cr.uniform_index(3));  // 2..4
    const MatX s = cr.uniform() < 0.5 ? random_orthogonal(n, cr)
                                      : random_givens_tree(n, cr).matrix;
    const bool fast = weights_nonnegative(s);
    const OmegaExtremum ext = omega_minimum_exhaustive(s);
    REQUIRE(fast == (ext.min_omega >= -1e-12));
  }
}

TEST_CASE("single factorization step", "[reduction]") {
  {
    // block-diag(rotation, 1): degenerate fully-decoupled split
    MatX s = MatX::Identity(3, 3);
    s.topLeftCorner(2, 2) = rotation2(0.9);
    const auto r = reduce_once(s);
    REQUIRE(r.has_value());
    REQUIRE(r->degenerate);
    REQUIRE(r->p == r->q);
    REQUIRE((r->factor1 * r->factor2 -
             detail::permutation_matrix_rows(r->row_order) * s *
                 detail::permutation_matrix_rows(r->col_order).transpose())
                .cwiseAbs()
                .maxCoeff() <= 1e-9);
  }
  {
    const MatX s = path_tree4(0.4, 1.0, 2.2);
    const auto r = reduce_once(s);
    REQUIRE(r.has_value());
    const MatX sp = detail::permutation_matrix_rows(r->row_order) * s *
                    detail::permutation_matrix_rows(r->col_order).transpose();
    REQUIRE((r->factor1 * r->factor2 - sp).cwiseAbs().maxCoeff() <= 1e-9);
  }
  RngStream rng(803);
  for (int c = 0; c < 20; ++c) {
    RngStream cr = rng.split(static_cast<std::uint64_t>(c));
    REQUIRE_FALSE(reduce_once(random_orthogonal_zero_free(4, cr)).has_value());
  }
  REQUIRE_THROWS_AS(reduce_once(rotation2(0.1)), ParamError);
}

TEST_CASE("complete reduction", "[reduction]") {
  {
    const CompleteReductionResult r = complete_reduction(rotation2(0.4));
    REQUIRE(r.success);
    REQUIRE(r.tree.factors.size() == 1);
  }
  RngStream rng(804);
  // construct-then-analyze round trip over random trees
  for (int c = 0; c < 200; ++c) {
    RngStream cr = rng.split(static_cast<std::uint64_t>(c));
    const int n = 2 + static_cast<int>(cr.uniform_index(4));  // up to 5
    if (n > 4 && c % 3 != 0) continue;                        // keep runtime modest
    const GivensTree tree = random_givens_tree(n, cr);
    const CompleteReductionResult r = complete_reduction(tree.matrix);
    REQUIRE(r.success);
    REQUIRE(r.product_defect <= 1e-9);
    for (const ReductionFactor& f : r.tree.factors) {
      if (f.kind == "permutation") continue;
      REQUIRE(f.channels.size() <= 2);
    }
  }
  for (int c = 0; c < 20; ++c) {
    RngStream cr = rng.split(1000 + static_cast<std::uint64_t>(c));
    const CompleteReductionResult r = complete_reduction(random_orthogonal_zero_free(3, cr));
    REQUIRE_FALSE(r.success);
    REQUIRE(r.tree.residual.has_value());
    REQUIRE(r.tree.residual->rows() >= 3);
  }
  REQUIRE_THROWS_AS(complete_reduction(MatX::Identity(7, 7)), ResourceError);
}

TEST_CASE("sufficiency and necessity round trips at N = 3, 4", "[reduction]") {
  RngStream rng(805);
  for (int c = 0; c < 150; ++c) {
    RngStream cr = rng.split(static_cast<std::uint64_t>(c));
    const int n = 3 + static_cast<int>(cr.uniform_index(2));
    const GivensTree tree = random_givens_tree(n, cr, /*boundary_angles=*/true);
    // sufficiency: reducible (by construction) implies non-negative weights
    REQUIRE(weights_nonnegative(tree.matrix));
    // necessity: non-negative weights imply a successful reduction
    REQUIRE(complete_reduction(tree.matrix).success);
  }
}

TEST_CASE("structural vanishing-pattern checks", "[reduction]") {
  {
    // uniform-sign O(3) built from two plane rotations has a vanished entry
    const MatX s = givens_rotation(3, 1, 2, 0.8) * givens_rotation(3, 2, 3, 1.3);
    const StructuralReport rep = structural_checks(s);
    REQUIRE(rep.nonnegative);
    REQUIRE(rep.item_a.applicable);
    REQUIRE(rep.item_a.passed);
    REQUIRE(rep.zero_count >= 1);
  }
  {
    // completely reducible O(4): at least 3 zeros
    const StructuralReport rep = structural_checks(path_tree4(0.5, 1.1, 0.2));
    REQUIRE(rep.nonnegative);
    REQUIRE(rep.item_b.applicable);
    REQUIRE(rep.item_b.passed);
    REQUIRE(rep.zero_count >= 3);
    REQUIRE(rep.item_c.applicable);
    REQUIRE(rep.item_c.passed);
  }
  {
    RngStream rng(806);
    const StructuralReport rep = structural_checks(random_orthogonal_zero_free(4, rng));
    REQUIRE_FALSE(rep.nonnegative);
    REQUIRE_FALSE(rep.item_a.applicable);
    REQUIRE_FALSE(rep.item_b.applicable);
    REQUIRE_FALSE(rep.item_c.applicable);
  }
}
