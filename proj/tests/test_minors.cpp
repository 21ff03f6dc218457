#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "classc/fixtures.hpp"
#include "classc/minors.hpp"
#include "classc/orthogonal.hpp"

using namespace classc;

namespace {

// independent determinant oracle: cofactor expansion
double det_recursive(const MatX& m) {
  const int n = static_cast<int>(m.rows());
  if (n == 1) return m(0, 0);
  double det = 0.0;
  double sign = 1.0;
  for (int c = 0; c < n; ++c) {
    MatX sub(n - 1, n - 1);
    for (int r = 1; r < n; ++r) {
      int cc = 0;
      for (int k = 0; k < n; ++k) {
        if (k == c) continue;
        sub(r - 1, cc++) = m(r, k);
      }
    }
    det += sign * m(0, c) * det_recursive(sub);
    sign = -sign;
  }
  return det;
}

}  // namespace

TEST_CASE("channel subsets", "[minors]") {
  REQUIRE_THROWS_AS(ChannelSubset::of({2, 1}), ParamError);
  REQUIRE_THROWS_AS(ChannelSubset::of({1, 1}), ParamError);
  REQUIRE_THROWS_AS(ChannelSubset::of({0, 1}), ParamError);
  const ChannelSubset s = ChannelSubset::of({1, 3});
  const ChannelSubset c = s.complement(4);
  REQUIRE(c.indices == std::vector<int>{2, 4});
  REQUIRE(s.sum() == 4);
  REQUIRE(s.rank_of(3) == 1);
}

TEST_CASE("pairing permutation signatures", "[minors]") {
  REQUIRE(ChannelPairing::from_visits({{1, 1}}).signature == 1);
  REQUIRE(ChannelPairing::from_visits({{1, 1}, {2, 2}}).signature == 1);
  REQUIRE(ChannelPairing::from_visits({{1, 2}, {2, 1}}).signature == -1);
  REQUIRE(ChannelPairing::from_visits({{2, 1}, {1, 2}}).signature == -1);
  REQUIRE(ChannelPairing::from_visits({{1, 3}, {2, 1}, {3, 2}}).signature == 1);
  REQUIRE_THROWS_AS(ChannelPairing::from_visits({{1, 1}, {1, 2}}), ParamError);
  REQUIRE_THROWS_AS(ChannelPairing::from_visits({{1, 1}, {2, 1}}), ParamError);
}

TEST_CASE("minor determinants", "[minors]") {
  const MatX id3 = MatX::Identity(3, 3);
  REQUIRE(minor_det(id3, ChannelSubset::of({1, 3}), ChannelSubset::of({1, 3})) == 1.0);
  REQUIRE(minor_det(id3, ChannelSubset::of({}), ChannelSubset::of({})) == 1.0);

  const double theta = 0.6;
  const MatX rot = rotation2(theta);
  REQUIRE(minor_det(rot, ChannelSubset::of({2}), ChannelSubset::of({1})) ==
          Catch::Approx(-std::sin(theta)));

  RngStream rng(201);
  const MatX s4 = random_orthogonal(4, rng);
  const double full = minor_det(s4, ChannelSubset::of({1, 2, 3, 4}), ChannelSubset::of({1, 2, 3, 4}));
  REQUIRE(std::abs(std::abs(full) - 1.0) <= 1e-10);
  REQUIRE(full == Catch::Approx(det_recursive(s4)).margin(1e-10));

  // singletons read the entry
  for (int i = 1; i <= 4; ++i)
    for (int j = 1; j <= 4; ++j)
      REQUIRE(minor_det(s4, ChannelSubset::of({i}), ChannelSubset::of({j})) == s4(i - 1, j - 1));

  REQUIRE_THROWS_AS(minor_det(s4, ChannelSubset::of({1}), ChannelSubset::of({1, 2})), ParamError);
  REQUIRE_THROWS_AS(minor_det(s4, ChannelSubset::of({5}), ChannelSubset::of({1})), ParamError);

  // random minors against the cofactor oracle
  for (int c = 0; c < 50; ++c) {
    RngStream cr = rng.split(static_cast<std::uint64_t>(c));
    const int n = 2 + static_cast<int>(cr.uniform_index(4));
    const MatX s = random_orthogonal(n, cr);
    std::vector<int> rows, cols;
    for (int x = 1; x <= n; ++x) {
      if (cr.uniform() < 0.5) rows.push_back(x);
      if (cr.uniform() < 0.5) cols.push_back(x);
    }
    const std::size_t k = std::min(rows.size(), cols.size());
    rows.resize(k);
    cols.resize(k);
    if (k == 0) continue;
    MatX sub(k, k);
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) sub(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
          s(rows[a] - 1, cols[b] - 1);
    REQUIRE(minor_det(s, ChannelSubset::of(rows), ChannelSubset::of(cols)) ==
            Catch::Approx(det_recursive(sub)).margin(1e-11));
  }
}

TEST_CASE("signed complementary-minor identity", "[minors]") {
  const double theta = 0.8;
  const MatX rot = rotation2(theta);
  {
    // hand expansion: lhs = S_12 = sin, rhs = (-1)^(1+2) det S * S_21 = sin
    const auto [lhs, rhs] = jacobi_complement_check(rot, ChannelSubset::of({1}), ChannelSubset::of({2}));
    REQUIRE(lhs == Catch::Approx(std::sin(theta)));
    REQUIRE(rhs == Catch::Approx(std::sin(theta)));
  }
  {
    const MatX id4 = MatX::Identity(4, 4);
    const auto [lhs, rhs] =
        jacobi_complement_check(id4, ChannelSubset::of({1, 2}), ChannelSubset::of({1, 2}));
    REQUIRE(lhs == 1.0);
    REQUIRE(rhs == 1.0);
  }
  RngStream rng(202);
  double worst = 0.0;
  for (int c = 0; c < 1000; ++c) {
    RngStream cr = rng.split(static_cast<std::uint64_t>(c));
    const int n = 1 + static_cast<int>(cr.uniform_index(6));
    const MatX s = random_orthogonal(n, cr);
    std::vector<int> all(static_cast<std::size_t>(n));
    for (int x = 0; x < n; ++x) all[static_cast<std::size_t>(x)] = x + 1;
    auto rows = all, cols = all;
    shuffle_in_place(rows, cr);
    shuffle_in_place(cols, cr);
    const std::size_t k = cr.uniform_index(static_cast<std::uint64_t>(n) + 1);
    rows.resize(k);
    cols.resize(k);
    std::sort(rows.begin(), rows.end());
    std::sort(cols.begin(), cols.end());
    const auto [lhs, rhs] =
        jacobi_complement_check(s, ChannelSubset::of(rows), ChannelSubset::of(cols));
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  REQUIRE(worst <= 1e-10);
}

TEST_CASE("plane rotations", "[orthogonal]") {
  REQUIRE((givens_rotation(3, 1, 2, 0.0) - MatX::Identity(3, 3)).cwiseAbs().maxCoeff() == 0.0);
  const double theta = 0.31;
  const MatX g2 = givens_rotation(2, 1, 2, theta);
  REQUIRE(g2(0, 0) == Catch::Approx(std::cos(theta)));
  REQUIRE(g2(0, 1) == Catch::Approx(std::sin(theta)));
  REQUIRE(g2(1, 0) == Catch::Approx(-std::sin(theta)));
  REQUIRE(g2(1, 1) == Catch::Approx(std::cos(theta)));
  REQUIRE(g2.determinant() == Catch::Approx(1.0));

  const MatX refl = givens_rotation(2, 1, 2, theta, true);
  REQUIRE(refl.determinant() == Catch::Approx(-1.0));
  REQUIRE(is_orthogonal(refl, 1e-12));

  const MatX prod = givens_rotation(3, 1, 2, 0.4) * givens_rotation(3, 1, 3, 1.1) *
                    givens_rotation(3, 2, 3, -0.7);
  REQUIRE(orthogonality_defect(prod) <= 1e-12);

  REQUIRE_THROWS_AS(givens_rotation(3, 2, 2, 0.1), ParamError);
  REQUIRE_THROWS_AS(givens_rotation(3, 0, 2, 0.1), ParamError);
  REQUIRE_THROWS_AS(givens_rotation(3, 1, 4, 0.1), ParamError);
}

TEST_CASE("random orthogonal matrices", "[orthogonal]") {
  RngStream rng(203);
  int det_minus = 0;
  for (int k = 0; k < 200; ++k) {
    const int n = 1 + static_cast<int>(rng.uniform_index(6));
    const MatX s = random_orthogonal(n, rng);
    REQUIRE(is_orthogonal(s, 1e-10));
    if (s.determinant() < 0.0) ++det_minus;
  }
  REQUIRE(det_minus > 40);  // both components of O(N) occur

  const GivensTree tree = random_givens_tree(4, rng);
  REQUIRE(is_orthogonal(tree.matrix, 1e-10));
  REQUIRE(tree.pairs.size() == 3);
}
