#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

#include "classc/errors.hpp"
#include "classc/minors.hpp"
#include "classc/tolerances.hpp"
#include "classc/trails.hpp"
#include "classc/types.hpp"

namespace classc {

enum class SignUniformity { NonNegative, NonPositive, Mixed };

/// All N! signed terms of the determinant expansion of S.
struct SignProfile {
  std::vector<std::pair<std::vector<int>, double>> terms;  // (sigma as 1-based images, value)
  SignUniformity uniformity = SignUniformity::NonNegative;
  double term_sum = 0.0;
  double term_product = 0.0;
};

inline SignProfile det_expansion_terms(const MatX& s) {
  const int n = static_cast<int>(s.rows());
  if (n < 1 || s.cols() != n) throw ParamError("det_expansion_terms: square matrix required");
  if (n > 8) throw ResourceError("det_expansion_terms: N > 8 (N! enumeration)");
  const double zero_tol = tolerances().zero_entry;
  SignProfile profile;
  std::vector<int> sigma(static_cast<std::size_t>(n));
  std::iota(sigma.begin(), sigma.end(), 0);
  bool any_pos = false, any_neg = false;
  profile.term_product = 1.0;
  do {
    int sign = 1;
    for (std::size_t a = 0; a < sigma.size(); ++a)
      for (std::size_t b = a + 1; b < sigma.size(); ++b)
        if (sigma[a] > sigma[b]) sign = -sign;
    double value = sign;
    for (int r = 0; r < n; ++r) value *= s(r, sigma[static_cast<std::size_t>(r)]);
    std::vector<int> images(sigma.size());
    for (std::size_t k = 0; k < sigma.size(); ++k) images[k] = sigma[k] + 1;
    profile.terms.emplace_back(std::move(images), value);
    profile.term_sum += value;
    profile.term_product *= value;
    if (value > zero_tol) any_pos = true;
    if (value < -zero_tol) any_neg = true;
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  profile.uniformity = (any_pos && any_neg)
                           ? SignUniformity::Mixed
                           : (any_neg ? SignUniformity::NonPositive : SignUniformity::NonNegative);
  return profile;
}

/// Theorem-4 style criterion: every Omega weight at this node is non-negative
/// iff no two determinant-expansion terms have opposite signs.
inline bool weights_nonnegative(const MatX& s) {
  return det_expansion_terms(s).uniformity != SignUniformity::Mixed;
}

struct OmegaExtremum {
  double min_omega = 1.0;
  std::vector<std::pair<int, int>> witness_visits;
};

/// Brute-force check of the same statement: enumerates Omega over all subset
/// pairs and pairings. Exponential; guarded at N <= 5.
inline OmegaExtremum omega_minimum_exhaustive(const MatX& s) {
  const int n = static_cast<int>(s.rows());
  if (n > 5) throw ResourceError("omega_minimum_exhaustive: N > 5");
  OmegaExtremum ext;
  for (unsigned jm = 1; jm < (1u << n); ++jm)
    for (unsigned im = 1; im < (1u << n); ++im) {
      if (__builtin_popcount(jm) != __builtin_popcount(im)) continue;
      std::vector<int> js, is;
      for (int c = 0; c < n; ++c) {
        if (jm & (1u << c)) js.push_back(c + 1);
        if (im & (1u << c)) is.push_back(c + 1);
      }
      std::vector<int> perm = is;
      std::sort(perm.begin(), perm.end());
      do {
        std::vector<std::pair<int, int>> visits;
        for (std::size_t k = 0; k < js.size(); ++k) visits.emplace_back(js[k], perm[k]);
        const double w = omega(s, visits).omega;
        if (w < ext.min_omega) {
          ext.min_omega = w;
          ext.witness_visits = visits;
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
  return ext;
}

}  // namespace classc
