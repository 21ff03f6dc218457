#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>

#include "classc/rng.hpp"
#include "classc/stats.hpp"
#include "classc/tolerances.hpp"
#include "classc/types.hpp"

namespace classc {

inline double su2_unitarity_defect(const Mat2c& u) {
  return (u.adjoint() * u - Mat2c::Identity()).cwiseAbs().maxCoeff();
}

inline bool is_su2(const Mat2c& u, double tol = tolerances().su2_unitarity) {
  return su2_unitarity_defect(u) <= tol && std::abs(u.determinant() - 1.0) <= tol;
}

namespace detail {

// Inverse CDF of the angle density (2/pi) sin^2(a) on [0, pi]:
// F(a) = (2a - sin 2a) / (2 pi). Table guess + safeguarded Newton.
class SinSqInverseCdf {
 public:
  SinSqInverseCdf() {
    for (std::size_t i = 0; i < kN; ++i) {
      alpha_[i] = M_PI * static_cast<double>(i) / static_cast<double>(kN - 1);
      cdf_[i] = cdf(alpha_[i]);
    }
  }

  double operator()(double u) const {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return M_PI;
    // bracket from the table (cdf_ is strictly increasing)
    std::size_t lo = 0, hi = kN - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      (cdf_[mid] <= u ? lo : hi) = mid;
    }
    double a_lo = alpha_[lo], a_hi = alpha_[hi];
    double a = a_lo + (a_hi - a_lo) * (u - cdf_[lo]) / (cdf_[hi] - cdf_[lo]);
    for (int it = 0; it < 60; ++it) {
      const double f = cdf(a) - u;
      (f > 0.0 ? a_hi : a_lo) = a;
      const double deriv = (1.0 - std::cos(2.0 * a)) / M_PI;
      double step = deriv > 1e-14 ? a - f / deriv : 0.5 * (a_lo + a_hi);
      if (step <= a_lo || step >= a_hi) step = 0.5 * (a_lo + a_hi);
      if (std::abs(step - a) < 1e-15) return step;
      a = step;
    }
    return a;
  }

 private:
  static double cdf(double a) { return (2.0 * a - std::sin(2.0 * a)) / (2.0 * M_PI); }
  static constexpr std::size_t kN = 1025;
  std::array<double, kN> alpha_{};
  std::array<double, kN> cdf_{};
};

inline const SinSqInverseCdf& sin_sq_inverse_cdf() {
  static const SinSqInverseCdf table;
  return table;
}

}  // namespace detail

/// Haar-uniform SU(2) element, sampled as U = cos(a) + i sin(a) n.sigma with
/// a ~ (2/pi) sin^2(a) on [0, pi] and n uniform on the sphere.
inline Mat2c haar_su2(RngStream& rng) {
  const double alpha = detail::sin_sq_inverse_cdf()(rng.uniform());
  const double nz = 1.0 - 2.0 * rng.uniform();
  const double phi = 2.0 * M_PI * rng.uniform();
  const double r = std::sqrt(std::max(0.0, 1.0 - nz * nz));
  const double nx = r * std::cos(phi);
  const double ny = r * std::sin(phi);
  const double c = std::cos(alpha), s = std::sin(alpha);
  Mat2c u;
  u << Complex(c, nz * s), Complex(ny * s, nx * s),
      Complex(-ny * s, nx * s), Complex(c, -nz * s);
  return u;
}

/// Scalar-times-SU(2) factorization G = lambda * U with lambda >= 0.
/// Returns nullopt when G is not (within tolerance) proportional to SU(2).
/// The zero matrix decomposes as (0, identity).
inline std::optional<std::pair<double, Mat2c>> su2_scalar_decompose(
    const Mat2c& g, double tol = tolerances().su2_decompose) {
  const double scale = g.cwiseAbs().maxCoeff();
  if (scale == 0.0) return std::make_pair(0.0, Mat2c(Mat2c::Identity()));
  const Complex det = g.determinant();
  if (det.real() < 0.0 || std::abs(det.imag()) > tol * std::max(1.0, std::abs(det)))
    return std::nullopt;
  const double lambda = std::sqrt(std::max(0.0, det.real()));
  if (lambda <= 0.0) return std::nullopt;  // nonzero G with vanishing det
  const Mat2c u = g / lambda;
  if (!is_su2(u, tol)) return std::nullopt;
  return std::make_pair(lambda, u);
}

struct HaarProbeResult {
  Complex estimate{0.0, 0.0};
  double stderror = 0.0;
  std::size_t samples = 0;
};

/// Monte Carlo estimate of the group integral of exp(z * bL† U bR) over
/// Haar-distributed U; equals 1 identically.
inline HaarProbeResult haar_integral_probe(const Vec2c& b_left, const Vec2c& b_right,
                                           Complex z, std::size_t n_samples,
                                           RngStream& rng) {
  ComplexStat stat;
  for (std::size_t k = 0; k < n_samples; ++k) {
    const Mat2c u = haar_su2(rng);
    const Complex expo = z * (b_left.adjoint() * u * b_right)(0, 0);
    stat.add(std::exp(expo));
  }
  return HaarProbeResult{stat.mean(), stat.stderror(), stat.n};
}

}  // namespace classc
