#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

#include "classc/errors.hpp"

namespace classc {

/// Running mean / standard error for real samples.
struct RunningStat {
  std::size_t n = 0;
  double sum = 0.0;
  double sumsq = 0.0;

  void add(double x) {
    ++n;
    sum += x;
    sumsq += x * x;
  }
  void merge(const RunningStat& o) {
    n += o.n;
    sum += o.sum;
    sumsq += o.sumsq;
  }
  double mean() const { return n ? sum / static_cast<double>(n) : 0.0; }
  double variance() const {
    if (n < 2) return 0.0;
    const double m = mean();
    double v = (sumsq - static_cast<double>(n) * m * m) / static_cast<double>(n - 1);
    return v > 0.0 ? v : 0.0;
  }
  double stderror() const { return n ? std::sqrt(variance() / static_cast<double>(n)) : 0.0; }
};

/// Running mean / standard error for complex samples; the error is the
/// modulus-level s.e. sqrt(E|x-m|^2 / n).
struct ComplexStat {
  std::size_t n = 0;
  std::complex<double> sum{0.0, 0.0};
  double sum_abs2 = 0.0;

  void add(std::complex<double> x) {
    ++n;
    sum += x;
    sum_abs2 += std::norm(x);
  }
  void merge(const ComplexStat& o) {
    n += o.n;
    sum += o.sum;
    sum_abs2 += o.sum_abs2;
  }
  std::complex<double> mean() const {
    return n ? sum / static_cast<double>(n) : std::complex<double>{0.0, 0.0};
  }
  double stderror() const {
    if (n < 2) return 0.0;
    const double m2 = std::norm(mean());
    double v = (sum_abs2 - static_cast<double>(n) * m2) / static_cast<double>(n - 1);
    if (v < 0.0) v = 0.0;
    return std::sqrt(v / static_cast<double>(n));
  }
};

// ---------------------------------------------------------------------------
// Regularized incomplete gamma (series + continued fraction), for chi^2 tails.
// ---------------------------------------------------------------------------

namespace detail {

inline double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

inline double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace detail

/// Regularized upper incomplete gamma Q(a, x).
inline double gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw ParamError("gamma_q: bad arguments");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
  return detail::gamma_q_cf(a, x);
}

/// Right-tail p-value of a chi-square statistic.
inline double chi_square_pvalue(double chi2, int dof) {
  if (dof <= 0) throw ParamError("chi_square_pvalue: dof must be positive");
  return gamma_q(0.5 * dof, 0.5 * chi2);
}

/// Pearson chi-square test of observed counts against expected probabilities.
/// Expected counts below min_expected are pooled into the largest cell.
inline double chi_square_gof_pvalue(const std::vector<std::size_t>& observed,
                                    const std::vector<double>& probs,
                                    double min_expected = 5.0) {
  if (observed.size() != probs.size() || observed.empty())
    throw ParamError("chi_square_gof_pvalue: size mismatch");
  std::size_t n = 0;
  for (auto c : observed) n += c;
  if (n == 0) throw StatsError("chi_square_gof_pvalue: no samples");

  // pool small-expectation cells into the cell with the largest expectation
  std::size_t big = 0;
  for (std::size_t i = 1; i < probs.size(); ++i)
    if (probs[i] > probs[big]) big = i;
  double chi2 = 0.0;
  int cells = 0;
  double pooled_obs = 0.0, pooled_exp = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double e = probs[i] * static_cast<double>(n);
    if (i != big && e < min_expected) {
      pooled_obs += static_cast<double>(observed[i]);
      pooled_exp += e;
      continue;
    }
    chi2 += std::pow(static_cast<double>(observed[i]) - e, 2) / e;
    ++cells;
  }
  if (pooled_exp > 0.0) {
    chi2 += std::pow(pooled_obs - pooled_exp, 2) / pooled_exp;
    ++cells;
  }
  if (cells < 2) throw StatsError("chi_square_gof_pvalue: fewer than 2 cells");
  return chi_square_pvalue(chi2, cells - 1);
}

/// Two-sample Kolmogorov-Smirnov p-value (asymptotic formula).
inline double ks_two_sample_pvalue(std::vector<double> a, std::vector<double> b) {
  if (a.size() < 8 || b.size() < 8) throw StatsError("ks_two_sample_pvalue: too few samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double xa = a[i], xb = b[j];
    if (xa <= xb) ++i;
    if (xb <= xa) ++j;
    const double fa = static_cast<double>(i) / na;
    const double fb = static_cast<double>(j) / nb;
    d = std::max(d, std::abs(fa - fb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  const double lambda = (ne + 0.12 + 0.11 / ne) * d;
  // Q_KS(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2)
  double p = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    p += sign * term;
    sign = -sign;
    if (term < 1e-16) break;
  }
  p *= 2.0;
  return std::clamp(p, 0.0, 1.0);
}

/// Least-squares line fit; returns slope, intercept and the slope's s.e.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  std::size_t n = 0;
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 3) throw StatsError("fit_line: need >= 3 points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0) throw StatsError("fit_line: degenerate abscissae");
  LineFit f;
  f.n = x.size();
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss_res += r * r;
  }
  f.slope_stderr = std::sqrt(ss_res / (n - 2.0) / sxx);
  return f;
}

}  // namespace classc
