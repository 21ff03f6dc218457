#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "classc/evolution.hpp"
#include "classc/graph.hpp"
#include "classc/tolerances.hpp"
#include "classc/types.hpp"

namespace classc {

/// 2x2 spin block of the resolvent (1 - z U)^(-1) between two edges.
struct GreenBlock {
  Mat2c entries;
  Complex z;
  double residual = 0.0;
};

/// Holds the factorized (1 - z U) for repeated solves at one spectral point.
class ResolventSolver {
 public:
  ResolventSolver(const NetworkGraph& g, const MatXc& evolution, Complex z)
      : graph_(&g), z_(z), a_(MatXc::Identity(evolution.rows(), evolution.cols()) - z * evolution),
        lu_(a_) {}

  ResolventSolver(const NetworkGraph& g, const DisorderRealization& d, Complex z)
      : ResolventSolver(g, assemble_evolution(g, d), z) {}

  /// Spin block <e2| (1-zU)^{-1} |e1>; checks the solve residual.
  GreenBlock block(int e1, int e2) const {
    const Eigen::Index dim = a_.rows();
    MatXc rhs = MatXc::Zero(dim, 2);
    rhs(evolution_index(*graph_, e1, 0), 0) = 1.0;
    rhs(evolution_index(*graph_, e1, 1), 1) = 1.0;
    const MatXc x = lu_.solve(rhs);
    const double res = (a_ * x - rhs).cwiseAbs().maxCoeff();
    if (!(res <= tolerances().solve_residual))
      throw NumericalError("resolvent solve residual " + std::to_string(res) + " at z=(" +
                               std::to_string(z_.real()) + "," + std::to_string(z_.imag()) + ")",
                           res);
    GreenBlock gb;
    gb.z = z_;
    const Eigen::Index row = evolution_index(*graph_, e2, 0);
    gb.entries = x.block<2, 2>(row, 0);
    gb.residual = res;
    return gb;
  }

  /// Sum over edges of Tr G(e,e;z), i.e. the full resolvent trace.
  Complex trace() const {
    const Eigen::Index dim = a_.rows();
    const MatXc inv = lu_.solve(MatXc::Identity(dim, dim));
    const double res = (a_ * inv - MatXc::Identity(dim, dim)).cwiseAbs().maxCoeff();
    if (!(res <= tolerances().solve_residual))
      throw NumericalError("resolvent inverse residual " + std::to_string(res), res);
    return inv.trace();
  }

 private:
  const NetworkGraph* graph_;
  Complex z_;
  MatXc a_;
  Eigen::PartialPivLU<MatXc> lu_;
};

inline GreenBlock green(const NetworkGraph& g, const DisorderRealization& d, int e1, int e2,
                        Complex z) {
  return ResolventSolver(g, d, z).block(e1, e2);
}

/// Finite-smoothing density of states
///   rho_delta(eps) = (1/2pi) sum_e [Tr G(e,e;(1-d)e^{-i eps}) - Tr G(e,e;(1+d)e^{-i eps})],
/// normalized so that its integral over [0,2pi) counts all 2E eigenphases.
inline double density_of_states(const NetworkGraph& g, const DisorderRealization& d, double eps,
                                double delta) {
  if (!(delta > 0.0)) throw ParamError("density_of_states: delta must be positive");
  if (!g.is_closed()) throw ParamError("density_of_states: closed graph required");
  const MatXc u = assemble_evolution(g, d);
  const Complex phase = std::polar(1.0, -eps);
  const Complex inside = ResolventSolver(g, u, (1.0 - delta) * phase).trace();
  const Complex outside = ResolventSolver(g, u, (1.0 + delta) * phase).trace();
  return (inside - outside).real() / (2.0 * M_PI);
}

/// rho_delta sampled on n uniformly spaced eps values (one operator assembly).
inline std::vector<double> dos_curve(const NetworkGraph& g, const DisorderRealization& d,
                                     std::size_t n_points, double delta) {
  if (!(delta > 0.0)) throw ParamError("dos_curve: delta must be positive");
  if (!g.is_closed()) throw ParamError("dos_curve: closed graph required");
  const MatXc u = assemble_evolution(g, d);
  std::vector<double> out(n_points);
  for (std::size_t k = 0; k < n_points; ++k) {
    const double eps = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n_points);
    const Complex phase = std::polar(1.0, -eps);
    const Complex inside = ResolventSolver(g, u, (1.0 - delta) * phase).trace();
    const Complex outside = ResolventSolver(g, u, (1.0 + delta) * phase).trace();
    out[k] = (inside - outside).real() / (2.0 * M_PI);
  }
  return out;
}

/// Exact eigenphases of the evolution operator, as angles in [0, 2pi).
inline std::vector<double> eigenphases(const NetworkGraph& g, const DisorderRealization& d) {
  if (!g.is_closed()) throw ParamError("eigenphases: closed graph required");
  const MatXc u = assemble_evolution(g, d);
  Eigen::ComplexEigenSolver<MatXc> es(u, /*computeEigenvectors=*/false);
  std::vector<double> phases;
  phases.reserve(static_cast<std::size_t>(u.rows()));
  for (Eigen::Index k = 0; k < u.rows(); ++k) {
    double a = std::arg(es.eigenvalues()(k));
    if (a < 0.0) a += 2.0 * M_PI;
    phases.push_back(a);
  }
  std::sort(phases.begin(), phases.end());
  return phases;
}

struct Histogram {
  std::vector<double> edges;   // n_bins + 1 boundaries
  std::vector<std::size_t> counts;
};

inline Histogram eigenphase_histogram(const NetworkGraph& g, const DisorderRealization& d,
                                      std::size_t bins) {
  if (bins < 1) throw ParamError("eigenphase_histogram: need >= 1 bin");
  Histogram h;
  h.edges.resize(bins + 1);
  for (std::size_t k = 0; k <= bins; ++k)
    h.edges[k] = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(bins);
  h.counts.assign(bins, 0);
  for (const double p : eigenphases(g, d)) {
    auto b = static_cast<std::size_t>(p / (2.0 * M_PI) * static_cast<double>(bins));
    if (b >= bins) b = bins - 1;
    ++h.counts[b];
  }
  return h;
}

/// Tr[G(out,in;1)† G(out,in;1)] on an open graph.
inline double point_conductance(const NetworkGraph& g, const DisorderRealization& d, int e_in,
                                int e_out) {
  const GreenBlock t = green(g, d, e_in, e_out, Complex{1.0, 0.0});
  return (t.entries.adjoint() * t.entries).trace().real();
}

/// Landauer conductance Tr t† t over the listed lead pairs at z = 1.
inline double landauer_conductance(const NetworkGraph& g, const DisorderRealization& d,
                                   const std::vector<int>& leads_in,
                                   const std::vector<int>& leads_out) {
  if (leads_in.empty() || leads_out.empty())
    throw ParamError("landauer_conductance: need at least one lead on each side");
  for (const int id : leads_in)
    if (g.edge(id).source) throw ParamError("landauer_conductance: not a lead-in edge");
  for (const int id : leads_out)
    if (g.edge(id).target) throw ParamError("landauer_conductance: not a lead-out edge");
  const ResolventSolver solver(g, d, Complex{1.0, 0.0});
  double total = 0.0;
  for (const int in : leads_in)
    for (const int out : leads_out) {
      const GreenBlock t = solver.block(in, out);
      total += (t.entries.adjoint() * t.entries).trace().real();
    }
  return total;
}

}  // namespace classc
