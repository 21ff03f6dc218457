#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "classc/fixtures.hpp"
#include "classc/history_walk.hpp"
#include "classc/l_lattice.hpp"
#include "classc/montecarlo.hpp"
#include "classc/stats.hpp"
#include "classc/trail_enum.hpp"
#include "classc/trails.hpp"

namespace classc {

struct LoopStats {
  std::size_t sample_count = 0;
  std::map<std::size_t, std::size_t> length_histogram;
  double mean_length = 0.0;
  double mean_length_stderr = 0.0;
  std::vector<std::size_t> lengths;         // per loop, walk order
  std::vector<double> gyration_radii;       // per loop, lattice units
};

/// Hull-walk loop statistics on the torus L-lattice with left-turn
/// probability p = sin^2(theta). Walk k uses substream split(k); the start
/// edge is drawn uniformly from the same substream.
inline LoopStats hull_loop_statistics(int length, double p, std::size_t n_walks,
                                      const RngStream& rng) {
  const LLattice lat = build_l_lattice_full(length, theta_for_left_turn_probability(p),
                                            Boundary::Torus);
  LoopStats stats;
  stats.lengths.reserve(n_walks);
  stats.gyration_radii.reserve(n_walks);
  RunningStat mean;
  for (std::size_t k = 0; k < n_walks; ++k) {
    RngStream s = rng.split(k);
    const int start = static_cast<int>(s.uniform_index(lat.graph.num_edges()));
    const WalkResult w = sample_history_walk(lat.graph, start, s);
    // unwrapped vertex positions accumulated from per-edge unit steps
    double x = 0.0, y = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0;
    for (const int e : w.trail.edges) {
      const auto [dx, dy] = lat.edge_step[static_cast<std::size_t>(e)];
      x += dx;
      y += dy;
      sx += x;
      sy += y;
      sxx += x * x;
      syy += y * y;
    }
    const double n = static_cast<double>(w.trail.edges.size());
    const double rg2 = (sxx + syy) / n - (sx / n) * (sx / n) - (sy / n) * (sy / n);
    stats.lengths.push_back(w.trail.edges.size());
    stats.gyration_radii.push_back(std::sqrt(std::max(0.0, rg2)));
    ++stats.length_histogram[w.trail.edges.size()];
    mean.add(n);
  }
  stats.sample_count = n_walks;
  stats.mean_length = mean.mean();
  stats.mean_length_stderr = mean.stderror();
  return stats;
}

struct FractalDimensionEstimate {
  double dimension = 0.0;
  double stderror = 0.0;
  std::size_t loops_in_window = 0;
};

/// Hull-dimension estimate at p = 1/2: slope of log(length) on log(gyration
/// radius) over loops with radius in [4, L/8].
inline FractalDimensionEstimate fractal_dimension_estimate(int length, std::size_t n_walks,
                                                           const RngStream& rng) {
  const LoopStats stats = hull_loop_statistics(length, 0.5, n_walks, rng);
  std::vector<double> lx, ly;
  const double r_min = 4.0, r_max = static_cast<double>(length) / 8.0;
  for (std::size_t k = 0; k < stats.lengths.size(); ++k) {
    const double r = stats.gyration_radii[k];
    if (r < r_min || r > r_max) continue;
    lx.push_back(std::log(r));
    ly.push_back(std::log(static_cast<double>(stats.lengths[k])));
  }
  if (lx.size() < 100)
    throw StatsError("fractal_dimension_estimate: only " + std::to_string(lx.size()) +
                     " loops in the radius window");
  const LineFit fit = fit_line(lx, ly);
  return FractalDimensionEstimate{fit.slope, fit.slope_stderr, lx.size()};
}

struct WeightEquivalenceReport {
  double max_first_passage_defect = 0.0;   // |w - S_ij^2| over the node rules
  double max_second_passage_defect = 0.0;  // |w - 1| on forced passages
  double chain_relative_error = 0.0;       // walk probability vs Omega product
  std::size_t walk_steps = 0;
  bool passed = false;
};

/// Confirms that the general conditional-weight machinery reproduces the
/// L-lattice walk rules (first passage sin^2/cos^2, second passage forced) and
/// that a sampled walk's probability telescopes to its trail Omega product.
inline WeightEquivalenceReport weight_equivalence_check(double theta, std::uint64_t seed = 7) {
  WeightEquivalenceReport rep;
  const MatX s = rotation2(theta);
  const double c2 = std::cos(theta) * std::cos(theta);
  const double s2 = std::sin(theta) * std::sin(theta);
  // first passages: (j=1): right turn cos^2 to out-1, left sin^2 to out-2;
  // (j=2): left sin^2 to out-1, right cos^2 to out-2
  const double expects[2][2] = {{c2, s2}, {s2, c2}};
  for (int j = 1; j <= 2; ++j)
    for (int i = 1; i <= 2; ++i) {
      const double w = conditional_weight(s, {}, j, i);
      rep.max_first_passage_defect =
          std::max(rep.max_first_passage_defect, std::abs(w - expects[j - 1][i - 1]));
      const double sq = s(i - 1, j - 1) * s(i - 1, j - 1);
      rep.max_first_passage_defect = std::max(rep.max_first_passage_defect, std::abs(w - sq));
    }
  // second passages are forced with weight 1 whenever the prefix is regular
  for (int j1 = 1; j1 <= 2; ++j1)
    for (int i1 = 1; i1 <= 2; ++i1) {
      if (s(i1 - 1, j1 - 1) == 0.0) continue;
      const int j2 = j1 == 1 ? 2 : 1, i2 = i1 == 1 ? 2 : 1;
      const double w = conditional_weight(s, {{j1, i1}}, j2, i2);
      rep.max_second_passage_defect = std::max(rep.max_second_passage_defect, std::abs(w - 1.0));
    }
  // a long sampled walk: step probabilities must telescope to the Omega product
  const LLattice lat = build_l_lattice_full(8, theta, Boundary::Torus);
  RngStream rng(seed);
  WalkResult walk;
  for (std::size_t attempt = 0;; ++attempt) {
    RngStream sub = rng.split(attempt);
    walk = sample_history_walk(lat.graph, static_cast<int>(sub.uniform_index(lat.graph.num_edges())),
                               sub);
    if (walk.trail.edges.size() >= 16 || attempt > 200) break;
  }
  rep.walk_steps = walk.trail.edges.size();
  std::map<int, std::vector<std::pair<int, int>>> histories;
  for (std::size_t k = 0; k < walk.trail.edges.size(); ++k) {
    const Edge& e = lat.graph.edge(walk.trail.edges[k]);
    const Edge& next =
        lat.graph.edge(walk.trail.edges[(k + 1) % walk.trail.edges.size()]);
    histories[e.target->node].emplace_back(e.target->channel, next.source->channel);
  }
  double omega_product = 1.0;
  for (const auto& [node_id, visits] : histories)
    omega_product *= omega(lat.graph.node(node_id).scattering, visits).omega;
  rep.chain_relative_error = std::abs(walk.probability - omega_product) /
                             std::max(std::abs(omega_product), 1e-300);
  rep.passed = rep.max_first_passage_defect <= 1e-12 &&
               rep.max_second_passage_defect <= 1e-12 && rep.chain_relative_error <= 1e-12;
  return rep;
}

struct ScanRow {
  double p = 0.0;
  double g_quantum = 0.0;
  double err_quantum = 0.0;
  double g_classical = 0.0;
  double err_classical = 0.0;
  std::string classical_method;  // "enumeration" or "walk"
  bool consistent = false;       // within 3 combined standard errors
};

/// Quantum vs classical mean point conductance across left-turn probabilities
/// on the open L-lattice, leads at the middle of the left and right boundary.
/// Enumeration is exact on small lattices; above the ceiling the classical
/// side falls back to open-walk sampling (flagged in classical_method).
inline std::vector<ScanRow> conductance_vs_p_scan(int length, const std::vector<double>& p_list,
                                                  std::size_t n_samples, const RngStream& rng,
                                                  int workers = 1,
                                                  std::size_t ceiling = 200000) {
  std::vector<ScanRow> rows;
  for (std::size_t idx = 0; idx < p_list.size(); ++idx) {
    const double p = p_list[idx];
    const LLattice lat =
        build_l_lattice_full(length, theta_for_left_turn_probability(p), Boundary::Open);
    const auto [e_in, e_out] = scan_lead_pair(lat);
    ScanRow row;
    row.p = p;
    const RngStream sub = rng.split(idx);
    const MeanValueResult q =
        mean_conductance_mc(lat.graph, e_in, e_out, n_samples, sub.split(0), workers);
    row.g_quantum = q.mean;
    row.err_quantum = q.stderror;
    bool enumerated = length <= 6;
    if (enumerated) {
      try {
        row.g_classical = classical_mean_conductance(lat.graph, e_in, e_out, ceiling);
        row.err_classical = 0.0;
        row.classical_method = "enumeration";
      } catch (const ResourceError&) {
        enumerated = false;
      }
    }
    if (!enumerated) {
      RngStream walk_rng = sub.split(1);
      std::size_t hits = 0;
      for (std::size_t k = 0; k < n_samples; ++k) {
        RngStream ws = walk_rng.split(k);
        if (sample_history_walk_open(lat.graph, e_in, ws).exit_edge == e_out) ++hits;
      }
      const double frac = static_cast<double>(hits) / static_cast<double>(n_samples);
      row.g_classical = 2.0 * frac;
      row.err_classical =
          2.0 * std::sqrt(frac * (1.0 - frac) / static_cast<double>(n_samples));
      row.classical_method = "walk";
    }
    const double combined =
        std::sqrt(row.err_quantum * row.err_quantum + row.err_classical * row.err_classical);
    row.consistent = std::abs(row.g_quantum - row.g_classical) <= 3.0 * std::max(combined, 1e-12);
    rows.push_back(row);
  }
  return rows;
}

/// loop_stats.csv body: one line per loop.
inline std::string loop_stats_to_csv(const LoopStats& stats) {
  std::string out = "length,radius\n";
  char buf[64];
  for (std::size_t k = 0; k < stats.lengths.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", stats.lengths[k], stats.gyration_radii[k]);
    out += buf;
  }
  return out;
}

/// scan.csv body.
inline std::string scan_to_csv(const std::vector<ScanRow>& rows) {
  std::string out = "p,g_quantum,err_q,g_classical,err_c\n";
  char buf[160];
  for (const ScanRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g\n", r.p, r.g_quantum,
                  r.err_quantum, r.g_classical, r.err_classical);
    out += buf;
  }
  return out;
}

}  // namespace classc
