#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "classc/evolution.hpp"
#include "classc/green.hpp"
#include "classc/rng.hpp"
#include "classc/stats.hpp"
#include "classc/types.hpp"

namespace classc {

/// Deterministic block map-reduce: items [0,n) are processed in fixed-size
/// blocks; workers race over the blocks but partial results are merged in
/// block order, so the outcome is independent of the worker count and of
/// scheduling.
template <typename BlockResult>
void parallel_blocks(std::size_t n, std::size_t block_size, int workers,
                     const std::function<BlockResult(std::size_t, std::size_t)>& block_fn,
                     const std::function<void(const BlockResult&)>& merge_in_order) {
  if (n == 0) return;
  if (block_size == 0) block_size = 1;
  const std::size_t n_blocks = (n + block_size - 1) / block_size;
  std::vector<BlockResult> results(n_blocks);
  if (workers < 1) workers = 1;
  const std::size_t n_workers =
      std::min<std::size_t>(static_cast<std::size_t>(workers), n_blocks);
  if (n_workers <= 1) {
    for (std::size_t b = 0; b < n_blocks; ++b)
      results[b] = block_fn(b * block_size, std::min(n, (b + 1) * block_size));
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    pool.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w)
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t b = next.fetch_add(1);
          if (b >= n_blocks) return;
          try {
            results[b] = block_fn(b * block_size, std::min(n, (b + 1) * block_size));
          } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!error) error = std::current_exception();
            return;
          }
        }
      });
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
  }
  for (const BlockResult& r : results) merge_in_order(r);
}

constexpr std::size_t kMcBlockSize = 1024;  // fixed: results never depend on workers

struct MeanGreenResult {
  Mat2c mean = Mat2c::Zero();
  Eigen::Matrix2d stderrors = Eigen::Matrix2d::Zero();  // modulus-level s.e. per entry
  Complex mean_det{0.0, 0.0};
  double stderr_det = 0.0;
  Complex mean_trace{0.0, 0.0};
  double stderr_trace = 0.0;
  std::size_t samples = 0;
  std::size_t skipped = 0;
};

namespace detail {

struct GreenBlockSums {
  Mat2c sum = Mat2c::Zero();
  Eigen::Matrix2d sum_abs2 = Eigen::Matrix2d::Zero();
  Complex det_sum{0.0, 0.0};
  double det_abs2 = 0.0;
  Complex trace_sum{0.0, 0.0};
  double trace_abs2 = 0.0;
  std::size_t n = 0;
  std::size_t skipped = 0;
};

}  // namespace detail

/// Quenched mean of the Green block over i.i.d. Haar disorder: sample k uses
/// the derived stream rng.split(k). Near-singular draws are skipped and
/// counted; more than 1% of skips fails the run.
inline MeanGreenResult mean_green_mc(const NetworkGraph& g, int e1, int e2, Complex z,
                                     std::size_t n_samples, const RngStream& rng,
                                     int workers = 1) {
  if (n_samples < 2) throw ParamError("mean_green_mc: need at least 2 samples");
  detail::GreenBlockSums total;
  parallel_blocks<detail::GreenBlockSums>(
      n_samples, kMcBlockSize, workers,
      [&](std::size_t begin, std::size_t end) {
        detail::GreenBlockSums acc;
        for (std::size_t k = begin; k < end; ++k) {
          RngStream s = rng.split(k);
          const DisorderRealization d = sample_disorder(g, s);
          try {
            const GreenBlock gb = green(g, d, e1, e2, z);
            acc.sum += gb.entries;
            acc.sum_abs2 += gb.entries.cwiseAbs2();
            const Complex det = gb.entries.determinant();
            acc.det_sum += det;
            acc.det_abs2 += std::norm(det);
            const Complex tr = gb.entries.trace();
            acc.trace_sum += tr;
            acc.trace_abs2 += std::norm(tr);
            ++acc.n;
          } catch (const NumericalError&) {
            ++acc.skipped;
          }
        }
        return acc;
      },
      [&](const detail::GreenBlockSums& acc) {
        total.sum += acc.sum;
        total.sum_abs2 += acc.sum_abs2;
        total.det_sum += acc.det_sum;
        total.det_abs2 += acc.det_abs2;
        total.trace_sum += acc.trace_sum;
        total.trace_abs2 += acc.trace_abs2;
        total.n += acc.n;
        total.skipped += acc.skipped;
      });
  if (total.skipped * 100 > n_samples)
    throw NumericalError("mean_green_mc: more than 1% of samples skipped",
                         static_cast<double>(total.skipped));
  if (total.n < 2) throw NumericalError("mean_green_mc: too few successful samples");
  MeanGreenResult r;
  r.samples = total.n;
  r.skipped = total.skipped;
  const double n = static_cast<double>(total.n);
  r.mean = total.sum / n;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      double var = (total.sum_abs2(a, b) - n * std::norm(r.mean(a, b))) / (n - 1.0);
      if (var < 0.0) var = 0.0;
      r.stderrors(a, b) = std::sqrt(var / n);
    }
  r.mean_det = total.det_sum / n;
  double dvar = (total.det_abs2 - n * std::norm(r.mean_det)) / (n - 1.0);
  if (dvar < 0.0) dvar = 0.0;
  r.stderr_det = std::sqrt(dvar / n);
  r.mean_trace = total.trace_sum / n;
  double tvar = (total.trace_abs2 - n * std::norm(r.mean_trace)) / (n - 1.0);
  if (tvar < 0.0) tvar = 0.0;
  r.stderr_trace = std::sqrt(tvar / n);
  return r;
}

struct MeanValueResult {
  double mean = 0.0;
  double stderror = 0.0;
  std::size_t samples = 0;
  std::size_t skipped = 0;
};

/// Quenched mean of the point conductance Tr[t†t] between a lead pair.
inline MeanValueResult mean_conductance_mc(const NetworkGraph& g, int e_in, int e_out,
                                           std::size_t n_samples, const RngStream& rng,
                                           int workers = 1) {
  if (n_samples < 2) throw ParamError("mean_conductance_mc: need at least 2 samples");
  struct Sums {
    RunningStat stat;
    std::size_t skipped = 0;
  } total;
  parallel_blocks<Sums>(
      n_samples, kMcBlockSize, workers,
      [&](std::size_t begin, std::size_t end) {
        Sums acc;
        for (std::size_t k = begin; k < end; ++k) {
          RngStream s = rng.split(k);
          const DisorderRealization d = sample_disorder(g, s);
          try {
            acc.stat.add(point_conductance(g, d, e_in, e_out));
          } catch (const NumericalError&) {
            ++acc.skipped;
          }
        }
        return acc;
      },
      [&](const Sums& acc) {
        total.stat.merge(acc.stat);
        total.skipped += acc.skipped;
      });
  if (total.skipped * 100 > n_samples)
    throw NumericalError("mean_conductance_mc: more than 1% of samples skipped",
                         static_cast<double>(total.skipped));
  if (total.stat.n < 2) throw NumericalError("mean_conductance_mc: too few successful samples");
  return MeanValueResult{total.stat.mean(), total.stat.stderror(), total.stat.n, total.skipped};
}

}  // namespace classc
