#pragma once

#include <functional>
#include <vector>

#include "kpm/block_vector.hpp"
#include "kpm/sparse_matrix.hpp"
#include "kpm/traffic.hpp"

namespace kpm {

/// Dot products produced on the fly by the augmented kernels.
struct AugmentedResult {
  std::vector<Complex> eta_even;  // <v|v> per column
  std::vector<Complex> eta_odd;   // <w_new|v> per column
};

/// Per-worker partial dot products, [worker][column]. Summing over workers in
/// index order reproduces AugmentedResult exactly.
struct PartialDots {
  std::vector<std::vector<Complex>> even;
  std::vector<std::vector<Complex>> odd;

  AugmentedResult reduce() const;
};

// Every kernel takes an optional meter. With a meter the call runs serially
// and reports its logical traffic; without one it runs on exec.threads workers.

/// y = H x for a block of any width (SpMV for width 1, SpMMV otherwise).
void spmv(const SparseMatrix& h, const BlockVector& x, BlockVector& y, const ExecPolicy& exec = {},
          TrafficMeter* meter = nullptr);

/// y = y + alpha x
void axpy(BlockVector& y, Complex alpha, const BlockVector& x, const ExecPolicy& exec = {},
          TrafficMeter* meter = nullptr);
/// x = alpha x
void scal(BlockVector& x, Complex alpha, const ExecPolicy& exec = {}, TrafficMeter* meter = nullptr);
/// Column-wise <x|x> (counted as nrm2).
std::vector<double> nrm2(const BlockVector& x, const ExecPolicy& exec = {}, TrafficMeter* meter = nullptr);
/// Column-wise <x|y> (counted as dot).
std::vector<Complex> dot(const BlockVector& x, const BlockVector& y, const ExecPolicy& exec = {},
                         TrafficMeter* meter = nullptr);

/// w <- 2a (H - b 1) v - w together with <v|v> and <w_new|v>, in a single pass
/// over H, v and w. Requires width-1 blocks.
AugmentedResult aug_spmv(const SparseMatrix& h, double a, double b, const BlockVector& v, BlockVector& w,
                         const ExecPolicy& exec = {}, TrafficMeter* meter = nullptr);

/// Block version of aug_spmv: one sweep over H for all R columns; the inner
/// loop runs over columns with unit stride. V and W must not alias.
AugmentedResult aug_spmmv(const SparseMatrix& h, double a, double b, const BlockVector& v, BlockVector& w,
                          const ExecPolicy& exec = {}, TrafficMeter* meter = nullptr);

/// Same as aug_spmmv but leaves the cross-worker reduction to the caller.
PartialDots aug_spmmv_partial(const SparseMatrix& h, double a, double b, const BlockVector& v, BlockVector& w,
                              const ExecPolicy& exec = {}, TrafficMeter* meter = nullptr);

/// Runs `call` with a fresh meter and returns it.
TrafficMeter run_counted(const std::function<void(TrafficMeter&)>& call, CountOptions options = {});

enum class KernelKind { spmv, aug_spmmv };

/// Replays the memory access pattern of one counted kernel call without
/// touching vector data, so large block widths can be analysed without
/// allocating the blocks. Produces the same meter state as a counted call.
void replay_traffic(const SparseMatrix& h, KernelKind kind, int width, TrafficMeter& meter);

}  // namespace kpm
