#include "kpm/kernels.hpp"

#include <omp.h>

#include <algorithm>

namespace kpm {

namespace {

// Flops charged per block row by the vector part of the augmented kernel:
// the axpy/scal/axpy/nrm2/dot chain it replaces.
constexpr std::uint64_t kRowFlopsAdd = 3 * kFlopsAdd + (kFlopsAdd + 1) / 2;
constexpr std::uint64_t kRowFlopsMul = 4 * kFlopsMul + (kFlopsMul + 1) / 2;

struct NullProbe {
  void matrix_entries(std::uint64_t) noexcept {}
  void gather(Index) noexcept {}
  void stream_read(std::uint64_t) noexcept {}
  void stream_write(std::uint64_t) noexcept {}
  void flops(std::uint64_t, std::uint64_t) noexcept {}
};

struct MeterProbe {
  TrafficMeter& m;
  void matrix_entries(std::uint64_t n) noexcept { m.matrix_entries(n); }
  void gather(Index row) { m.gather(row); }
  void stream_read(std::uint64_t n) noexcept { m.stream_read(n); }
  void stream_write(std::uint64_t n) noexcept { m.stream_write(n); }
  void flops(std::uint64_t a, std::uint64_t b) noexcept { m.flops(a, b); }
};

/// Operands of one sweep. Pointers are null in pattern-only replays.
struct Sweep {
  const Complex* v = nullptr;  // gathered input block
  Complex* w = nullptr;        // output (spmv) or in/out block (aug)
  int width = 1;
  double two_a = 0.0;
  double b = 0.0;
};

enum class Finish { store, augment };

// Row epilogue shared by the CRS and SELL sweeps.
template <Finish F, bool Compute, class Probe>
inline void finish_row(const Sweep& s, Index i, const Complex* acc, Complex* even, Complex* odd, Probe& p) {
  const int nr = s.width;
  if constexpr (F == Finish::store) {
    p.stream_write(nr);
    if constexpr (Compute) {
      Complex* yi = s.w + static_cast<std::size_t>(i) * nr;
      for (int r = 0; r < nr; ++r) yi[r] = acc[r];
    }
  } else {
    p.gather(i);
    p.stream_read(nr);
    p.stream_write(nr);
    p.flops(kRowFlopsAdd * nr, kRowFlopsMul * nr);
    if constexpr (Compute) {
      const Complex* vi = s.v + static_cast<std::size_t>(i) * nr;
      Complex* wi = s.w + static_cast<std::size_t>(i) * nr;
      for (int r = 0; r < nr; ++r) {
        const Complex shifted = acc[r] - s.b * vi[r];
        const Complex wn = s.two_a * shifted - wi[r];
        wi[r] = wn;
        even[r] += std::norm(vi[r]);
        odd[r] += std::conj(wn) * vi[r];
      }
    }
  }
}

template <Finish F, bool Compute, class Probe>
void sweep_crs(const SparseMatrix& h, const Sweep& s, Index begin, Index end, Complex* even, Complex* odd,
               Probe& p) {
  const auto rp = h.row_ptr();
  const auto cols = h.col_idx();
  const auto vals = h.values();
  const int nr = s.width;
  std::vector<Complex> acc(Compute ? nr : 0);
  for (Index i = begin; i < end; ++i) {
    if constexpr (Compute) std::fill(acc.begin(), acc.end(), Complex{});
    for (Offset k = rp[i]; k < rp[i + 1]; ++k) {
      const Index j = cols[k];
      p.matrix_entries(1);
      p.gather(j);
      p.flops(kFlopsAdd * nr, kFlopsMul * nr);
      if constexpr (Compute) {
        const Complex hv = vals[k];
        const Complex* vj = s.v + static_cast<std::size_t>(j) * nr;
        for (int r = 0; r < nr; ++r) acc[r] += hv * vj[r];
      }
    }
    finish_row<F, Compute>(s, i, acc.data(), even, odd, p);
  }
}

template <Finish F, bool Compute, class Probe>
void sweep_sell(const SparseMatrix& h, const Sweep& s, Index chunk_begin, Index chunk_end, Complex* even,
                Complex* odd, Probe& p) {
  const auto cptr = h.chunk_ptr();
  const auto clen = h.chunk_len();
  const auto perm = h.row_perm();
  const auto cols = h.col_idx();
  const auto vals = h.values();
  const Index c = h.chunk_height();
  const Index n = h.rows();
  const int nr = s.width;
  std::vector<Complex> acc(Compute ? static_cast<std::size_t>(c) * nr : 0);
  for (Index ch = chunk_begin; ch < chunk_end; ++ch) {
    if constexpr (Compute) std::fill(acc.begin(), acc.end(), Complex{});
    for (Index k = 0; k < clen[ch]; ++k) {
      const Offset base = cptr[ch] + static_cast<Offset>(k) * c;
      for (Index slot = 0; slot < c; ++slot) {
        const Index j = cols[base + slot];
        p.matrix_entries(1);
        p.gather(j);
        p.flops(kFlopsAdd * nr, kFlopsMul * nr);
        if constexpr (Compute) {
          const Complex hv = vals[base + slot];
          const Complex* vj = s.v + static_cast<std::size_t>(j) * nr;
          Complex* a = acc.data() + static_cast<std::size_t>(slot) * nr;
          for (int r = 0; r < nr; ++r) a[r] += hv * vj[r];
        }
      }
    }
    for (Index slot = 0; slot < c; ++slot) {
      const Index pos = ch * c + slot;
      if (pos >= n) break;
      finish_row<F, Compute>(s, perm[pos], acc.data() + static_cast<std::size_t>(slot) * (Compute ? nr : 0), even,
                             odd, p);
    }
  }
}

template <class Body>
void run_workers(const std::vector<Index>& bounds, Body&& body) {
  const int workers = static_cast<int>(bounds.size()) - 1;
  if (workers == 1) {
    body(0, bounds[0], bounds[1]);
    return;
  }
#pragma omp parallel num_threads(workers)
  {
    const int nth = omp_get_num_threads();
    for (int t = omp_get_thread_num(); t < workers; t += nth) body(t, bounds[t], bounds[t + 1]);
  }
}

std::vector<Index> work_bounds(const SparseMatrix& h, const ExecPolicy& exec, bool counted) {
  const ExecPolicy serial{};
  const ExecPolicy& e = counted ? serial : exec;
  return h.layout() == Layout::crs ? partition(h.rows(), e) : partition(h.num_chunks(), e);
}

template <Finish F>
PartialDots run_sweep(const SparseMatrix& h, const Sweep& s, const ExecPolicy& exec, TrafficMeter* meter) {
  const auto bounds = work_bounds(h, exec, meter != nullptr);
  const int workers = static_cast<int>(bounds.size()) - 1;
  PartialDots dots;
  dots.even.assign(workers, std::vector<Complex>(s.width));
  dots.odd.assign(workers, std::vector<Complex>(s.width));
  const bool crs = h.layout() == Layout::crs;

  if (meter) {
    meter->begin_call(h.cols(), s.width);
    MeterProbe p{*meter};
    if (crs) sweep_crs<F, true>(h, s, bounds[0], bounds[1], dots.even[0].data(), dots.odd[0].data(), p);
    else sweep_sell<F, true>(h, s, bounds[0], bounds[1], dots.even[0].data(), dots.odd[0].data(), p);
    return dots;
  }
  run_workers(bounds, [&](int t, Index begin, Index end) {
    NullProbe p;
    if (crs) sweep_crs<F, true>(h, s, begin, end, dots.even[t].data(), dots.odd[t].data(), p);
    else sweep_sell<F, true>(h, s, begin, end, dots.even[t].data(), dots.odd[t].data(), p);
  });
  return dots;
}

void check_operator(const SparseMatrix& h, const BlockVector& x, const BlockVector& y) {
  require(h.cols() == x.rows(), Errc::dimension_mismatch, "matrix columns do not match input rows");
  require(h.rows() == y.rows(), Errc::dimension_mismatch, "matrix rows do not match output rows");
  require(x.width() == y.width(), Errc::dimension_mismatch, "block widths differ");
  require(&x != &y, Errc::invalid_argument, "input and output blocks must not alias");
}

// Element-wise BLAS-1 sweep over rows with per-worker partial results.
template <class Body>
void run_rows(Index n, const ExecPolicy& exec, TrafficMeter* meter, Body&& body) {
  if (meter) {
    meter->begin_call(0, 1);
    body(0, Index{0}, n);
    return;
  }
  run_workers(partition(n, exec), body);
}

int worker_count(const ExecPolicy& exec, TrafficMeter* meter) { return meter ? 1 : exec.threads; }

}  // namespace

AugmentedResult PartialDots::reduce() const {
  AugmentedResult out;
  const std::size_t width = even.empty() ? 0 : even.front().size();
  out.eta_even.assign(width, Complex{});
  out.eta_odd.assign(width, Complex{});
  for (std::size_t t = 0; t < even.size(); ++t) {
    for (std::size_t r = 0; r < width; ++r) {
      out.eta_even[r] += even[t][r];
      out.eta_odd[r] += odd[t][r];
    }
  }
  return out;
}

void spmv(const SparseMatrix& h, const BlockVector& x, BlockVector& y, const ExecPolicy& exec, TrafficMeter* meter) {
  check_operator(h, x, y);
  Sweep s{x.data().data(), y.data().data(), x.width(), 0.0, 0.0};
  run_sweep<Finish::store>(h, s, exec, meter);
}

void axpy(BlockVector& y, Complex alpha, const BlockVector& x, const ExecPolicy& exec, TrafficMeter* meter) {
  require(x.same_shape(y), Errc::dimension_mismatch, "axpy operands differ in shape");
  const int nr = x.width();
  run_rows(x.rows(), exec, meter, [&](int, Index begin, Index end) {
    for (Index i = begin; i < end; ++i)
      for (int r = 0; r < nr; ++r) y(i, r) = y(i, r) + alpha * x(i, r);
  });
  if (meter) {
    const auto n = static_cast<std::uint64_t>(x.size());
    meter->stream_read(2 * n);
    meter->stream_write(n);
    meter->flops(n * kFlopsAdd, n * kFlopsMul);
  }
}

void scal(BlockVector& x, Complex alpha, const ExecPolicy& exec, TrafficMeter* meter) {
  const int nr = x.width();
  run_rows(x.rows(), exec, meter, [&](int, Index begin, Index end) {
    for (Index i = begin; i < end; ++i)
      for (int r = 0; r < nr; ++r) x(i, r) = alpha * x(i, r);
  });
  if (meter) {
    const auto n = static_cast<std::uint64_t>(x.size());
    meter->stream_read(n);
    meter->stream_write(n);
    meter->flops(0, n * kFlopsMul);
  }
}

std::vector<double> nrm2(const BlockVector& x, const ExecPolicy& exec, TrafficMeter* meter) {
  const int nr = x.width();
  std::vector<std::vector<double>> partial(worker_count(exec, meter), std::vector<double>(nr, 0.0));
  run_rows(x.rows(), exec, meter, [&](int t, Index begin, Index end) {
    auto& acc = partial[t];
    for (Index i = begin; i < end; ++i)
      for (int r = 0; r < nr; ++r) acc[r] += std::norm(x(i, r));
  });
  std::vector<double> out(nr, 0.0);
  for (const auto& p : partial)
    for (int r = 0; r < nr; ++r) out[r] += p[r];
  if (meter) {
    const auto n = static_cast<std::uint64_t>(x.size());
    meter->stream_read(n);
    meter->flops(n * ((kFlopsAdd + 1) / 2), n * ((kFlopsMul + 1) / 2));
  }
  return out;
}

std::vector<Complex> dot(const BlockVector& x, const BlockVector& y, const ExecPolicy& exec, TrafficMeter* meter) {
  require(x.same_shape(y), Errc::dimension_mismatch, "dot operands differ in shape");
  const int nr = x.width();
  std::vector<std::vector<Complex>> partial(worker_count(exec, meter), std::vector<Complex>(nr));
  run_rows(x.rows(), exec, meter, [&](int t, Index begin, Index end) {
    auto& acc = partial[t];
    for (Index i = begin; i < end; ++i)
      for (int r = 0; r < nr; ++r) acc[r] += std::conj(x(i, r)) * y(i, r);
  });
  std::vector<Complex> out(nr);
  for (const auto& p : partial)
    for (int r = 0; r < nr; ++r) out[r] += p[r];
  if (meter) {
    const auto n = static_cast<std::uint64_t>(x.size());
    meter->stream_read(2 * n);
    meter->flops(n * kFlopsAdd, n * kFlopsMul);
  }
  return out;
}

std::vector<Complex> column_dot(const BlockVector& x, const BlockVector& y, const ExecPolicy& exec) {
  return dot(x, y, exec, nullptr);
}

std::vector<double> column_nrm2(const BlockVector& x, const ExecPolicy& exec) { return nrm2(x, exec, nullptr); }

PartialDots aug_spmmv_partial(const SparseMatrix& h, double a, double b, const BlockVector& v, BlockVector& w,
                              const ExecPolicy& exec, TrafficMeter* meter) {
  require(h.rows() == h.cols(), Errc::dimension_mismatch, "augmented kernels need a square matrix");
  check_operator(h, v, w);
  Sweep s{v.data().data(), w.data().data(), v.width(), 2.0 * a, b};
  return run_sweep<Finish::augment>(h, s, exec, meter);
}

AugmentedResult aug_spmmv(const SparseMatrix& h, double a, double b, const BlockVector& v, BlockVector& w,
                          const ExecPolicy& exec, TrafficMeter* meter) {
  return aug_spmmv_partial(h, a, b, v, w, exec, meter).reduce();
}

AugmentedResult aug_spmv(const SparseMatrix& h, double a, double b, const BlockVector& v, BlockVector& w,
                         const ExecPolicy& exec, TrafficMeter* meter) {
  require(v.width() == 1 && w.width() == 1, Errc::dimension_mismatch, "aug_spmv works on single vectors");
  return aug_spmmv(h, a, b, v, w, exec, meter);
}

TrafficMeter run_counted(const std::function<void(TrafficMeter&)>& call, CountOptions options) {
  TrafficMeter meter(options);
  call(meter);
  return meter;
}

void replay_traffic(const SparseMatrix& h, KernelKind kind, int width, TrafficMeter& meter) {
  require(width >= 1, Errc::invalid_argument, "block width must be >= 1");
  Sweep s{nullptr, nullptr, width, 0.0, 0.0};
  meter.begin_call(h.cols(), width);
  MeterProbe p{meter};
  const bool crs = h.layout() == Layout::crs;
  const Index end = crs ? h.rows() : h.num_chunks();
  if (kind == KernelKind::spmv) {
    if (crs) sweep_crs<Finish::store, false>(h, s, 0, end, nullptr, nullptr, p);
    else sweep_sell<Finish::store, false>(h, s, 0, end, nullptr, nullptr, p);
  } else {
    if (crs) sweep_crs<Finish::augment, false>(h, s, 0, end, nullptr, nullptr, p);
    else sweep_sell<Finish::augment, false>(h, s, 0, end, nullptr, nullptr, p);
  }
}

}  // namespace kpm
