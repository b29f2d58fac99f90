#include "kpm/bench.hpp"

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace kpm {

void BenchSpec::validate() const {
  require(reps >= 3, Errc::invalid_argument, "benchmarks need at least 3 repetitions");
  require(vectors >= 1, Errc::invalid_argument, "R must be >= 1");
  require(moments >= 2 && moments % 2 == 0, Errc::invalid_argument, "M must be even and >= 2");
  exec.validate();
}

namespace {

KernelKind sweep_kind(Stage stage) { return stage == Stage::naive ? KernelKind::spmv : KernelKind::aug_spmmv; }
int sweep_width(Stage stage, int vectors) { return stage == Stage::aug_spmmv ? vectors : 1; }

/// Extra input-vector bytes of one sweep under the simulated LLC.
double extra_bytes_per_sweep(const SparseMatrix& h, Stage stage, int vectors, std::uint64_t llc_bytes) {
  CountOptions opt;
  opt.mode = CountOptions::Mode::llc;
  opt.llc_bytes = llc_bytes;
  TrafficMeter meter(opt);
  replay_traffic(h, sweep_kind(stage), sweep_width(stage, vectors), meter);
  return static_cast<double>(meter.measured().total_bytes()) - static_cast<double>(meter.ideal().total_bytes());
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size() / 2;
  return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

template <class Fn>
std::vector<double> time_runs(int reps, Fn&& fn) {
  fn();  // warm-up
  std::vector<double> samples;
  samples.reserve(reps);
  for (int k = 0; k < reps; ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    samples.push_back(std::chrono::duration<double>(t1 - t0).count());
  }
  return samples;
}

ProblemSpec problem_of(const SparseMatrix& h, int vectors, int moments) {
  return {static_cast<std::uint64_t>(h.rows()), static_cast<std::uint64_t>(h.stored()), vectors, moments};
}

}  // namespace

double simulated_omega(const SparseMatrix& h, Stage stage, int vectors, int moments, std::uint64_t llc_bytes) {
  const ProblemSpec p = problem_of(h, vectors, moments);
  const double ideal = v_kpm(stage, p);
  const double sweeps = stage == Stage::aug_spmmv ? moments / 2.0 : vectors * moments / 2.0;
  return (ideal + sweeps * extra_bytes_per_sweep(h, stage, vectors, llc_bytes)) / ideal;
}

BenchResult bench_kernel(const SparseMatrix& h, const SpectralBounds& bounds, const BenchSpec& spec) {
  spec.validate();
  require(h.rows() == h.cols(), Errc::dimension_mismatch, "benchmarks need a square matrix");
  const ProblemSpec p = problem_of(h, spec.vectors, spec.moments);

  BenchResult res;
  res.stage = spec.stage;
  res.n = p.n;
  res.nnz = static_cast<std::uint64_t>(h.nnz());
  res.vectors = spec.vectors;
  res.moments = spec.moments;
  res.threads = spec.exec.threads;
  res.reps = spec.reps;
  res.seed = spec.seed;

  double min_bytes = 0.0;
  if (spec.mode == BenchMode::solve) {
    res.kernel = "kpm";
    KpmConfig cfg;
    cfg.moments = spec.moments;
    cfg.vectors = spec.vectors;
    cfg.seed = spec.seed;
    cfg.stage = spec.stage;
    cfg.bounds = bounds;
    cfg.exec = spec.exec;
    res.samples = time_runs(spec.reps, [&] { run_kpm(h, cfg); });
    res.flops = kpm_flops(p);
    min_bytes = v_kpm(spec.stage, p);
  } else {
    const KernelFunction f = spec.stage == Stage::naive      ? KernelFunction::spmv
                             : spec.stage == Stage::aug_spmv ? KernelFunction::aug_spmv
                                                             : KernelFunction::aug_spmmv;
    res.kernel = to_string(f);
    const int width = sweep_width(spec.stage, spec.vectors);
    const int calls = spec.stage == Stage::aug_spmmv ? 1 : spec.vectors;
    BlockVector v = random_block_vector(h.rows(), width, spec.seed);
    BlockVector w(h.rows(), width);
    res.samples = time_runs(spec.reps, [&] {
      for (int c = 0; c < calls; ++c) {
        if (f == KernelFunction::spmv) spmv(h, v, w, spec.exec);
        else aug_spmmv(h, 0.5 * bounds.a, bounds.b, v, w, spec.exec);
      }
    });
    const FunctionCost cost = table1_cost(f, p);
    res.flops = cost.flops_per_call * calls;
    min_bytes = cost.bytes_per_call * calls;
  }

  if (spec.llc_bytes > 0) {
    const double sweeps = spec.mode == BenchMode::solve
                              ? (spec.stage == Stage::aug_spmmv ? spec.moments / 2.0 : spec.vectors * spec.moments / 2.0)
                              : (spec.stage == Stage::aug_spmmv ? 1.0 : spec.vectors);
    res.omega = (min_bytes + sweeps * extra_bytes_per_sweep(h, spec.stage, spec.vectors, spec.llc_bytes)) / min_bytes;
  }
  res.bytes = res.omega * min_bytes;
  res.time_s = median(res.samples);
  res.gflops = res.flops / res.time_s * 1e-9;
  res.bw_gbs = res.bytes / res.time_s * 1e-9;
  return res;
}

std::string sweep_row(const BenchResult& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%s,%s,%llu,%llu,%d,%d,%d,%.9g,%.6g,%.6g,%.6g", r.kernel.c_str(), to_string(r.stage),
                static_cast<unsigned long long>(r.n), static_cast<unsigned long long>(r.nnz), r.vectors, r.moments,
                r.threads, r.time_s, r.gflops, r.bw_gbs, r.omega);
  return buf;
}

std::vector<BenchResult> sweep(const SparseMatrix& h, const SpectralBounds& bounds, const BenchSpec& base,
                               const std::vector<int>& widths, const std::vector<int>& threads, std::ostream& csv,
                               bool overlay_model) {
  require(!widths.empty() && !threads.empty(), Errc::invalid_argument, "sweep needs at least one R and thread count");
  csv << kSweepHeader << (overlay_model ? ",b_min" : "") << '\n';
  std::vector<BenchResult> out;
  for (int r : widths) {
    for (int t : threads) {
      BenchSpec spec = base;
      spec.vectors = r;
      spec.exec.threads = t;
      if (static_cast<int>(spec.exec.weights.size()) != t) spec.exec.weights.clear();
      BenchResult res = bench_kernel(h, bounds, spec);
      csv << sweep_row(res);
      if (overlay_model) {
        const ProblemSpec p{res.n, res.nnz, r, res.moments};
        char buf[64];
        std::snprintf(buf, sizeof buf, ",%.17g", code_balance(p).b_min);
        csv << buf;
      }
      csv << '\n';
      out.push_back(std::move(res));
    }
  }
  csv.flush();
  return out;
}

std::uint64_t estimate_footprint(const Domain& domain, Stage stage, int vectors) {
  domain.validate();
  const std::uint64_t n = static_cast<std::uint64_t>(domain.dimension());
  const std::uint64_t nnz = 13 * n + 4 * n;  // stencil entries plus headroom for the diagonal
  const std::uint64_t matrix = nnz * (kValueBytes + kIndexBytes) + (n + 1) * sizeof(Offset);
  const std::uint64_t blocks = stage == Stage::aug_spmmv ? 2ull * vectors : (stage == Stage::naive ? 3ull : 2ull);
  return matrix + blocks * n * kValueBytes;
}

void check_footprint(const Domain& domain, Stage stage, int vectors) {
  const std::uint64_t need = estimate_footprint(domain, stage, vectors);
  const long pages = sysconf(_SC_AVPHYS_PAGES);
  const long page = sysconf(_SC_PAGESIZE);
  if (pages <= 0 || page <= 0) return;
  const std::uint64_t avail = static_cast<std::uint64_t>(pages) * static_cast<std::uint64_t>(page);
  if (need > avail)
    fail(Errc::sizing, "problem needs about " + std::to_string(need >> 20) + " MiB but only " +
                           std::to_string(avail >> 20) + " MiB are available");
}

Domain llc_sized_domain(std::uint64_t llc_bytes, int vectors) {
  require(vectors >= 1, Errc::invalid_argument, "R must be >= 1");
  // Per site: 52 entries of value+index, four row pointers, four rows of V and W.
  const double per_site = 52.0 * (kValueBytes + kIndexBytes) + 4.0 * sizeof(Offset) + 8.0 * vectors * kValueBytes;
  const double sites = 0.8 * static_cast<double>(llc_bytes) / per_site;
  const int edge = std::max(3, static_cast<int>(std::floor(std::cbrt(sites))));
  Domain d;
  d.nx = d.ny = d.nz = edge;
  return d;
}

bool VerifyReport::passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const VerifyCheck& c) { return c.passed; });
}

}  // namespace kpm
