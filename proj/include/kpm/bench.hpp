#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "kpm/perfmodel.hpp"

namespace kpm {

enum class BenchMode {
  solve,   // full KPM solve of the given stage
  kernel,  // one sweep of the stage's matrix kernel
};

struct BenchSpec {
  Stage stage = Stage::aug_spmmv;
  BenchMode mode = BenchMode::solve;
  int vectors = 1;
  int moments = 100;
  ExecPolicy exec;
  int reps = 3;
  std::uint64_t seed = 1;
  /// Simulated LLC size for the omega column; 0 skips the simulation.
  std::uint64_t llc_bytes = 25ull << 20;

  void validate() const;
};

struct BenchResult {
  std::string kernel;
  Stage stage = Stage::aug_spmmv;
  std::uint64_t n = 0;
  std::uint64_t nnz = 0;
  int vectors = 1;
  int moments = 0;
  int threads = 1;
  double time_s = 0.0;  // median over reps, warm-up excluded
  double flops = 0.0;   // algorithmic flops of one timed run
  double bytes = 0.0;   // omega * minimum traffic of one timed run
  double gflops = 0.0;
  double bw_gbs = 0.0;
  double omega = 1.0;
  int reps = 0;
  std::uint64_t seed = 0;
  std::vector<double> samples;
};

/// Times `spec.reps` runs after one discarded warm-up run.
BenchResult bench_kernel(const SparseMatrix& h, const SpectralBounds& bounds, const BenchSpec& spec);

/// Input-vector traffic inflation of one sweep of the stage's matrix kernel
/// under a simulated LRU LLC, expressed for the whole stage traffic.
double simulated_omega(const SparseMatrix& h, Stage stage, int vectors, int moments, std::uint64_t llc_bytes);

/// Exact CSV header of sweep output.
inline constexpr const char* kSweepHeader = "kernel,stage,N,nnz,R,M,threads,time_s,gflops,bw_gbs,omega";

std::string sweep_row(const BenchResult& r);

/// Benchmarks the cross product of widths and thread counts (R outer,
/// threads inner) and writes one CSV row per run. With overlay_model a
/// trailing b_min column carries the closed-form code balance.
std::vector<BenchResult> sweep(const SparseMatrix& h, const SpectralBounds& bounds, const BenchSpec& base,
                               const std::vector<int>& widths, const std::vector<int>& threads, std::ostream& csv,
                               bool overlay_model = false);

/// Rough resident size of a solve on `domain`; throws Errc::sizing when it
/// exceeds the memory currently available.
std::uint64_t estimate_footprint(const Domain& domain, Stage stage, int vectors);
void check_footprint(const Domain& domain, Stage stage, int vectors);

/// Cubic domain whose working set (matrix + two width-R blocks) fits in
/// llc_bytes, for measuring the cache-resident ceiling P*_LLC.
Domain llc_sized_domain(std::uint64_t llc_bytes, int vectors);

struct VerifyCheck {
  std::string suite;
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool passed() const noexcept;
};

/// Cross-module oracle checks. suite is one of stages, oracle-dos, traffic,
/// formats or all.
VerifyReport verify(const std::string& suite, const ExecPolicy& exec = {}, std::uint64_t seed = 1);

}  // namespace kpm
