// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// hard failure. Criterion 8 is informational and never fails the run.

#include <Eigen/Dense>

#include <sys/wait.h>

#include <algorithm>
#include <cstdarg>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "kpm/bench.hpp"

#ifndef KPMTOOL_PATH
#error "KPMTOOL_PATH must point at the kpmtool binary"
#endif

using namespace kpm;
namespace fs = std::filesystem;

namespace {

int hard_failures = 0;

void report(int id, bool passed, const std::string& what, const std::string& evidence, bool informational = false) {
  std::printf("%s criterion %d: %s%s | %s\n", passed ? "PASS" : "FAIL", id, what.c_str(),
              informational ? " (informational)" : "", evidence.c_str());
  std::fflush(stdout);
  if (!passed && !informational) ++hard_failures;
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[1024];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

Domain box(int nx, int ny, int nz, bool periodic_z = false) {
  Domain d;
  d.nx = nx;
  d.ny = ny;
  d.nz = nz;
  d.periodic_z = periodic_z;
  return d;
}

Eigen::MatrixXcd dense(const SparseMatrix& h) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(h.rows(), h.cols());
  h.for_each_entry([&](Index i, Index j, Complex v) { m(i, j) += v; });
  return m;
}

fs::path work_dir() {
  const fs::path d = fs::temp_directory_path() / "kpm_acceptance";
  fs::create_directories(d);
  return d;
}

int tool(const std::string& args, const fs::path& stdout_file = {}) {
  std::string cmd = std::string("\"") + KPMTOOL_PATH + "\" " + args;
  if (!stdout_file.empty()) cmd += " > \"" + stdout_file.string() + "\"";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::vector<std::string>> csv_rows(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::istringstream ls(line);
    std::string item;
    while (std::getline(ls, item, ',')) f.push_back(item);
    rows.push_back(f);
  }
  return rows;
}

template <class Fn>
void guarded(int id, const std::string& what, Fn&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    report(id, false, what, std::string("exception: ") + e.what());
  }
}

// 1. B_min(1) and B_min(R -> inf) from the model subcommand.
void criterion1() {
  const fs::path out = work_dir() / "balance.csv";
  const int rc = tool("model --profile ivb --R 1..64 --out \"" + out.string() + "\"");
  const auto rows = csv_rows(out);
  if (rc != 0 || rows.size() != 65 || rows[0].size() < 3 || rows[0][1] != "b_min")
    return report(1, false, "code-balance closed form", fmt("model exited %d with %zu rows", rc, rows.size()));
  const double b1 = std::stod(rows[1][1]);
  const double limit = std::stod(rows[1][2]);
  bool monotone = true;
  double worst = 0.0;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const int r = std::stoi(rows[k][0]);
    // Oracle: [13/R * 20 + 48] / [13 * 8 + ceil(7)+ceil(27)] for complex double.
    worst = std::max(worst, std::abs(std::stod(rows[k][1]) - (13.0 / r * 20.0 + 48.0) / (13.0 * 8.0 + 34.0)));
    if (k > 1 && std::stod(rows[k][1]) >= std::stod(rows[k - 1][1])) monotone = false;
  }
  const bool ok = std::abs(b1 - 2.232) <= 0.005 && std::abs(limit - 0.3478) <= 0.0005 && monotone && worst < 1e-12;
  report(1, ok, "code-balance closed form",
         fmt("B_min(1)=%.5f B/F, B_min(inf)=%.5f B/F, max dev from oracle %.2g, monotone=%d", b1, limit, worst,
             monotone));
}

// 2. Perfect-cache counted bytes equal the minimum traffic formulas.
void criterion2() {
  const SparseMatrix h = build_hamiltonian(box(20, 20, 8));
  const SpectralBounds bounds = estimate_bounds(h);
  const double n = h.rows(), nnz = static_cast<double>(h.nnz());
  const int moments = 100;
  double worst = 0.0;
  std::string detail;
  for (Stage stage : {Stage::naive, Stage::aug_spmv, Stage::aug_spmmv}) {
    for (int r : {1, 4, 8}) {
      KpmConfig cfg;
      cfg.moments = moments;
      cfg.vectors = r;
      cfg.stage = stage;
      cfg.bounds = bounds;
      TrafficMeter meter;
      run_kpm(h, cfg, &meter);
      // Oracle: per-step chains with S_d = 16, S_i = 4.
      const double matrix = nnz * 20.0;
      double want = 0.0;
      if (stage == Stage::naive) want = r * moments / 2.0 * (matrix + 13.0 * n * 16.0);
      if (stage == Stage::aug_spmv) want = r * moments / 2.0 * (matrix + 3.0 * n * 16.0);
      if (stage == Stage::aug_spmmv) want = moments / 2.0 * (matrix + 3.0 * r * n * 16.0);
      const double dev = std::abs(static_cast<double>(meter.measured().total_bytes()) - want);
      worst = std::max(worst, dev);
      detail += fmt(" %s/R%d:%.0f", to_string(stage), r, dev);
    }
  }
  report(2, worst == 0.0, "traffic oracle equivalence on (20,20,8), M=100",
         fmt("N=%.0f, max deviation %.0f bytes;%s", n, worst, detail.c_str()));
}

// 3. eta agreement between the three stages.
void criterion3() {
  const SparseMatrix h = build_hamiltonian(box(8, 8, 8));
  KpmConfig cfg;
  cfg.moments = 200;
  cfg.vectors = 4;
  cfg.seed = 2024;
  cfg.bounds = estimate_bounds(h);
  std::vector<MomentSeries> runs;
  for (Stage s : {Stage::naive, Stage::aug_spmv, Stage::aug_spmmv}) {
    cfg.stage = s;
    runs.push_back(run_kpm(h, cfg));
  }
  double worst = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b)
      for (int r = 0; r < cfg.vectors; ++r)
        for (int m = 0; m < cfg.moments; ++m) {
          const Complex x = runs[a].eta[r][m], y = runs[b].eta[r][m];
          const double scale = std::max(std::abs(x), std::abs(y));
          if (scale > 0.0) worst = std::max(worst, std::abs(x - y) / scale);
        }
  report(3, worst <= 1e-12, "stage equivalence on (8,8,8), M=200, R=4",
         fmt("max relative eta difference %.3g (tolerance 1e-12)", worst));
}

// 4. Moments and binned DOS against a dense eigendecomposition.
void criterion4() {
  const SparseMatrix h = build_hamiltonian(box(4, 4, 4));
  const Index n = h.rows();
  const SpectralBounds bounds = estimate_bounds(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(dense(h));
  const Eigen::VectorXd lambda = eig.eigenvalues();

  KpmConfig cfg;
  cfg.moments = 200;
  cfg.vectors = 1;
  cfg.seed = 5;
  cfg.bounds = bounds;
  const MomentSeries small = run_kpm(h, cfg);
  const BlockVector v0 = random_block_vector(n, 1, cfg.seed);
  Eigen::VectorXcd nu(n);
  for (Index i = 0; i < n; ++i) nu(i) = v0(i, 0);
  const Eigen::VectorXd weight = (eig.eigenvectors().adjoint() * nu).cwiseAbs2();
  // Oracle: mu_m = sum_k |<k|nu>|^2 T_m(x_k) / <nu|nu> via the three-term recurrence.
  double moment_err = 0.0;
  std::vector<double> t_prev(n, 1.0), t_cur(n);
  for (Index k = 0; k < n; ++k) t_cur[k] = bounds.a * (lambda(k) - bounds.b);
  for (int m = 0; m < cfg.moments; ++m) {
    const std::vector<double>& t = m == 0 ? t_prev : t_cur;
    double mu = 0.0;
    for (Index k = 0; k < n; ++k) mu += weight(k) * t[k];
    moment_err = std::max(moment_err, std::abs(mu / weight.sum() - small.mu[m]));
    if (m >= 1) {
      std::vector<double> next(n);
      for (Index k = 0; k < n; ++k) next[k] = 2.0 * bounds.a * (lambda(k) - bounds.b) * t_cur[k] - t_prev[k];
      t_prev = t_cur;
      t_cur = next;
    }
  }

  cfg.moments = 1000;
  cfg.vectors = 64;
  const MomentSeries big = run_kpm(h, cfg);
  const int bins = 16;
  const double lo = bounds.e_min(), width = (bounds.e_max() - lo) / bins;
  std::vector<double> hist(bins, 0.0);
  for (Index k = 0; k < n; ++k) hist[std::clamp(static_cast<int>((lambda(k) - lo) / width), 0, bins - 1)] += 1.0;
  double bin_err = 0.0;
  for (int b = 0; b < bins; ++b)
    bin_err = std::max(bin_err, std::abs(integrate_dos(big.mu, bounds, n, lo + b * width, lo + (b + 1) * width) - hist[b]));
  const bool ok = moment_err <= 1e-8 && bin_err <= 0.05 * n;
  report(4, ok, "spectral oracle on (4,4,4)",
         fmt("N=%d, max |mu - mu_dense|=%.3g (tol 1e-8), max bin error %.3f states (tol %.1f = 5%% of N)", n,
             moment_err, bin_err, 0.05 * n));
}

// 5. Integral of the reconstructed DOS.
void criterion5() {
  std::vector<Domain> domains{box(4, 4, 4), box(6, 5, 3), box(5, 5, 5, true), box(10, 10, 4)};
  domains[1].potential = PotentialSpec::superlattice({3, 3, 2}, -1.0, 1);
  domains[2].potential = PotentialSpec::uniform(0.4);
  double worst = 0.0;
  for (const Domain& d : domains) {
    const SparseMatrix h = build_hamiltonian(d);
    for (int moments : {500, 1000}) {
      KpmConfig cfg;
      cfg.moments = moments;
      cfg.vectors = 2;
      cfg.bounds = estimate_bounds(h);
      const MomentSeries s = run_kpm(h, cfg);
      const double n = h.rows();
      const DosCurve dos = reconstruct_dos(s.mu, cfg.bounds, n, 2 * moments);
      worst = std::max(worst, std::abs(dos.integral() - n) / n);
      // Independent midpoint rule on a uniform energy grid.
      const DosCurve uni = reconstruct_dos(s.mu, cfg.bounds, n, 20000, Damping::jackson, Sampling::uniform);
      const double de = uni.energies[1] - uni.energies[0];
      double sum = 0.0;
      for (double r : uni.rho) sum += r * de;
      worst = std::max(worst, std::abs(sum - n) / n);
    }
  }
  report(5, worst <= 0.01, "DOS normalization, Jackson, M in {500, 1000}",
         fmt("%zu matrices, max relative |integral - N| / N = %.3g (tol 0.01)", domains.size(), worst));
}

// 6. Hermiticity, scaled spectra and stencil density.
void criterion6() {
  std::vector<Domain> domains{box(5, 5, 5), box(4, 4, 4), box(3, 4, 5), box(5, 5, 5, true), box(2, 3, 4)};
  domains[2].potential = PotentialSpec::superlattice({2, 2, 2}, 1.5, 1);
  domains[4].potential = PotentialSpec::uniform(-0.7);
  bool hermitian = true, inside = true, density = true;
  double min_x = 0.0, max_x = 0.0, min_nnzr = 1e9, max_nnzr = 0.0;
  const double eps = 0.01;
  for (const Domain& d : domains) {
    const SparseMatrix h = build_hamiltonian(d);
    const Eigen::MatrixXcd m = dense(h);
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() != 0.0) hermitian = false;
    const SpectralBounds b = estimate_bounds(h, eps);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(m, Eigen::EigenvaluesOnly);
    const double lo = b.a * (eig.eigenvalues().minCoeff() - b.b), hi = b.a * (eig.eigenvalues().maxCoeff() - b.b);
    min_x = std::min(min_x, lo);
    max_x = std::max(max_x, hi);
    if (lo < -1.0 + eps - 1e-12 || hi > 1.0 - eps + 1e-12) inside = false;
    const double nnzr = static_cast<double>(h.nnz()) / h.rows();
    min_nnzr = std::min(min_nnzr, nnzr);
    max_nnzr = std::max(max_nnzr, nnzr);
    if (std::min({d.nx, d.ny, d.nz}) >= 3 && (nnzr < 10.0 || nnzr > 16.0)) density = false;
  }
  double torus_dev = 0.0;
  for (int e : {3, 4, 6}) {
    const SparseMatrix t = build_hamiltonian(box(e, e, e, true));
    torus_dev = std::max(torus_dev, std::abs(static_cast<double>(t.nnz()) / t.rows() - 13.0));
  }
  const SparseMatrix big = build_hamiltonian(box(40, 40, 20));
  const double big_nnzr = static_cast<double>(big.nnz()) / big.rows();
  const bool ok = hermitian && inside && density && torus_dev < 1e-12 && big_nnzr >= 10.0 && big_nnzr <= 16.0;
  report(6, ok, "Hamiltonian validity",
         fmt("Hermitian=%d, scaled spectrum in [%.4f, %.4f] (limit 0.99), nnz/row %.3f..%.3f, open-z (40,40,20) "
             "%.3f, fully periodic tori |nnz/row - 13|=%.1g",
             hermitian, min_x, max_x, min_nnzr, max_nnzr, big_nnzr, torus_dev));
}

// 7. Node-hour ratio from the published large-scale rates.
void criterion7() {
  const fs::path out = work_dir() / "table3.csv";
  const int rc = tool("model --table3 --out \"" + out.string() + "\"");
  double ratio = -1.0;
  for (const auto& row : csv_rows(out))
    if (row.size() == 2 && row[0] == "# cost_ratio") ratio = std::stod(row[1]);
  report(7, rc == 0 && std::abs(ratio - 2.19) <= 0.01, "throughput-mode cost model",
         fmt("node-hour ratio aug_spmv / aug_spmmv = %.4f (target 2.19 +- 0.01)", ratio));
}

// 8. Stage 2 (R >= 8) vs stage 0 flop rate once stage 0 stops scaling.
void criterion8() {
  const int hw = std::max(1u, std::thread::hardware_concurrency());
  const SparseMatrix h = build_hamiltonian(box(32, 32, 16));
  const SpectralBounds bounds = estimate_bounds(h);
  const fs::path evidence = work_dir() / "criterion8_evidence.csv";
  std::ofstream csv(evidence);
  BenchSpec spec;
  spec.moments = 40;
  spec.llc_bytes = 0;
  spec.stage = Stage::naive;
  std::vector<int> threads;
  for (int t = 1; t <= hw; t *= 2) threads.push_back(t);
  if (threads.back() != hw) threads.push_back(hw);
  const auto naive = sweep(h, bounds, spec, {1}, threads, csv);
  spec.stage = Stage::aug_spmmv;
  const auto blocked = sweep(h, bounds, spec, {8}, {hw}, csv);
  const double scaling = naive.back().gflops / naive.front().gflops;
  const bool saturation_observable = hw >= 2 && scaling < 0.8 * hw;
  const bool trend = blocked.back().gflops > naive.back().gflops;
  report(8, trend, "stage 2 (R=8) flop rate above stage 0 at full threads",
         fmt("%d hardware thread(s); stage0 %.3f Gflop/s, stage2 R=8 %.3f Gflop/s, stage0 speedup %.2fx; "
             "saturation precondition %s; evidence %s",
             hw, naive.back().gflops, blocked.back().gflops, scaling,
             saturation_observable ? "observed" : "not observable on this host", evidence.c_str()),
         true);
}

// 9. Bitwise-identical moment CSVs for repeated dos runs.
void criterion9() {
  const fs::path dir = work_dir();
  bool ok = true;
  std::string detail;
  for (int threads : {1, 2}) {
    for (const char* stage : {"naive", "aug_spmmv"}) {
      std::string first;
      for (int run = 0; run < 2; ++run) {
        const fs::path mu = dir / fmt("mu_%d_%s_%d.csv", threads, stage, run);
        const fs::path dos = dir / fmt("dos_%d_%s_%d.csv", threads, stage, run);
        const int rc = tool(fmt("--seed 77 --threads %d dos --gen 6,6,5 --M 200 --R 4 --stage %s --moments-out \"%s\" "
                                "--out \"%s\"",
                                threads, stage, mu.c_str(), dos.c_str()));
        const std::string text = slurp(mu) + slurp(dos);
        if (rc != 0 || text.size() < 100) ok = false;
        if (run == 0) first = text;
        else if (text != first) ok = false;
      }
      detail += fmt(" threads=%d/%s:%s", threads, stage, ok ? "identical" : "DIFFER");
    }
  }
  report(9, ok, "determinism of dos output", "repeated runs with --seed 77:" + detail);
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  guarded(1, "code-balance closed form", criterion1);
  guarded(2, "traffic oracle equivalence", criterion2);
  guarded(3, "stage equivalence", criterion3);
  guarded(4, "spectral oracle", criterion4);
  guarded(5, "DOS normalization", criterion5);
  guarded(6, "Hamiltonian validity", criterion6);
  guarded(7, "throughput-mode cost model", criterion7);
  guarded(8, "performance trend", criterion8);
  guarded(9, "determinism", criterion9);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("acceptance: %d hard failure(s), %.1f s\n", hard_failures, secs);
  return hard_failures == 0 ? 0 : 1;
}
