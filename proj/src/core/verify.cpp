#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "kpm/bench.hpp"

namespace kpm {

namespace {

std::string fmt(const char* f, double x) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

Domain cube(int nx, int ny, int nz) {
  Domain d;
  d.nx = nx;
  d.ny = ny;
  d.nz = nz;
  return d;
}

Eigen::MatrixXcd dense(const SparseMatrix& h) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(h.rows(), h.cols());
  h.for_each_entry([&](Index i, Index j, Complex v) { m(i, j) += v; });
  return m;
}

double rel_diff(Complex x, Complex y) {
  const double scale = std::max(std::abs(x), std::abs(y));
  return scale == 0.0 ? 0.0 : std::abs(x - y) / scale;
}

double max_rel_diff(const MomentSeries& x, const MomentSeries& y) {
  double worst = 0.0;
  for (std::size_t r = 0; r < x.eta.size(); ++r)
    for (std::size_t m = 0; m < x.eta[r].size(); ++m) worst = std::max(worst, rel_diff(x.eta[r][m], y.eta[r][m]));
  return worst;
}

void stages_suite(VerifyReport& rep, const ExecPolicy& exec, std::uint64_t seed) {
  const SparseMatrix h = build_hamiltonian(cube(8, 8, 8));
  KpmConfig cfg;
  cfg.moments = 200;
  cfg.vectors = 4;
  cfg.seed = seed;
  cfg.bounds = estimate_bounds(h);
  cfg.exec = exec;
  const MomentSeries s0 = kpm_naive(h, cfg);
  const MomentSeries s1 = kpm_stage1(h, cfg);
  const MomentSeries s2 = kpm_stage2(h, cfg);
  cfg.reduce_at_end = true;
  const MomentSeries s2e = kpm_stage2(h, cfg);
  const double tol = 1e-12;
  auto add = [&](const char* name, double d) { rep.checks.push_back({"stages", name, d <= tol, d, tol, "max relative eta difference"}); };
  add("naive_vs_aug_spmv", max_rel_diff(s0, s1));
  add("aug_spmv_vs_aug_spmmv", max_rel_diff(s1, s2));
  add("aug_spmmv_reduce_at_end", max_rel_diff(s2, s2e));
}

void oracle_dos_suite(VerifyReport& rep, const ExecPolicy& exec, std::uint64_t seed) {
  const SparseMatrix h = build_hamiltonian(cube(4, 4, 4));
  const SpectralBounds bounds = estimate_bounds(h);
  const Index n = h.rows();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(dense(h));
  const Eigen::VectorXd lambda = eig.eigenvalues();

  // Moments of one random vector against the eigenbasis expansion.
  KpmConfig cfg;
  cfg.moments = 200;
  cfg.vectors = 1;
  cfg.seed = seed;
  cfg.bounds = bounds;
  cfg.exec = exec;
  const MomentSeries s = kpm_stage2(h, cfg);
  const BlockVector v0 = random_block_vector(n, 1, seed);
  Eigen::VectorXcd nu(n);
  for (Index i = 0; i < n; ++i) nu(i) = v0(i, 0);
  const Eigen::VectorXd weight = (eig.eigenvectors().adjoint() * nu).cwiseAbs2();
  const double norm = weight.sum();
  double worst = 0.0;
  for (int m = 0; m < cfg.moments; ++m) {
    double mu = 0.0;
    for (Index k = 0; k < n; ++k) {
      const double x = std::clamp(bounds.a * (lambda(k) - bounds.b), -1.0, 1.0);
      mu += weight(k) * std::cos(m * std::acos(x));
    }
    worst = std::max(worst, std::abs(mu / norm - s.mu[m]));
  }
  rep.checks.push_back({"oracle-dos", "moments_vs_dense", worst <= 1e-8, worst, 1e-8, "max |mu_kpm - mu_dense|, R=1, M=200"});

  // Binned DOS against the eigenvalue histogram.
  cfg.moments = 1000;
  cfg.vectors = 64;
  const MomentSeries big = kpm_stage2(h, cfg);
  const int bins = 16;
  const double lo = bounds.e_min(), hi = bounds.e_max(), width = (hi - lo) / bins;
  std::vector<double> count(bins, 0.0);
  for (Index k = 0; k < n; ++k) count[std::clamp(static_cast<int>((lambda(k) - lo) / width), 0, bins - 1)] += 1.0;
  double bin_err = 0.0;
  for (int b = 0; b < bins; ++b) {
    const double kpm = integrate_dos(big.mu, bounds, n, lo + b * width, lo + (b + 1) * width);
    bin_err = std::max(bin_err, std::abs(kpm - count[b]));
  }
  const double tol = 0.05 * n;
  rep.checks.push_back({"oracle-dos", "histogram_16_bins", bin_err <= tol, bin_err, tol,
                        "max per-bin state count error, R=64, M=1000, Jackson"});

  const DosCurve dos = reconstruct_dos(big.mu, bounds, n, 2048);
  const double integral_err = std::abs(dos.integral() - n) / n;
  rep.checks.push_back({"oracle-dos", "normalization", integral_err <= 0.01, integral_err, 0.01,
                        "relative error of the DOS integral against N"});
}

void traffic_suite(VerifyReport& rep, std::uint64_t seed) {
  const SparseMatrix h = build_hamiltonian(cube(20, 20, 8));
  const SpectralBounds bounds = estimate_bounds(h);
  for (Stage stage : {Stage::naive, Stage::aug_spmv, Stage::aug_spmmv}) {
    for (int r : {1, 4, 8}) {
      KpmConfig cfg;
      cfg.moments = 100;
      cfg.vectors = r;
      cfg.seed = seed;
      cfg.stage = stage;
      cfg.bounds = bounds;
      TrafficMeter meter;
      run_kpm(h, cfg, &meter);
      const ProblemSpec p{static_cast<std::uint64_t>(h.rows()), static_cast<std::uint64_t>(h.nnz()), r, cfg.moments};
      const double counted = static_cast<double>(meter.measured().total_bytes());
      const double dev = std::abs(counted - v_kpm(stage, p));
      const double flop_dev = std::abs(static_cast<double>(meter.measured().total_flops()) - kpm_flops(p));
      rep.checks.push_back({"traffic", std::string(to_string(stage)) + "_R" + std::to_string(r), dev == 0.0 && flop_dev == 0.0,
                            dev, 0.0, "bytes deviation from V_KPM; flops deviation " + fmt("%.0f", flop_dev)});
    }
  }
}

void formats_suite(VerifyReport& rep, const ExecPolicy& exec, std::uint64_t seed) {
  Domain d = cube(6, 5, 4);
  d.potential = PotentialSpec::superlattice({3, 3, 2}, -0.5, 1);
  const SparseMatrix h = build_hamiltonian(d);
  const auto ref = entries(h);
  auto same = [&](const SparseMatrix& m) {
    const auto e = entries(m);
    if (e.size() != ref.size()) return false;
    for (std::size_t k = 0; k < e.size(); ++k)
      if (e[k].row != ref[k].row || e[k].col != ref[k].col || e[k].value != ref[k].value) return false;
    return true;
  };
  const BlockVector x = random_block_vector(h.rows(), 3, seed);
  BlockVector y_ref(h.rows(), 3);
  spmv(h, x, y_ref, exec);
  for (auto [c, sigma] : {std::pair{1, 1}, {4, 1}, {8, 32}, {32, 128}}) {
    const SparseMatrix s = crs_to_sell(h, c, sigma);
    const std::string tag = "sell_" + std::to_string(c) + "_" + std::to_string(sigma);
    rep.checks.push_back({"formats", tag + "_roundtrip", same(sell_to_crs(s)) && same(s), 0.0, 0.0, "entries after CRS->SELL->CRS"});
    BlockVector y(h.rows(), 3);
    spmv(s, x, y, exec);
    double diff = 0.0;
    for (Index i = 0; i < h.rows(); ++i)
      for (int r = 0; r < 3; ++r) diff = std::max(diff, std::abs(y(i, r) - y_ref(i, r)));
    rep.checks.push_back({"formats", tag + "_spmv", diff <= 1e-13, diff, 1e-13, "max |y_sell - y_crs|"});
  }
  const auto path = std::filesystem::temp_directory_path() / ("kpm_verify_" + std::to_string(seed) + ".mtx");
  write_matrix_market(h, path);
  const bool mm_ok = same(read_matrix_market(path));
  std::filesystem::remove(path);
  rep.checks.push_back({"formats", "matrix_market_roundtrip", mm_ok, 0.0, 0.0, "entries after write/read"});
}

}  // namespace

VerifyReport verify(const std::string& suite, const ExecPolicy& exec, std::uint64_t seed) {
  exec.validate();
  const bool all = suite == "all";
  require(all || suite == "stages" || suite == "oracle-dos" || suite == "traffic" || suite == "formats",
          Errc::invalid_argument, "suite must be stages, oracle-dos, traffic, formats or all");
  VerifyReport rep;
  if (all || suite == "stages") stages_suite(rep, exec, seed);
  if (all || suite == "oracle-dos") oracle_dos_suite(rep, exec, seed);
  if (all || suite == "traffic") traffic_suite(rep, seed);
  if (all || suite == "formats") formats_suite(rep, exec, seed);
  return rep;
}

}  // namespace kpm
