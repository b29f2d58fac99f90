#include <filesystem>
#include <fstream>
#include <numbers>

#include "doctest.h"
#include "kpm/solver.hpp"
#include "support.hpp"

using namespace kpm;
using kpm::test::box;
using kpm::test::dense;

namespace {

KpmConfig config(const SparseMatrix& h, int moments, int vectors, Stage stage = Stage::aug_spmmv) {
  KpmConfig c;
  c.moments = moments;
  c.vectors = vectors;
  c.seed = 17;
  c.stage = stage;
  c.bounds = estimate_bounds(h);
  return c;
}

}  // namespace

TEST_CASE("eta follows the dense Chebyshev polynomials") {
  const SparseMatrix h = kpm::test::random_hermitian(40, 0.2, 9);
  const KpmConfig c = config(h, 30, 2);
  const Index n = h.rows();
  const Eigen::MatrixXcd ht =
      c.bounds.a * (dense(h) - c.bounds.b * Eigen::MatrixXcd::Identity(n, n));
  const MomentSeries s = run_kpm(h, c);
  for (int r = 0; r < 2; ++r) {
    const Eigen::MatrixXcd v0 = dense(random_block_vector(n, 1, c.seed, r));
    std::vector<Eigen::VectorXcd> nu{v0.col(0), ht * v0.col(0)};
    for (int m = 2; m <= c.moments / 2; ++m) nu.push_back(2.0 * ht * nu[m - 1] - nu[m - 2]);
    for (int m = 0; m < c.moments / 2; ++m) {
      CHECK(std::abs(s.eta[r][2 * m] - nu[m].squaredNorm()) < 1e-10 * n);
      CHECK(std::abs(s.eta[r][2 * m + 1] - nu[m + 1].dot(nu[m])) < 1e-10 * n);
    }
  }
}

TEST_CASE("stages agree for every layout and thread split") {
  const SparseMatrix h = build_hamiltonian(box(4, 4, 3));
  KpmConfig c = config(h, 40, 3, Stage::naive);
  for (const ExecPolicy& e : {ExecPolicy{1, {}}, ExecPolicy{3, {2.0, 1.0, 1.0}}}) {
    c.exec = e;
    for (const SparseMatrix& m : {h, crs_to_sell(h, 4, 16)}) {
      c.stage = Stage::naive;
      const MomentSeries s0 = run_kpm(m, c);
      c.stage = Stage::aug_spmv;
      const MomentSeries s1 = run_kpm(m, c);
      c.stage = Stage::aug_spmmv;
      const MomentSeries s2 = run_kpm(m, c);
      c.reduce_at_end = true;
      const MomentSeries s2e = run_kpm(m, c);
      c.reduce_at_end = false;
      for (int r = 0; r < 3; ++r)
        for (int k = 0; k < 40; ++k) {
          const double scale = std::abs(s0.eta[r][k]) + 1e-300;
          CHECK(std::abs(s0.eta[r][k] - s1.eta[r][k]) / scale <= 1e-12);
          CHECK(std::abs(s1.eta[r][k] - s2.eta[r][k]) / scale <= 1e-12);
          CHECK(s2.eta[r][k] == s2e.eta[r][k]);
        }
      CHECK(s0.mu == s2.mu);
    }
  }
}

TEST_CASE("moment properties") {
  Domain d = box(4, 4, 4);
  d.potential = PotentialSpec::uniform(0.3);
  const SparseMatrix h = build_hamiltonian(d);
  const MomentSeries s = run_kpm(h, config(h, 100, 4));
  CHECK(s.mu[0] == 1.0);
  for (double mu : s.mu) CHECK(std::abs(mu) <= 1.0 + 1e-10);
  const MomentSeries again = run_kpm(h, config(h, 100, 4));
  CHECK(s.mu == again.mu);
}

TEST_CASE("moment doubling") {
  const std::vector<std::vector<Complex>> eta{{2.0, 1.0, 1.5, 0.25}, {4.0, -2.0, 4.0, 1.0}};
  const auto mu = average_moments(eta);
  CHECK(mu[0] == 1.0);
  CHECK(mu[1] == doctest::Approx((0.5 - 0.5) / 2.0));
  CHECK(mu[2] == doctest::Approx(((2 * 1.5 / 2 - 1) + (2 * 4.0 / 4 - 1)) / 2.0));
  CHECK(mu[3] == doctest::Approx(((2 * 0.25 / 2 - 0.5) + (2 * 1.0 / 4 + 0.5)) / 2.0));
  CHECK_THROWS_AS(average_moments({{0.0, 1.0}}), Error);
  CHECK_THROWS_AS(average_moments({{1.0, Complex(0.0, 1.0)}}), Error);
  CHECK_THROWS_AS(average_moments({{1.0, 0.0}, {1.0}}), Error);
}

TEST_CASE("Jackson kernel") {
  const auto g = jackson_kernel(64);
  CHECK(g[0] == doctest::Approx(1.0).epsilon(1e-14));
  for (std::size_t m = 1; m < g.size(); ++m) {
    CHECK(g[m] < g[m - 1]);
    CHECK(g[m] > 0.0);
  }
  CHECK(damping_coefficients(5, Damping::none) == std::vector<double>(5, 1.0));
  CHECK(parse_damping("none") == Damping::none);
  CHECK_THROWS_AS(parse_damping("lorentz"), Error);
}

TEST_CASE("reconstruction of a known density") {
  // mu_m of the uniform density on [-1, 1]: 0 for odd m, -1/(m^2 - 1) for even m.
  const int moments = 400;
  std::vector<double> mu(moments, 0.0);
  for (int m = 0; m < moments; m += 2) mu[m] = -1.0 / (static_cast<double>(m) * m - 1.0);
  const SpectralBounds b{0.5, 1.0, 0.01};
  const DosCurve dos = reconstruct_dos(mu, b, 10.0, 801);
  CHECK(std::is_sorted(dos.energies.begin(), dos.energies.end()));
  CHECK(dos.energies.front() > -1.0);
  CHECK(dos.energies.back() < 3.0);
  // Uniform density of 10 states over an interval of width 4.
  CHECK(dos.rho[400] == doctest::Approx(2.5).epsilon(1e-3));
  for (double r : dos.rho) CHECK(r >= -1e-12);
  CHECK(dos.integral() == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(integrate_dos(mu, b, 10.0, 0.0, 1.0) == doctest::Approx(2.5).epsilon(1e-3));
  CHECK(integrate_dos(mu, b, 10.0, -5.0, 5.0) == doctest::Approx(10.0).epsilon(1e-12));
  const DosCurve uni = reconstruct_dos(mu, b, 10.0, 400, Damping::jackson, Sampling::uniform);
  CHECK(uni.energies[1] - uni.energies[0] == doctest::Approx(uni.energies[2] - uni.energies[1]));
  CHECK_THROWS_AS(reconstruct_dos(mu, b, 10.0, 1), Error);
  CHECK_THROWS_AS(reconstruct_dos(std::vector<double>{1.0}, b, 10.0, 10), Error);
}

TEST_CASE("configuration errors") {
  const SparseMatrix h = build_hamiltonian(box(2, 2, 2));
  KpmConfig c = config(h, 10, 1);
  c.moments = 11;
  CHECK_THROWS_AS(run_kpm(h, c), Error);
  c.moments = 10;
  c.vectors = 0;
  CHECK_THROWS_AS(run_kpm(h, c), Error);
  c.vectors = 1;
  c.bounds.a = 0.0;
  CHECK_THROWS_AS(run_kpm(h, c), Error);
  c.bounds = estimate_bounds(h);
  const SparseMatrix rect = SparseMatrix::from_crs(2, 3, {0, 1, 1}, {2}, {1.0});
  CHECK_THROWS_AS(run_kpm(rect, c), Error);
  CHECK(parse_stage("stage1") == Stage::aug_spmv);
  CHECK(parse_stage("2") == Stage::aug_spmmv);
  CHECK(parse_stage("naive") == Stage::naive);
  CHECK_THROWS_AS(parse_stage("3"), Error);
}

TEST_CASE("non-Hermitian input is rejected") {
  const SparseMatrix m = from_entries(2, 2, {{0, 1, Complex(0.0, 1.0)}, {1, 0, Complex(0.0, 1.0)}});
  CHECK_THROWS_AS(run_kpm(m, config(m, 10, 1)), Error);
}

TEST_CASE("CSV output") {
  const SparseMatrix h = build_hamiltonian(box(2, 2, 2));
  const MomentSeries s = run_kpm(h, config(h, 6, 1));
  const auto path = std::filesystem::temp_directory_path() / "kpm_unit_mu.csv";
  write_moments_csv(s, path);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "m,mu");
  std::getline(in, line);
  CHECK(line == "0,1");
  int rows = 1;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 6);
  CHECK_THROWS_AS(write_moments_csv(s, "/nonexistent-dir/x.csv"), Error);
  std::filesystem::remove(path);
}
