#include <sstream>

#include "doctest.h"
#include "kpm/bench.hpp"
#include "support.hpp"

using namespace kpm;
using kpm::test::box;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string l;
  while (std::getline(in, l)) out.push_back(l);
  return out;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string f;
  while (std::getline(in, f, ',')) out.push_back(f);
  return out;
}

}  // namespace

TEST_CASE("bench result bookkeeping") {
  const SparseMatrix h = build_hamiltonian(box(6, 6, 4));
  const SpectralBounds b = estimate_bounds(h);
  BenchSpec spec;
  spec.stage = Stage::aug_spmmv;
  spec.vectors = 4;
  spec.moments = 20;
  spec.reps = 3;
  const BenchResult r = bench_kernel(h, b, spec);
  CHECK(r.kernel == "kpm");
  CHECK(r.samples.size() == 3);
  CHECK(r.n == static_cast<std::uint64_t>(h.rows()));
  const ProblemSpec p{r.n, r.nnz, 4, 20};
  CHECK(r.flops == kpm_flops(p));
  CHECK(r.gflops == doctest::Approx(r.flops / r.time_s * 1e-9));
  CHECK(r.bytes == doctest::Approx(r.omega * v_kpm(Stage::aug_spmmv, p)));
  CHECK(r.bw_gbs == doctest::Approx(r.bytes / r.time_s * 1e-9));
  CHECK(r.omega >= 1.0);
  for (double t : r.samples) CHECK(t > 0.0);

  spec.mode = BenchMode::kernel;
  spec.stage = Stage::naive;
  spec.llc_bytes = 0;
  const BenchResult k = bench_kernel(h, b, spec);
  CHECK(k.kernel == "spmv");
  CHECK(k.omega == 1.0);
  CHECK(k.flops == table1_cost(KernelFunction::spmv, p).flops_per_call * 4);

  spec.reps = 2;
  CHECK_THROWS_AS(bench_kernel(h, b, spec), Error);
}

TEST_CASE("sweep CSV") {
  const SparseMatrix h = build_hamiltonian(box(4, 4, 4));
  const SpectralBounds b = estimate_bounds(h);
  BenchSpec spec;
  spec.moments = 10;
  spec.llc_bytes = 16 * 1024;
  std::ostringstream csv;
  const auto res = sweep(h, b, spec, {1, 2, 4}, {1, 2}, csv, true);
  const auto rows = lines(csv.str());
  REQUIRE(rows.size() == 7);
  CHECK(rows[0] == std::string(kSweepHeader) + ",b_min");
  const int order[][2] = {{1, 1}, {1, 2}, {2, 1}, {2, 2}, {4, 1}, {4, 2}};
  double prev_omega = 1.0;
  for (int k = 0; k < 6; ++k) {
    const auto f = fields(rows[k + 1]);
    REQUIRE(f.size() == 12);
    CHECK(f[0] == "kpm");
    CHECK(f[1] == "aug_spmmv");
    CHECK(std::stoi(f[4]) == order[k][0]);
    CHECK(std::stoi(f[6]) == order[k][1]);
    const ProblemSpec p{res[k].n, res[k].nnz, order[k][0], 10};
    CHECK(std::stod(f[11]) == code_balance(p).b_min);
    const double omega = std::stod(f[10]);
    CHECK(omega >= prev_omega);
    prev_omega = omega;
  }
  std::ostringstream plain;
  sweep(h, b, spec, {1}, {1}, plain);
  CHECK(lines(plain.str())[0] == kSweepHeader);
}

TEST_CASE("simulated omega") {
  const SparseMatrix h = build_hamiltonian(box(12, 12, 6));
  CHECK(simulated_omega(h, Stage::aug_spmmv, 4, 100, 1ull << 30) == 1.0);
  double prev = 1.0;
  for (int r : {1, 2, 4, 8, 16}) {
    const double o = simulated_omega(h, Stage::aug_spmmv, r, 100, 64 * 1024);
    CHECK(o >= prev);
    prev = o;
  }
}

TEST_CASE("footprint and LLC sizing") {
  CHECK_THROWS_AS(check_footprint(box(2000, 2000, 100), Stage::aug_spmmv, 64), Error);
  CHECK(estimate_footprint(box(10, 10, 10), Stage::aug_spmmv, 2) > estimate_footprint(box(10, 10, 10), Stage::aug_spmmv, 1));
  CHECK_NOTHROW(check_footprint(box(4, 4, 4), Stage::aug_spmmv, 1));

  for (int r : {1, 8, 32}) {
    const std::uint64_t llc = 25ull << 20;
    const Domain d = llc_sized_domain(llc, r);
    CHECK(d.nx == d.ny);
    CHECK(d.ny == d.nz);
    const SparseMatrix h = build_hamiltonian(d);
    const double working = static_cast<double>(h.storage_bytes()) + 2.0 * r * h.rows() * kValueBytes;
    CHECK(working <= static_cast<double>(llc));
    CHECK(working >= 0.3 * static_cast<double>(llc));
  }
  CHECK(llc_sized_domain(1024, 4).nx == 3);
}

TEST_CASE("verify rejects unknown suites") {
  CHECK_THROWS_AS(verify("everything"), Error);
  const VerifyReport r = verify("formats");
  CHECK(!r.checks.empty());
  CHECK(r.passed());
}
