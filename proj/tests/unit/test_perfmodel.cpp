#include <cmath>

#include "doctest.h"
#include "kpm/perfmodel.hpp"

using namespace kpm;

namespace {

ProblemSpec problem(int r, int m = 2000, std::uint64_t n = 1000000, double nnzr = 13.0) {
  return {n, static_cast<std::uint64_t>(std::llround(nnzr * static_cast<double>(n))), r, m};
}

}  // namespace

TEST_CASE("code balance closed form") {
  // (260/R + 48) / 138 bytes per flop for the default arithmetic.
  for (int r : {1, 2, 3, 8, 32, 1000}) CHECK(code_balance(problem(r)).b_min == doctest::Approx((260.0 / r + 48.0) / 138.0));
  CHECK(code_balance(problem(1)).b_min == doctest::Approx(2.2319).epsilon(1e-4));
  CHECK(code_balance_limit(13.0) == doctest::Approx(48.0 / 138.0));
  double prev = 1e9;
  for (int r = 1; r <= 64; ++r) {
    const double b = code_balance(problem(r)).b_min;
    CHECK(b < prev);
    CHECK(b > code_balance_limit(13.0));
    prev = b;
  }
  const BalanceReport rep = code_balance(problem(4), {}, 1.5);
  CHECK(rep.b == doctest::Approx(1.5 * rep.b_min));
  CHECK(rep.v_min == v_kpm(Stage::aug_spmmv, problem(4)));
  CHECK(rep.stages.size() == 3);
  CHECK_THROWS_AS(code_balance(problem(4), {}, 0.5), Error);
}

TEST_CASE("ceilings follow the arithmetic exactly") {
  const ArithmeticSpec real{8.0, 4.0, 1.0, 1.0};  // ceil(7/2) + ceil(9/2) = 9
  CHECK(code_balance_limit(13.0, real) == doctest::Approx(24.0 / (13.0 * 2.0 + 9.0)));
  const ProblemSpec p = problem(1, 2, 10, 13.0);
  CHECK(kpm_flops(p, real) == doctest::Approx(130.0 * 2.0 + 10.0 * 9.0));
}

TEST_CASE("stage traffic identity") {
  for (int r : {1, 2, 5, 16, 33})
    for (int m : {2, 10, 2000})
      for (double nnzr : {5.0, 13.0, 27.5}) {
        const ProblemSpec p = problem(r, m, 12345, nnzr);
        const double lhs = v_kpm(Stage::aug_spmmv, p);
        const double rhs = v_kpm(Stage::aug_spmv, p) -
                           r * m / 2.0 * static_cast<double>(p.nnz) * 20.0 * (1.0 - 1.0 / r);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
      }
}

TEST_CASE("per-function costs add up to the stage totals") {
  const ProblemSpec p = problem(3, 100, 5000);
  double naive = 0.0, flops = 0.0;
  for (KernelFunction f : {KernelFunction::spmv, KernelFunction::axpy, KernelFunction::scal, KernelFunction::nrm2,
                           KernelFunction::dot}) {
    const FunctionCost c = table1_cost(f, p);
    naive += c.bytes_per_call * c.calls;
    flops += c.flops_per_call * c.calls;
  }
  CHECK(naive == doctest::Approx(v_kpm(Stage::naive, p)));
  CHECK(flops == doctest::Approx(kpm_flops(p)));
  const FunctionCost aug = table1_cost(KernelFunction::aug_spmv, p);
  CHECK(aug.bytes_per_call * aug.calls == doctest::Approx(v_kpm(Stage::aug_spmv, p)));
  CHECK(aug.flops_per_call * aug.calls == doctest::Approx(kpm_flops(p)));
  const FunctionCost blk = table1_cost(KernelFunction::aug_spmmv, p);
  CHECK(blk.bytes_per_call * blk.calls == doctest::Approx(v_kpm(Stage::aug_spmmv, p)));
  CHECK(blk.flops_per_call * blk.calls == doctest::Approx(kpm_flops(p)));
  CHECK(parse_function("nrm2") == KernelFunction::nrm2);
  CHECK(std::string(to_string(KernelFunction::aug_spmmv)) == "aug_spmmv");
  CHECK_THROWS_AS(parse_function("gemm"), Error);
  CHECK_THROWS_AS(table1_cost(KernelFunction::spmv, ProblemSpec{0, 0, 1, 2}), Error);
}

TEST_CASE("roofline") {
  const MachineProfile ivb = builtin_profile("IVB");
  CHECK(ivb.bandwidth_gbs == 50.0);
  CHECK(ivb.peak_gflops == 176.0);
  BalanceReport b = code_balance(problem(1));
  RooflinePrediction r = roofline(b, ivb);
  CHECK(r.p_mem == doctest::Approx(50.0 / b.b));
  CHECK(r.p_star == r.p_mem);
  CHECK(r.bottleneck == Bottleneck::memory);
  CHECK_FALSE(r.p_custom.has_value());

  b.b = 0.0;
  r = roofline(b, ivb);
  CHECK(r.p_star == ivb.peak_gflops);
  CHECK(r.bottleneck == Bottleneck::core);

  MachineProfile custom = ivb;
  custom.llc_gflops = 90.0;
  const BalanceReport big = code_balance(problem(64));
  r = roofline(big, custom);
  CHECK(r.p_mem > 90.0);
  CHECK(*r.p_custom == 90.0);
  CHECK(r.bound() == 90.0);
  CHECK(r.bottleneck == Bottleneck::llc);

  // Larger omega never raises the prediction.
  double prev = 1e300;
  for (double omega : {1.0, 1.2, 2.0, 5.0}) {
    const double p = roofline(code_balance(problem(8), {}, omega), ivb).p_star;
    CHECK(p <= prev);
    prev = p;
  }
  CHECK_THROWS_AS(builtin_profile("zen9"), Error);
  CHECK(builtin_profiles().size() == 4);
}

TEST_CASE("resource comparison") {
  const ResourceTable t =
      resource_compare(3.0e16, {{"aug_spmv", 14.9e12, 288}, {"aug_spmmv*", 107e12, 1024}, {"aug_spmmv", 116e12, 1024}});
  CHECK(t.rows.size() == 3);
  CHECK(t.rows[0].seconds == doctest::Approx(3.0e16 / 14.9e12));
  CHECK(t.rows[0].node_hours == doctest::Approx(3.0e16 / 14.9e12 * 288 / 3600));
  CHECK(t.cost_ratio == doctest::Approx((288 / 14.9) / (1024 / 116.0)));
  const ResourceTable eq = resource_compare(1e12, {{"a", 1e9, 2}, {"b", 1e9, 2}});
  CHECK(eq.cost_ratio == 1.0);
  CHECK_THROWS_AS(resource_compare(1e12, {}), Error);
  CHECK_THROWS_AS(resource_compare(1e12, {{"a", 0.0, 1}}), Error);
}

TEST_CASE("config file") {
  const ModelConfig c = parse_model_config(
      "# host\n[profile desk]\nbandwidth_gbs = 20\npeak_gflops=400 # comment\nllc_mib = 32\nllc_gflops = 90\n\n"
      "[arith]\nvalue_bytes = 8\nindex_bytes = 8\n");
  REQUIRE(c.profiles.size() == 1);
  const MachineProfile& p = c.profile("DESK");
  CHECK(p.bandwidth_gbs == 20.0);
  CHECK(p.llc_gflops.value() == 90.0);
  CHECK(c.arith.value_bytes == 8.0);
  CHECK(c.arith.index_bytes == 8.0);
  CHECK(c.arith.flops_mul == 6.0);
  CHECK_THROWS_AS(c.profile("other"), Error);
  CHECK_THROWS_AS(parse_model_config("bandwidth_gbs = 1\n"), Error);
  CHECK_THROWS_AS(parse_model_config("[profile x]\nbandwidth_gbs = fast\n"), Error);
  CHECK_THROWS_AS(parse_model_config("[profile x]\ncolour = 3\n"), Error);
  CHECK_THROWS_AS(parse_model_config("[profile x]\nbandwidth_gbs = 1\n"), Error);
  CHECK_THROWS_AS(parse_model_config("[cpu x]\n"), Error);
  CHECK_THROWS_AS(load_model_config("/nonexistent/model.ini"), Error);
}
