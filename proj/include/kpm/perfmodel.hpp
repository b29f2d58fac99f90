#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "kpm/solver.hpp"

namespace kpm {

/// Data and operation sizes. Defaults are double complex with 4-byte indices.
struct ArithmeticSpec {
  double value_bytes = 16.0;  // S_d
  double index_bytes = 4.0;   // S_i
  double flops_add = 2.0;     // F_a
  double flops_mul = 6.0;     // F_m

  void validate() const;
};

struct ProblemSpec {
  std::uint64_t n = 0;    // matrix dimension N
  std::uint64_t nnz = 0;  // nonzeros N_nz
  int vectors = 1;        // R
  int moments = 2;        // M

  double nnz_per_row() const noexcept { return static_cast<double>(nnz) / static_cast<double>(n); }
  void validate() const;
};

struct MachineProfile {
  std::string name;
  double bandwidth_gbs = 0.0;  // b
  double peak_gflops = 0.0;    // P_peak
  double llc_mib = 0.0;
  std::optional<double> llc_gflops;  // measured cache-resident ceiling P*_LLC

  void validate() const;
};

/// Built-in reference profiles: ivb, snb, k20m, k20x.
const std::vector<MachineProfile>& builtin_profiles();
/// Case-insensitive lookup among the built-ins.
MachineProfile builtin_profile(const std::string& name);

/// Key-value config file. Sections name profiles; an optional [arith]
/// section overrides ArithmeticSpec:
///
///   [profile myhost]
///   bandwidth_gbs = 20
///   peak_gflops = 400
///   llc_mib = 32
///   llc_gflops = 90      # optional
///
///   [arith]
///   value_bytes = 16
///   index_bytes = 4
///   flops_add = 2
///   flops_mul = 6
struct ModelConfig {
  std::vector<MachineProfile> profiles;
  ArithmeticSpec arith;

  const MachineProfile& profile(const std::string& name) const;
};

ModelConfig load_model_config(const std::filesystem::path& path);
ModelConfig parse_model_config(const std::string& text);

enum class KernelFunction { spmv, axpy, scal, nrm2, dot, aug_spmv, aug_spmmv };

KernelFunction parse_function(const std::string& name);
const char* to_string(KernelFunction f) noexcept;

struct FunctionCost {
  double bytes_per_call = 0.0;
  double flops_per_call = 0.0;
  double calls = 0.0;
};

/// Minimum traffic and flops of one call and the number of calls in a full
/// solve. The aug_spmmv row describes one sweep over all R columns.
FunctionCost table1_cost(KernelFunction f, const ProblemSpec& p, const ArithmeticSpec& arith = {});

/// Minimum solver data traffic per stage:
///   naive     RM/2 [N_nz (S_d + S_i) + 13 N S_d]
///   aug_spmv  RM/2 [N_nz (S_d + S_i) +  3 N S_d]
///   aug_spmmv  M/2 [N_nz (S_d + S_i) + 3 R N S_d]
double v_kpm(Stage stage, const ProblemSpec& p, const ArithmeticSpec& arith = {});

/// Solver flops, identical for all stages:
/// RM/2 [N_nz (F_a + F_m) + N (ceil(7F_a/2) + ceil(9F_m/2))].
double kpm_flops(const ProblemSpec& p, const ArithmeticSpec& arith = {});

struct StageBalance {
  Stage stage;
  double bytes;
  double balance;  // bytes/flop with omega = 1
};

struct BalanceReport {
  double v_min = 0.0;  // bytes, blocked stage
  double flops = 0.0;
  double b_min = 0.0;  // bytes/flop
  double omega = 1.0;
  double b = 0.0;      // omega * b_min
  std::vector<StageBalance> stages;
};

/// B_min = [N_nzr/R (S_d + S_i) + 3 S_d] / [N_nzr (F_a + F_m) + ceil(7F_a/2) + ceil(9F_m/2)].
BalanceReport code_balance(const ProblemSpec& p, const ArithmeticSpec& arith = {}, double omega = 1.0);
/// B_min for R -> infinity: 3 S_d / [N_nzr (F_a + F_m) + ceil(7F_a/2) + ceil(9F_m/2)].
double code_balance_limit(double nnz_per_row, const ArithmeticSpec& arith = {});

enum class Bottleneck { memory, llc, core };

const char* to_string(Bottleneck b) noexcept;

struct RooflinePrediction {
  double p_mem = 0.0;   // b / B
  double p_star = 0.0;  // min(P_peak, P_mem)
  std::optional<double> p_custom;  // min(P_mem, P_LLC) when P_LLC is known
  Bottleneck bottleneck = Bottleneck::memory;

  /// The tightest bound available (custom if present).
  double bound() const noexcept { return p_custom ? *p_custom : p_star; }
};

RooflinePrediction roofline(const BalanceReport& balance, const MachineProfile& machine);

struct ResourceEntry {
  std::string label;
  double rate_flops = 0.0;  // sustained flop/s
  double nodes = 1.0;
};

struct ResourceRow {
  std::string label;
  double rate_flops = 0.0;
  double nodes = 0.0;
  double seconds = 0.0;
  double node_hours = 0.0;
};

struct ResourceTable {
  double total_flops = 0.0;
  std::vector<ResourceRow> rows;
  /// node_hours(first row) / node_hours(last row)
  double cost_ratio = 0.0;
};

/// Wall time and node hours to execute total_flops at each entry's rate.
ResourceTable resource_compare(double total_flops, const std::vector<ResourceEntry>& entries);

}  // namespace kpm
