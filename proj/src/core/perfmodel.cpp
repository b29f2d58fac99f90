#include "kpm/perfmodel.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

namespace kpm {

void ArithmeticSpec::validate() const {
  require(value_bytes > 0 && index_bytes >= 0 && flops_add > 0 && flops_mul > 0, Errc::invalid_argument,
          "arithmetic sizes must be positive");
}

void ProblemSpec::validate() const {
  require(n >= 1, Errc::invalid_argument, "problem needs N >= 1");
  require(vectors >= 1, Errc::invalid_argument, "problem needs R >= 1");
  require(moments >= 2, Errc::invalid_argument, "problem needs M >= 2");
}

void MachineProfile::validate() const {
  require(bandwidth_gbs > 0.0 && peak_gflops > 0.0, Errc::invalid_argument,
          "machine bandwidth and peak must be positive");
  if (llc_gflops) require(*llc_gflops > 0.0, Errc::invalid_argument, "LLC ceiling must be positive");
}

const std::vector<MachineProfile>& builtin_profiles() {
  static const std::vector<MachineProfile> profiles{
      {"ivb", 50.0, 176.0, 25.0, std::nullopt},
      {"snb", 48.0, 166.4, 20.0, std::nullopt},
      {"k20m", 150.0, 1174.0, 1.25, std::nullopt},
      {"k20x", 170.0, 1311.0, 1.5, std::nullopt},
  };
  return profiles;
}

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

double ceil_half(double x) { return std::ceil(x / 2.0); }

/// ceil(7F_a/2) + ceil(9F_m/2): per-row flops of the vector operations.
double vector_flops(const ArithmeticSpec& a) { return std::ceil(7.0 * a.flops_add / 2.0) + std::ceil(9.0 * a.flops_mul / 2.0); }

}  // namespace

MachineProfile builtin_profile(const std::string& name) {
  const std::string key = lower(name);
  for (const auto& p : builtin_profiles())
    if (p.name == key) return p;
  fail(Errc::invalid_argument, "unknown machine profile '" + name + "'");
}

const MachineProfile& ModelConfig::profile(const std::string& name) const {
  const std::string key = lower(name);
  for (const auto& p : profiles)
    if (lower(p.name) == key) return p;
  fail(Errc::invalid_argument, "profile '" + name + "' not found in config");
}

KernelFunction parse_function(const std::string& name) {
  static const std::pair<const char*, KernelFunction> table[] = {
      {"spmv", KernelFunction::spmv},         {"axpy", KernelFunction::axpy},
      {"scal", KernelFunction::scal},         {"nrm2", KernelFunction::nrm2},
      {"dot", KernelFunction::dot},           {"aug_spmv", KernelFunction::aug_spmv},
      {"aug_spmmv", KernelFunction::aug_spmmv}};
  for (const auto& [n, f] : table)
    if (name == n) return f;
  fail(Errc::invalid_argument, "unknown kernel function '" + name + "'");
}

const char* to_string(KernelFunction f) noexcept {
  switch (f) {
    case KernelFunction::spmv: return "spmv";
    case KernelFunction::axpy: return "axpy";
    case KernelFunction::scal: return "scal";
    case KernelFunction::nrm2: return "nrm2";
    case KernelFunction::dot: return "dot";
    case KernelFunction::aug_spmv: return "aug_spmv";
    case KernelFunction::aug_spmmv: return "aug_spmmv";
  }
  return "?";
}

FunctionCost table1_cost(KernelFunction f, const ProblemSpec& p, const ArithmeticSpec& a) {
  p.validate();
  a.validate();
  const double n = static_cast<double>(p.n);
  const double nnz = static_cast<double>(p.nnz);
  const double r = p.vectors;
  const double half_rm = r * p.moments / 2.0;
  const double matrix = nnz * (a.value_bytes + a.index_bytes);
  const double fma = a.flops_add + a.flops_mul;
  switch (f) {
    case KernelFunction::spmv:
      return {matrix + 2.0 * n * a.value_bytes, nnz * fma, half_rm};
    case KernelFunction::axpy:
      return {3.0 * n * a.value_bytes, n * fma, 2.0 * half_rm};
    case KernelFunction::scal:
      return {2.0 * n * a.value_bytes, n * a.flops_mul, half_rm};
    case KernelFunction::nrm2:
      return {n * a.value_bytes, n * (ceil_half(a.flops_add) + ceil_half(a.flops_mul)), half_rm};
    case KernelFunction::dot:
      return {2.0 * n * a.value_bytes, n * fma, half_rm};
    case KernelFunction::aug_spmv:
      return {matrix + 3.0 * n * a.value_bytes, nnz * fma + n * vector_flops(a), half_rm};
    case KernelFunction::aug_spmmv:
      return {matrix + 3.0 * r * n * a.value_bytes, r * (nnz * fma + n * vector_flops(a)), p.moments / 2.0};
  }
  fail(Errc::invalid_argument, "unknown kernel function");
}

double v_kpm(Stage stage, const ProblemSpec& p, const ArithmeticSpec& a) {
  p.validate();
  a.validate();
  const double n = static_cast<double>(p.n);
  const double matrix = static_cast<double>(p.nnz) * (a.value_bytes + a.index_bytes);
  const double r = p.vectors;
  const double half_m = p.moments / 2.0;
  switch (stage) {
    case Stage::naive:
      return r * half_m * (matrix + 13.0 * n * a.value_bytes);
    case Stage::aug_spmv:
      return r * half_m * (matrix + 3.0 * n * a.value_bytes);
    case Stage::aug_spmmv:
      return half_m * (matrix + 3.0 * r * n * a.value_bytes);
  }
  fail(Errc::invalid_argument, "unknown stage");
}

double kpm_flops(const ProblemSpec& p, const ArithmeticSpec& a) {
  p.validate();
  a.validate();
  const double n = static_cast<double>(p.n);
  const double nnz = static_cast<double>(p.nnz);
  return p.vectors * p.moments / 2.0 * (nnz * (a.flops_add + a.flops_mul) + n * vector_flops(a));
}

BalanceReport code_balance(const ProblemSpec& p, const ArithmeticSpec& a, double omega) {
  require(omega >= 1.0, Errc::invalid_argument, "omega must be >= 1");
  BalanceReport rep;
  rep.flops = kpm_flops(p, a);
  rep.v_min = v_kpm(Stage::aug_spmmv, p, a);
  const double nnzr = p.nnz_per_row();
  rep.b_min = (nnzr / p.vectors * (a.value_bytes + a.index_bytes) + 3.0 * a.value_bytes) /
              (nnzr * (a.flops_add + a.flops_mul) + vector_flops(a));
  rep.omega = omega;
  rep.b = omega * rep.b_min;
  for (Stage s : {Stage::naive, Stage::aug_spmv, Stage::aug_spmmv}) {
    const double bytes = v_kpm(s, p, a);
    rep.stages.push_back({s, bytes, bytes / rep.flops});
  }
  return rep;
}

double code_balance_limit(double nnz_per_row, const ArithmeticSpec& a) {
  a.validate();
  return 3.0 * a.value_bytes / (nnz_per_row * (a.flops_add + a.flops_mul) + vector_flops(a));
}

const char* to_string(Bottleneck b) noexcept {
  switch (b) {
    case Bottleneck::memory: return "memory";
    case Bottleneck::llc: return "LLC";
    case Bottleneck::core: return "core";
  }
  return "?";
}

RooflinePrediction roofline(const BalanceReport& balance, const MachineProfile& machine) {
  machine.validate();
  require(balance.b >= 0.0, Errc::invalid_argument, "code balance must be non-negative");
  RooflinePrediction out;
  out.p_mem = balance.b > 0.0 ? machine.bandwidth_gbs / balance.b : std::numeric_limits<double>::infinity();
  out.p_star = std::min(machine.peak_gflops, out.p_mem);
  out.bottleneck = out.p_mem <= machine.peak_gflops ? Bottleneck::memory : Bottleneck::core;
  if (machine.llc_gflops) {
    out.p_custom = std::min(out.p_mem, *machine.llc_gflops);
    out.bottleneck = out.p_mem <= *machine.llc_gflops ? Bottleneck::memory : Bottleneck::llc;
  }
  return out;
}

ResourceTable resource_compare(double total_flops, const std::vector<ResourceEntry>& entries) {
  require(total_flops > 0.0, Errc::invalid_argument, "total flops must be positive");
  require(!entries.empty(), Errc::invalid_argument, "need at least one resource entry");
  ResourceTable t;
  t.total_flops = total_flops;
  for (const auto& e : entries) {
    require(e.rate_flops > 0.0 && e.nodes > 0.0, Errc::invalid_argument, "rates and node counts must be positive");
    const double seconds = total_flops / e.rate_flops;
    t.rows.push_back({e.label, e.rate_flops, e.nodes, seconds, seconds * e.nodes / 3600.0});
  }
  t.cost_ratio = t.rows.front().node_hours / t.rows.back().node_hours;
  return t;
}

}  // namespace kpm
