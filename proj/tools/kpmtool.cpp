// kpmtool: command-line front end over the libkpm C API.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kpm/kpm.h"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct Failure {
  kpm_status status;
  std::string message;
};

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(kpm_status st) {
  if (st != KPM_OK) throw Failure{st, kpm_last_error()};
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

int to_int(const std::string& s) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size()) throw Usage("'" + s + "' is not an integer");
  return v;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size()) throw Usage("'" + s + "' is not a number");
  return v;
}

/// "1,2,8" or "1..32" or a mix such as "1..4,8,16".
std::vector<int> int_list(const std::string& s) {
  std::vector<int> out;
  for (const auto& item : split(s, ',')) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(to_int(item));
      continue;
    }
    const int lo = to_int(item.substr(0, dots)), hi = to_int(item.substr(dots + 2));
    if (hi < lo) throw Usage("empty range '" + item + "'");
    for (int v = lo; v <= hi; ++v) out.push_back(v);
  }
  if (out.empty()) throw Usage("empty list '" + s + "'");
  return out;
}

struct Global {
  std::uint64_t seed = 1;
  int threads = 1;
  std::string weights;
  std::string format = "crs";

  std::vector<double> weight_values;
  kpm_exec exec{};

  void finalize() {
    weight_values.clear();
    if (!weights.empty())
      for (const auto& w : split(weights, ',')) weight_values.push_back(to_double(w));
    if (!weight_values.empty() && static_cast<int>(weight_values.size()) != threads)
      throw Usage("--weights needs one weight per thread");
    kpm_exec_init(&exec);
    exec.threads = threads;
    exec.weights = weight_values.empty() ? nullptr : weight_values.data();
    exec.num_weights = weight_values.size();
  }
};

class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(kpm_matrix* m) : m_(m) {}
  Matrix(const Matrix&) = delete;
  Matrix& operator=(const Matrix&) = delete;
  Matrix(Matrix&& o) noexcept : m_(o.m_) { o.m_ = nullptr; }
  Matrix& operator=(Matrix&& o) noexcept {
    std::swap(m_, o.m_);
    return *this;
  }
  ~Matrix() { kpm_matrix_free(m_); }
  kpm_matrix* get() const { return m_; }

 private:
  kpm_matrix* m_ = nullptr;
};

class Moments {
 public:
  ~Moments() { kpm_moments_free(s_); }
  kpm_moments** out() { return &s_; }
  kpm_moments* get() const { return s_; }

 private:
  kpm_moments* s_ = nullptr;
};

/// Applies --format to a matrix.
Matrix with_format(Matrix m, const std::string& format) {
  const auto parts = split(format, ':');
  if (format == "crs") {
    kpm_matrix_info info;
    check(kpm_matrix_get_info(m.get(), &info));
    if (info.layout == KPM_LAYOUT_CRS) return m;
    kpm_matrix* out = nullptr;
    check(kpm_matrix_convert(m.get(), KPM_LAYOUT_CRS, 1, 1, &out));
    return Matrix(out);
  }
  if (parts.size() != 3 || parts[0] != "sell") throw Usage("--format must be crs or sell:C:sigma");
  kpm_matrix* out = nullptr;
  check(kpm_matrix_convert(m.get(), KPM_LAYOUT_SELL, to_int(parts[1]), to_int(parts[2]), &out));
  return Matrix(out);
}

struct DomainArgs {
  int nx = 8, ny = 8, nz = 8;
  bool periodic_z = false;
  std::string potential = "zero";

  /// zero | uniform:V | superlattice:sx,sy,sz:depth:dot
  kpm_domain domain() const {
    kpm_domain d;
    kpm_domain_init(&d, nx, ny, nz);
    d.periodic_z = periodic_z;
    const auto parts = split(potential, ':');
    if (potential == "zero") return d;
    if (parts.size() == 2 && parts[0] == "uniform") {
      d.potential_kind = KPM_POTENTIAL_UNIFORM;
      d.potential_value = to_double(parts[1]);
      return d;
    }
    if (parts.size() == 4 && parts[0] == "superlattice") {
      const auto sp = split(parts[1], ',');
      if (sp.size() != 3) throw Usage("superlattice spacing needs three values");
      d.potential_kind = KPM_POTENTIAL_SUPERLATTICE;
      for (int k = 0; k < 3; ++k) d.spacing[k] = to_int(sp[k]);
      d.depth = to_double(parts[2]);
      d.dot_size = to_int(parts[3]);
      return d;
    }
    throw Usage("--potential must be zero, uniform:V or superlattice:sx,sy,sz:depth:dot");
  }
};

/// Matrix from --matrix file or --gen nx,ny,nz.
struct Source {
  std::string matrix;
  std::string gen;
  bool periodic_z = false;
  std::string potential = "zero";

  void add(CLI::App* app) {
    auto* m = app->add_option("--matrix", matrix, "Matrix Market input");
    auto* g = app->add_option("--gen", gen, "generate the nx,ny,nz lattice Hamiltonian");
    m->excludes(g);
    app->add_flag("--periodic-z", periodic_z, "with --gen: periodic boundaries in z as well");
    app->add_option("--potential", potential, "with --gen: zero | uniform:V | superlattice:sx,sy,sz:depth:dot");
  }

  Matrix load(const Global& g, int stage, int vectors) const {
    kpm_matrix* out = nullptr;
    if (!matrix.empty()) {
      check(kpm_matrix_read(matrix.c_str(), &out));
    } else {
      if (gen.empty()) throw Usage("one of --matrix or --gen is required");
      const auto dims = split(gen, ',');
      if (dims.size() != 3) throw Usage("--gen takes nx,ny,nz");
      DomainArgs a{to_int(dims[0]), to_int(dims[1]), to_int(dims[2]), periodic_z, potential};
      const kpm_domain d = a.domain();
      check(kpm_check_footprint(&d, stage, vectors, nullptr));
      check(kpm_matrix_generate(&d, &out));
    }
    return with_format(Matrix(out), g.format);
  }
};

FILE* open_out(const std::string& path) {
  if (path.empty()) return stdout;
  FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw Failure{KPM_ERR_IO, "cannot open " + path};
  return f;
}

void close_out(FILE* f) {
  if (f != stdout) std::fclose(f);
  else std::fflush(f);
}

// ---- gen -------------------------------------------------------------

int run_gen(const Global& g, const DomainArgs& a, const std::string& out) {
  const kpm_domain d = a.domain();
  check(kpm_check_footprint(&d, KPM_STAGE_AUG_SPMMV, 1, nullptr));
  kpm_matrix* raw = nullptr;
  check(kpm_matrix_generate(&d, &raw));
  Matrix m(raw);
  check(kpm_matrix_write(m.get(), out.c_str()));
  Matrix f = with_format(std::move(m), g.format);
  kpm_matrix_info info;
  check(kpm_matrix_get_info(f.get(), &info));
  std::printf("N=%lld nnz=%lld nnz_per_row=%.4f stored=%lld padding=%.4f bytes=%llu\n",
              static_cast<long long>(info.rows), static_cast<long long>(info.nnz),
              static_cast<double>(info.nnz) / static_cast<double>(info.rows), static_cast<long long>(info.stored),
              info.padding_fraction, static_cast<unsigned long long>(info.storage_bytes));
  return 0;
}

// ---- dos -------------------------------------------------------------

struct DosArgs {
  Source src;
  int moments = 200;
  int vectors = 1;
  std::string stage = "aug_spmmv";
  std::string damping = "jackson";
  std::string sampling = "chebyshev";
  int points = 0;
  double epsilon = 0.01;
  bool reduce_at_end = false;
  std::string out;
  std::string moments_out;
};

int run_dos(const Global& g, const DosArgs& a) {
  int stage = 0;
  check(kpm_stage_parse(a.stage.c_str(), &stage));
  Matrix m = a.src.load(g, stage, a.vectors);
  kpm_solve_config cfg;
  kpm_solve_config_init(&cfg);
  cfg.moments = a.moments;
  cfg.vectors = a.vectors;
  cfg.seed = g.seed;
  cfg.stage = stage;
  cfg.exec = g.exec;
  cfg.reduce_at_end = a.reduce_at_end;
  check(kpm_bounds_estimate(m.get(), a.epsilon, &cfg.bounds));
  Moments s;
  check(kpm_solve(m.get(), &cfg, s.out()));
  if (!a.moments_out.empty()) check(kpm_moments_write_csv(s.get(), a.moments_out.c_str()));

  kpm_matrix_info info;
  check(kpm_matrix_get_info(m.get(), &info));
  const int damping = a.damping == "jackson" ? KPM_DAMPING_JACKSON
                      : a.damping == "none"  ? KPM_DAMPING_NONE
                                             : throw Usage("--damping must be jackson or none");
  const int sampling = a.sampling == "chebyshev" ? KPM_SAMPLING_CHEBYSHEV
                       : a.sampling == "uniform" ? KPM_SAMPLING_UNIFORM
                                                 : throw Usage("--sampling must be chebyshev or uniform");
  const int points = a.points > 0 ? a.points : 2 * a.moments;
  const double n = static_cast<double>(info.rows);
  if (!a.out.empty()) {
    check(kpm_dos_write_csv(s.get(), &cfg.bounds, n, points, damping, sampling, a.out.c_str()));
    return 0;
  }
  std::vector<double> e(points), rho(points);
  check(kpm_dos_reconstruct(s.get(), &cfg.bounds, n, points, damping, sampling, e.data(), rho.data(), nullptr));
  std::printf("E,rho\n");
  for (int k = 0; k < points; ++k) std::printf("%.17g,%.17g\n", e[k], rho[k]);
  return 0;
}

// ---- bench -----------------------------------------------------------

struct BenchArgs {
  Source src;
  std::string stage = "aug_spmmv";
  std::string mode = "solve";
  std::string widths = "1";
  std::string threads;
  int moments = 100;
  int reps = 3;
  double llc_mib = 25.0;
  double epsilon = 0.01;
  bool overlay = false;
  std::string out;
};

int run_bench(const Global& g, const BenchArgs& a) {
  int stage = 0;
  check(kpm_stage_parse(a.stage.c_str(), &stage));
  const std::vector<int> widths = int_list(a.widths);
  const std::vector<int> threads = a.threads.empty() ? std::vector<int>{g.threads} : int_list(a.threads);
  int widest = 1;
  for (int w : widths) widest = std::max(widest, w);
  Matrix m = a.src.load(g, stage, widest);
  kpm_bounds bounds;
  check(kpm_bounds_estimate(m.get(), a.epsilon, &bounds));
  kpm_bench_spec spec;
  kpm_bench_spec_init(&spec);
  spec.stage = stage;
  if (a.mode == "solve") spec.mode = KPM_BENCH_SOLVE;
  else if (a.mode == "kernel") spec.mode = KPM_BENCH_KERNEL;
  else throw Usage("--mode must be solve or kernel");
  spec.moments = a.moments;
  spec.exec = g.exec;
  spec.reps = a.reps;
  spec.seed = g.seed;
  if (a.llc_mib < 0) throw Usage("--llc-mib must be >= 0");
  spec.llc_bytes = static_cast<std::uint64_t>(a.llc_mib * 1024.0 * 1024.0);
  check(kpm_bench_sweep(m.get(), &bounds, &spec, widths.data(), widths.size(), threads.data(), threads.size(),
                        a.overlay, a.out.empty() ? nullptr : a.out.c_str()));
  return 0;
}

// ---- model -----------------------------------------------------------

struct ModelArgs {
  std::string profile = "ivb";
  std::string config;
  std::string widths = "1..32";
  double nnzr = 13.0;
  double n = 1e6;
  int moments = 2000;
  double omega = 1.0;
  std::optional<double> llc_gflops;
  bool measure_llc = false;
  int llc_vectors = 8;
  int llc_moments = 100;
  bool text = false;
  bool table3 = false;
  std::vector<std::string> resources;
  double total_flops = 0.0;
  std::string out;
};

kpm_machine load_machine(const ModelArgs& a, kpm_arith& arith) {
  kpm_machine mach;
  kpm_arith_default(&arith);
  if (!a.config.empty()) {
    kpm_status st = kpm_model_config_load(a.config.c_str(), a.profile.c_str(), &mach, &arith);
    if (st == KPM_ERR_INVALID_ARGUMENT && kpm_machine_builtin(a.profile.c_str(), &mach) == KPM_OK)
      check(kpm_model_config_load(a.config.c_str(), nullptr, nullptr, &arith));
    else
      check(st);
  } else {
    check(kpm_machine_builtin(a.profile.c_str(), &mach));
  }
  if (a.llc_gflops) {
    mach.llc_gflops = *a.llc_gflops;
    mach.has_llc_gflops = 1;
  }
  return mach;
}

double measure_llc(const Global& g, const ModelArgs& a, const kpm_machine& mach) {
  const std::uint64_t llc = static_cast<std::uint64_t>(mach.llc_mib * 1024.0 * 1024.0);
  if (llc == 0) throw Usage("--measure-llc needs a profile with llc_mib > 0");
  kpm_domain d;
  check(kpm_llc_sized_domain(llc, a.llc_vectors, &d));
  kpm_matrix* raw = nullptr;
  check(kpm_matrix_generate(&d, &raw));
  Matrix m = with_format(Matrix(raw), g.format);
  kpm_bounds bounds;
  check(kpm_bounds_estimate(m.get(), 0.01, &bounds));
  kpm_bench_spec spec;
  kpm_bench_spec_init(&spec);
  spec.stage = KPM_STAGE_AUG_SPMMV;
  spec.vectors = a.llc_vectors;
  spec.moments = a.llc_moments;
  spec.exec = g.exec;
  spec.seed = g.seed;
  spec.llc_bytes = 0;
  kpm_bench_result r;
  check(kpm_bench(m.get(), &bounds, &spec, &r));
  std::fprintf(stderr, "measured P*_LLC = %.4g Gflop/s (aug_spmmv, %dx%dx%d domain, R=%d, %d threads)\n", r.gflops,
               d.nx, d.ny, d.nz, a.llc_vectors, r.threads);
  return r.gflops;
}

int run_resources(const ModelArgs& a, FILE* f) {
  struct Row {
    std::string label;
    double rate, nodes;
  };
  std::vector<Row> rows;
  if (a.table3) {
    rows = {{"aug_spmv", 14.9e12, 288}, {"aug_spmmv*", 107e12, 1024}, {"aug_spmmv", 116e12, 1024}};
  }
  for (const auto& r : a.resources) {
    const auto p = split(r, ':');
    if (p.size() != 3) throw Usage("--resource takes label:tflops:nodes");
    rows.push_back({p[0], to_double(p[1]) * 1e12, to_double(p[2])});
  }
  double total = a.total_flops;
  if (total <= 0.0) {
    // Largest published problem: 6.5e9 rows, N_nzr = 13, R = 32, M = 2000.
    kpm_problem p{6'500'000'000ull, 84'500'000'000ull, 32, 2000};
    check(kpm_model_flops(&p, nullptr, &total));
  }
  std::vector<kpm_resource_row> in;
  for (const auto& r : rows) in.push_back({r.label.c_str(), r.rate, r.nodes, 0.0, 0.0});
  double ratio = 0.0;
  check(kpm_model_resource_compare(total, in.data(), in.size(), &ratio));
  if (a.text) {
    std::fprintf(f, "total flops: %.4g\n", total);
    std::fprintf(f, "%-12s %12s %8s %12s %12s\n", "version", "Tflop/s", "nodes", "seconds", "node_hours");
    for (const auto& r : in)
      std::fprintf(f, "%-12s %12.4g %8.0f %12.4g %12.4g\n", r.label, r.rate_flops * 1e-12, r.nodes, r.seconds,
                   r.node_hours);
    std::fprintf(f, "node-hour ratio %s / %s: %.4f\n", in.front().label, in.back().label, ratio);
  } else {
    std::fprintf(f, "version,tflops,nodes,seconds,node_hours\n");
    for (const auto& r : in)
      std::fprintf(f, "%s,%.17g,%.17g,%.17g,%.17g\n", r.label, r.rate_flops * 1e-12, r.nodes, r.seconds, r.node_hours);
    std::fprintf(f, "# cost_ratio,%.17g\n", ratio);
  }
  return 0;
}

int run_model(const Global& g, const ModelArgs& a) {
  kpm_arith arith;
  kpm_machine mach = load_machine(a, arith);
  FILE* f = open_out(a.out);
  struct Closer {
    FILE* f;
    ~Closer() { close_out(f); }
  } closer{f};
  if (a.table3 || !a.resources.empty()) return run_resources(a, f);

  if (a.measure_llc) {
    mach.llc_gflops = measure_llc(g, a, mach);
    mach.has_llc_gflops = 1;
  }
  double limit = 0.0;
  check(kpm_model_code_balance_limit(a.nnzr, &arith, &limit));
  if (a.text) {
    std::fprintf(f, "profile %s: b = %.4g GB/s, P_peak = %.4g Gflop/s, LLC = %.4g MiB", mach.name, mach.bandwidth_gbs,
                 mach.peak_gflops, mach.llc_mib);
    if (mach.has_llc_gflops) std::fprintf(f, ", P*_LLC = %.4g Gflop/s", mach.llc_gflops);
    std::fprintf(f, "\nN_nzr = %.4g, omega = %.4g, B_min(R->inf) = %.4f B/F\n", a.nnzr, a.omega, limit);
    std::fprintf(f, "%4s %10s %10s %12s %12s %12s %10s\n", "R", "B_min", "B", "P_mem", "P*", "P_custom", "bound by");
  } else {
    std::fprintf(f, "R,b_min,b_limit,omega,b,p_mem_gflops,p_star_gflops,p_custom_gflops,bottleneck\n");
  }
  for (int r : int_list(a.widths)) {
    const double n = std::floor(a.n);
    kpm_problem p{static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(std::llround(a.nnzr * n)), r, a.moments};
    kpm_balance bal;
    check(kpm_model_code_balance(&p, &arith, a.omega, &bal));
    kpm_roofline roof;
    check(kpm_model_roofline(&bal, &mach, &roof));
    if (a.text) {
      char custom[32] = "-";
      if (roof.has_custom) std::snprintf(custom, sizeof custom, "%.4g", roof.p_custom);
      std::fprintf(f, "%4d %10.4f %10.4f %12.4g %12.4g %12s %10s\n", r, bal.b_min, bal.b, roof.p_mem, roof.p_star,
                   custom, kpm_bottleneck_string(roof.bottleneck));
    } else {
      std::fprintf(f, "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,", r, bal.b_min, limit, bal.omega, bal.b, roof.p_mem,
                   roof.p_star);
      if (roof.has_custom) std::fprintf(f, "%.17g", roof.p_custom);
      std::fprintf(f, ",%s\n", kpm_bottleneck_string(roof.bottleneck));
    }
  }
  return 0;
}

// ---- verify ----------------------------------------------------------

void print_check(const kpm_verify_check* c, void*) {
  std::printf("%s %-10s %-28s measured=%-12.6g tol=%-10.3g %s\n", c->passed ? "PASS" : "FAIL", c->suite, c->name,
              c->measured, c->tolerance, c->detail);
  std::fflush(stdout);
}

int run_verify(const Global& g, const std::string& suite) {
  const kpm_status st = kpm_verify(suite.c_str(), &g.exec, g.seed, print_check, nullptr);
  if (st == KPM_ERR_VERIFICATION) {
    std::printf("verify: FAILED\n");
    return kExitFailure;
  }
  check(st);
  std::printf("verify: all checks passed\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kernel polynomial method density-of-states toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--seed", g.seed, "random vector seed");
  app.add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--weights", g.weights, "relative work share per thread, w0,w1,...");
  app.add_option("--format", g.format, "matrix storage: crs | sell:C:sigma");

  DomainArgs gen_args;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "generate the lattice Hamiltonian as Matrix Market");
  gen->add_option("--nx", gen_args.nx)->required();
  gen->add_option("--ny", gen_args.ny)->required();
  gen->add_option("--nz", gen_args.nz)->required();
  gen->add_flag("--periodic-z", gen_args.periodic_z, "periodic boundaries in z as well");
  gen->add_option("--potential", gen_args.potential, "zero | uniform:V | superlattice:sx,sy,sz:depth:dot");
  gen->add_option("--out", gen_out, "output .mtx")->required();

  DosArgs dos_args;
  auto* dos = app.add_subcommand("dos", "compute moments and the density of states");
  dos_args.src.add(dos);
  dos->add_option("--M", dos_args.moments, "number of moments (even)");
  dos->add_option("--R", dos_args.vectors, "number of random vectors");
  dos->add_option("--stage", dos_args.stage, "naive | aug_spmv | aug_spmmv (or 0/1/2)");
  dos->add_option("--damping", dos_args.damping, "jackson | none");
  dos->add_option("--sampling", dos_args.sampling, "chebyshev | uniform");
  dos->add_option("--points", dos_args.points, "DOS sample points (default 2M)");
  dos->add_option("--epsilon", dos_args.epsilon, "spectral bound safety margin");
  dos->add_flag("--reduce-at-end", dos_args.reduce_at_end, "stage 2: defer the cross-thread reduction");
  dos->add_option("--out", dos_args.out, "DOS CSV (default stdout)");
  dos->add_option("--moments-out", dos_args.moments_out, "moments CSV");

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "time solves or kernels and emit sweep CSV");
  bench_args.src.add(bench);
  bench->add_option("--stage", bench_args.stage, "naive | aug_spmv | aug_spmmv (or 0/1/2)");
  bench->add_option("--mode", bench_args.mode, "solve | kernel");
  bench->add_option("--R", bench_args.widths, "block widths, e.g. 1,2,4 or 1..8");
  bench->add_option("--threads-list", bench_args.threads, "thread counts to sweep (default --threads)");
  bench->add_option("--M", bench_args.moments, "moments per solve");
  bench->add_option("--reps", bench_args.reps, "timed repetitions (>= 3)");
  bench->add_option("--llc-mib", bench_args.llc_mib, "simulated LLC size for omega, 0 disables");
  bench->add_option("--epsilon", bench_args.epsilon, "spectral bound safety margin");
  bench->add_flag("--overlay-model", bench_args.overlay, "append the model B_min column");
  bench->add_option("--out", bench_args.out, "CSV output (default stdout)");

  ModelArgs model_args;
  auto* model = app.add_subcommand("model", "code balance and roofline predictions");
  model->add_option("--profile", model_args.profile, "machine profile (ivb, snb, k20m, k20x or from --config)");
  model->add_option("--config", model_args.config, "machine/arith config file");
  model->add_option("--R", model_args.widths, "block widths, e.g. 1..32");
  model->add_option("--nnzr", model_args.nnzr, "nonzeros per row");
  model->add_option("--N", model_args.n, "matrix dimension");
  model->add_option("--M", model_args.moments, "moments");
  model->add_option("--omega", model_args.omega, "traffic inflation factor (>= 1)");
  model->add_option("--llc-gflops", model_args.llc_gflops, "measured cache-resident ceiling P*_LLC");
  model->add_flag("--measure-llc", model_args.measure_llc, "measure P*_LLC on an LLC-sized problem first");
  model->add_option("--llc-R", model_args.llc_vectors, "block width for --measure-llc");
  model->add_flag("--text", model_args.text, "human-readable report instead of CSV");
  model->add_flag("--table3", model_args.table3, "resource comparison with the published large-scale rates");
  model->add_option("--resource", model_args.resources, "label:tflops:nodes entry for a resource comparison");
  model->add_option("--total-flops", model_args.total_flops, "flops of the compared solve");
  model->add_option("--out", model_args.out, "output file (default stdout)");

  std::string suite = "all";
  auto* ver = app.add_subcommand("verify", "run the built-in oracle checks");
  ver->add_option("--suite", suite, "stages | oracle-dos | traffic | formats | all");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    g.finalize();
    if (*gen) return run_gen(g, gen_args, gen_out);
    if (*dos) return run_dos(g, dos_args);
    if (*bench) return run_bench(g, bench_args);
    if (*model) return run_model(g, model_args);
    if (*ver) return run_verify(g, suite);
  } catch (const Usage& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const Failure& f) {
    std::fprintf(stderr, "error: %s: %s\n", kpm_status_string(f.status), f.message.c_str());
    return f.status == KPM_ERR_INVALID_ARGUMENT ? kExitUsage : kExitFailure;
  }
  return kExitUsage;
}
