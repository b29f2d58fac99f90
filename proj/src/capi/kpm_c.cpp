#include "kpm/kpm.h"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <new>
#include <string>

#include "kpm/bench.hpp"

struct kpm_matrix {
  kpm::SparseMatrix m;
};

struct kpm_moments {
  kpm::MomentSeries s;
};

namespace {

thread_local std::string last_error;

kpm_status to_status(kpm::Errc code) {
  switch (code) {
    case kpm::Errc::invalid_argument: return KPM_ERR_INVALID_ARGUMENT;
    case kpm::Errc::dimension_mismatch: return KPM_ERR_DIMENSION;
    case kpm::Errc::sizing: return KPM_ERR_SIZING;
    case kpm::Errc::io: return KPM_ERR_IO;
    case kpm::Errc::numeric: return KPM_ERR_NUMERIC;
    case kpm::Errc::verification: return KPM_ERR_VERIFICATION;
  }
  return KPM_ERR_INTERNAL;
}

template <class Fn>
kpm_status guard(Fn&& fn) noexcept {
  try {
    fn();
    last_error.clear();
    return KPM_OK;
  } catch (const kpm::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return KPM_ERR_SIZING;
  } catch (const std::exception& e) {
    last_error = e.what();
    return KPM_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return KPM_ERR_INTERNAL;
  }
}

template <class T>
const T& deref(const T* p, const char* what) {
  if (!p) kpm::fail(kpm::Errc::invalid_argument, std::string(what) + " is NULL");
  return *p;
}

void need(const void* p, const char* what) {
  if (!p) kpm::fail(kpm::Errc::invalid_argument, std::string(what) + " is NULL");
}

kpm::Stage stage_of(int s) {
  kpm::require(s >= 0 && s <= 2, kpm::Errc::invalid_argument, "stage must be 0, 1 or 2");
  return static_cast<kpm::Stage>(s);
}

kpm::Damping damping_of(int d) {
  kpm::require(d == KPM_DAMPING_NONE || d == KPM_DAMPING_JACKSON, kpm::Errc::invalid_argument, "unknown damping");
  return d == KPM_DAMPING_NONE ? kpm::Damping::none : kpm::Damping::jackson;
}

kpm::Sampling sampling_of(int s) {
  kpm::require(s == KPM_SAMPLING_CHEBYSHEV || s == KPM_SAMPLING_UNIFORM, kpm::Errc::invalid_argument,
               "unknown sampling");
  return s == KPM_SAMPLING_CHEBYSHEV ? kpm::Sampling::chebyshev : kpm::Sampling::uniform;
}

kpm::ExecPolicy exec_of(const kpm_exec* e) {
  kpm::ExecPolicy p;
  if (!e) return p;
  p.threads = e->threads;
  if (e->weights && e->num_weights) p.weights.assign(e->weights, e->weights + e->num_weights);
  p.validate();
  return p;
}

kpm::Domain domain_of(const kpm_domain& d) {
  kpm::Domain out;
  out.nx = d.nx;
  out.ny = d.ny;
  out.nz = d.nz;
  out.periodic_z = d.periodic_z != 0;
  switch (d.potential_kind) {
    case KPM_POTENTIAL_ZERO: break;
    case KPM_POTENTIAL_UNIFORM: out.potential = kpm::PotentialSpec::uniform(d.potential_value); break;
    case KPM_POTENTIAL_SUPERLATTICE:
      out.potential = kpm::PotentialSpec::superlattice({d.spacing[0], d.spacing[1], d.spacing[2]}, d.depth, d.dot_size);
      break;
    default: kpm::fail(kpm::Errc::invalid_argument, "unknown potential kind");
  }
  out.validate();
  return out;
}

kpm::SpectralBounds bounds_of(const kpm_bounds& b) {
  kpm::require(b.a > 0.0, kpm::Errc::invalid_argument, "bounds.a must be positive");
  return {b.a, b.b, b.epsilon};
}

kpm::ArithmeticSpec arith_of(const kpm_arith* a) {
  if (!a) return {};
  return {a->value_bytes, a->index_bytes, a->flops_add, a->flops_mul};
}

kpm::ProblemSpec problem_of(const kpm_problem& p) { return {p.n, p.nnz, p.vectors, p.moments}; }

kpm::KpmConfig config_of(const kpm_solve_config& c) {
  kpm::KpmConfig k;
  k.moments = c.moments;
  k.vectors = c.vectors;
  k.seed = c.seed;
  k.stage = stage_of(c.stage);
  k.bounds = bounds_of(c.bounds);
  k.exec = exec_of(&c.exec);
  k.reduce_at_end = c.reduce_at_end != 0;
  return k;
}

kpm::BenchSpec bench_of(const kpm_bench_spec& s) {
  kpm::BenchSpec b;
  b.stage = stage_of(s.stage);
  kpm::require(s.mode == KPM_BENCH_SOLVE || s.mode == KPM_BENCH_KERNEL, kpm::Errc::invalid_argument,
               "unknown bench mode");
  b.mode = s.mode == KPM_BENCH_SOLVE ? kpm::BenchMode::solve : kpm::BenchMode::kernel;
  b.vectors = s.vectors;
  b.moments = s.moments;
  b.exec = exec_of(&s.exec);
  b.reps = s.reps;
  b.seed = s.seed;
  b.llc_bytes = s.llc_bytes;
  return b;
}

void copy_traffic(const kpm::TrafficCounters& c, kpm_traffic* out) {
  if (!out) return;
  *out = {c.bytes_matrix_values, c.bytes_matrix_indices, c.bytes_vector_reads,
          c.bytes_vector_writes, c.flops_add,            c.flops_mul};
}

void copy_machine(const kpm::MachineProfile& p, kpm_machine* out) {
  kpm_machine m{};
  std::snprintf(m.name, sizeof m.name, "%s", p.name.c_str());
  m.bandwidth_gbs = p.bandwidth_gbs;
  m.peak_gflops = p.peak_gflops;
  m.llc_mib = p.llc_mib;
  m.has_llc_gflops = p.llc_gflops.has_value();
  m.llc_gflops = p.llc_gflops.value_or(0.0);
  *out = m;
}

void copy_bench(const kpm::BenchResult& r, kpm_bench_result* out) {
  kpm_bench_result b{};
  std::snprintf(b.kernel, sizeof b.kernel, "%s", r.kernel.c_str());
  b.stage = static_cast<int>(r.stage);
  b.n = r.n;
  b.nnz = r.nnz;
  b.vectors = r.vectors;
  b.moments = r.moments;
  b.threads = r.threads;
  b.time_s = r.time_s;
  b.flops = r.flops;
  b.bytes = r.bytes;
  b.gflops = r.gflops;
  b.bw_gbs = r.bw_gbs;
  b.omega = r.omega;
  b.reps = r.reps;
  b.seed = r.seed;
  *out = b;
}

kpm::BenchResult bench_from(const kpm_bench_result& b) {
  kpm::BenchResult r;
  r.kernel = b.kernel;
  r.stage = stage_of(b.stage);
  r.n = b.n;
  r.nnz = b.nnz;
  r.vectors = b.vectors;
  r.moments = b.moments;
  r.threads = b.threads;
  r.time_s = b.time_s;
  r.flops = b.flops;
  r.bytes = b.bytes;
  r.gflops = b.gflops;
  r.bw_gbs = b.bw_gbs;
  r.omega = b.omega;
  r.reps = b.reps;
  r.seed = b.seed;
  return r;
}

}  // namespace

extern "C" {

const char* kpm_version(void) { return "1.0.0"; }

const char* kpm_status_string(kpm_status status) {
  switch (status) {
    case KPM_OK: return "ok";
    case KPM_ERR_INVALID_ARGUMENT: return "invalid argument";
    case KPM_ERR_DIMENSION: return "dimension mismatch";
    case KPM_ERR_SIZING: return "sizing error";
    case KPM_ERR_IO: return "i/o error";
    case KPM_ERR_NUMERIC: return "numeric error";
    case KPM_ERR_VERIFICATION: return "verification failed";
    case KPM_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* kpm_last_error(void) { return last_error.c_str(); }

void kpm_domain_init(kpm_domain* d, int nx, int ny, int nz) {
  if (!d) return;
  *d = kpm_domain{};
  d->nx = nx;
  d->ny = ny;
  d->nz = nz;
  d->potential_kind = KPM_POTENTIAL_ZERO;
  d->spacing[0] = d->spacing[1] = d->spacing[2] = 1;
  d->dot_size = 1;
}

void kpm_exec_init(kpm_exec* e) {
  if (e) *e = kpm_exec{1, nullptr, 0};
}

kpm_status kpm_matrix_generate(const kpm_domain* d, kpm_matrix** out) {
  return guard([&] {
    need(out, "out");
    const kpm::Domain dom = domain_of(deref(d, "domain"));
    *out = new kpm_matrix{kpm::build_hamiltonian(dom)};
  });
}

kpm_status kpm_matrix_read(const char* path, kpm_matrix** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = new kpm_matrix{kpm::read_matrix_market(path)};
  });
}

kpm_status kpm_matrix_write(const kpm_matrix* m, const char* path) {
  return guard([&] {
    need(path, "path");
    kpm::write_matrix_market(deref(m, "matrix").m, path);
  });
}

kpm_status kpm_matrix_convert(const kpm_matrix* m, int layout, int chunk_height, int sigma, kpm_matrix** out) {
  return guard([&] {
    need(out, "out");
    const kpm::SparseMatrix& src = deref(m, "matrix").m;
    const kpm::SparseMatrix crs = src.layout() == kpm::Layout::crs ? src : kpm::sell_to_crs(src);
    if (layout == KPM_LAYOUT_CRS) *out = new kpm_matrix{crs};
    else if (layout == KPM_LAYOUT_SELL) *out = new kpm_matrix{kpm::crs_to_sell(crs, chunk_height, sigma)};
    else kpm::fail(kpm::Errc::invalid_argument, "unknown layout");
  });
}

kpm_status kpm_matrix_get_info(const kpm_matrix* m, kpm_matrix_info* info) {
  return guard([&] {
    need(info, "info");
    const kpm::SparseMatrix& s = deref(m, "matrix").m;
    *info = {s.rows(),
             s.cols(),
             s.nnz(),
             s.stored(),
             s.layout() == kpm::Layout::crs ? KPM_LAYOUT_CRS : KPM_LAYOUT_SELL,
             s.chunk_height(),
             s.sigma(),
             s.padding_fraction(),
             s.storage_bytes()};
  });
}

void kpm_matrix_free(kpm_matrix* m) { delete m; }

kpm_status kpm_check_footprint(const kpm_domain* d, int stage, int vectors, uint64_t* bytes) {
  return guard([&] {
    const kpm::Domain dom = domain_of(deref(d, "domain"));
    const kpm::Stage s = stage_of(stage);
    if (bytes) *bytes = kpm::estimate_footprint(dom, s, vectors);
    kpm::check_footprint(dom, s, vectors);
  });
}

kpm_status kpm_bounds_estimate(const kpm_matrix* m, double epsilon, kpm_bounds* out) {
  return guard([&] {
    need(out, "out");
    const kpm::SpectralBounds b = kpm::estimate_bounds(deref(m, "matrix").m, epsilon);
    *out = {b.a, b.b, b.epsilon};
  });
}

kpm_status kpm_stage_parse(const char* text, int* stage) {
  return guard([&] {
    need(text, "text");
    need(stage, "stage");
    *stage = static_cast<int>(kpm::parse_stage(text));
  });
}

const char* kpm_stage_string(int stage) {
  if (stage < 0 || stage > 2) return "?";
  return kpm::to_string(static_cast<kpm::Stage>(stage));
}

void kpm_solve_config_init(kpm_solve_config* c) {
  if (!c) return;
  *c = kpm_solve_config{};
  c->moments = 200;
  c->vectors = 1;
  c->seed = 1;
  c->stage = KPM_STAGE_AUG_SPMMV;
  c->bounds = {1.0, 0.0, 0.01};
  kpm_exec_init(&c->exec);
}

kpm_status kpm_solve(const kpm_matrix* m, const kpm_solve_config* c, kpm_moments** out) {
  return guard([&] {
    need(out, "out");
    const kpm::KpmConfig cfg = config_of(deref(c, "config"));
    *out = new kpm_moments{kpm::run_kpm(deref(m, "matrix").m, cfg)};
  });
}

kpm_status kpm_solve_counted(const kpm_matrix* m, const kpm_solve_config* c, uint64_t llc_bytes, kpm_moments** out,
                             kpm_traffic* measured, kpm_traffic* ideal) {
  return guard([&] {
    const kpm::KpmConfig cfg = config_of(deref(c, "config"));
    kpm::CountOptions opt;
    if (llc_bytes) {
      opt.mode = kpm::CountOptions::Mode::llc;
      opt.llc_bytes = llc_bytes;
    }
    kpm::TrafficMeter meter(opt);
    kpm::MomentSeries s = kpm::run_kpm(deref(m, "matrix").m, cfg, &meter);
    copy_traffic(meter.measured(), measured);
    copy_traffic(meter.ideal(), ideal);
    if (out) *out = new kpm_moments{std::move(s)};
  });
}

uint64_t kpm_traffic_total_bytes(const kpm_traffic* t) {
  if (!t) return 0;
  return t->bytes_matrix_values + t->bytes_matrix_indices + t->bytes_vector_reads + t->bytes_vector_writes;
}

kpm_status kpm_moments_shape(const kpm_moments* s, int* moments, int* vectors) {
  return guard([&] {
    const kpm::MomentSeries& m = deref(s, "moments").s;
    if (moments) *moments = m.moments;
    if (vectors) *vectors = m.vectors;
  });
}

kpm_status kpm_moments_get_mu(const kpm_moments* s, double* mu, size_t len) {
  return guard([&] {
    need(mu, "mu");
    const kpm::MomentSeries& m = deref(s, "moments").s;
    kpm::require(len >= m.mu.size(), kpm::Errc::dimension_mismatch, "mu buffer too small");
    std::memcpy(mu, m.mu.data(), m.mu.size() * sizeof(double));
  });
}

kpm_status kpm_moments_get_eta(const kpm_moments* s, int vector, double* re_im, size_t len) {
  return guard([&] {
    need(re_im, "re_im");
    const kpm::MomentSeries& m = deref(s, "moments").s;
    kpm::require(vector >= 0 && vector < m.vectors, kpm::Errc::invalid_argument, "vector index out of range");
    const auto& eta = m.eta[vector];
    kpm::require(len >= 2 * eta.size(), kpm::Errc::dimension_mismatch, "eta buffer too small");
    for (std::size_t k = 0; k < eta.size(); ++k) {
      re_im[2 * k] = eta[k].real();
      re_im[2 * k + 1] = eta[k].imag();
    }
  });
}

kpm_status kpm_moments_write_csv(const kpm_moments* s, const char* path) {
  return guard([&] {
    need(path, "path");
    kpm::write_moments_csv(deref(s, "moments").s, path);
  });
}

void kpm_moments_free(kpm_moments* s) { delete s; }

kpm_status kpm_dos_reconstruct(const kpm_moments* s, const kpm_bounds* b, double n, int points, int damping,
                               int sampling, double* energies, double* rho, double* weights) {
  return guard([&] {
    need(energies, "energies");
    need(rho, "rho");
    const kpm::DosCurve c = kpm::reconstruct_dos(deref(s, "moments").s.mu, bounds_of(deref(b, "bounds")), n, points,
                                                 damping_of(damping), sampling_of(sampling));
    std::memcpy(energies, c.energies.data(), c.energies.size() * sizeof(double));
    std::memcpy(rho, c.rho.data(), c.rho.size() * sizeof(double));
    if (weights) std::memcpy(weights, c.weights.data(), c.weights.size() * sizeof(double));
  });
}

kpm_status kpm_dos_integrate(const kpm_moments* s, const kpm_bounds* b, double n, double e_lo, double e_hi,
                             int damping, double* states) {
  return guard([&] {
    need(states, "states");
    *states = kpm::integrate_dos(deref(s, "moments").s.mu, bounds_of(deref(b, "bounds")), n, e_lo, e_hi,
                                 damping_of(damping));
  });
}

kpm_status kpm_dos_write_csv(const kpm_moments* s, const kpm_bounds* b, double n, int points, int damping,
                             int sampling, const char* path) {
  return guard([&] {
    need(path, "path");
    const kpm::DosCurve c = kpm::reconstruct_dos(deref(s, "moments").s.mu, bounds_of(deref(b, "bounds")), n, points,
                                                 damping_of(damping), sampling_of(sampling));
    kpm::write_dos_csv(c, path);
  });
}

void kpm_arith_default(kpm_arith* a) {
  if (!a) return;
  const kpm::ArithmeticSpec d;
  *a = {d.value_bytes, d.index_bytes, d.flops_add, d.flops_mul};
}

kpm_status kpm_machine_builtin(const char* name, kpm_machine* out) {
  return guard([&] {
    need(name, "name");
    need(out, "out");
    copy_machine(kpm::builtin_profile(name), out);
  });
}

kpm_status kpm_model_config_load(const char* path, const char* profile, kpm_machine* machine, kpm_arith* arith) {
  return guard([&] {
    need(path, "path");
    const kpm::ModelConfig cfg = kpm::load_model_config(path);
    if (machine) {
      need(profile, "profile");
      copy_machine(cfg.profile(profile), machine);
    }
    if (arith) *arith = {cfg.arith.value_bytes, cfg.arith.index_bytes, cfg.arith.flops_add, cfg.arith.flops_mul};
  });
}

kpm_status kpm_model_v_kpm(int stage, const kpm_problem* p, const kpm_arith* a, double* bytes) {
  return guard([&] {
    need(bytes, "bytes");
    *bytes = kpm::v_kpm(stage_of(stage), problem_of(deref(p, "problem")), arith_of(a));
  });
}

kpm_status kpm_model_flops(const kpm_problem* p, const kpm_arith* a, double* flops) {
  return guard([&] {
    need(flops, "flops");
    *flops = kpm::kpm_flops(problem_of(deref(p, "problem")), arith_of(a));
  });
}

kpm_status kpm_model_function_cost(const char* function, const kpm_problem* p, const kpm_arith* a,
                                   double* bytes_per_call, double* flops_per_call, double* calls) {
  return guard([&] {
    need(function, "function");
    const kpm::FunctionCost c =
        kpm::table1_cost(kpm::parse_function(function), problem_of(deref(p, "problem")), arith_of(a));
    if (bytes_per_call) *bytes_per_call = c.bytes_per_call;
    if (flops_per_call) *flops_per_call = c.flops_per_call;
    if (calls) *calls = c.calls;
  });
}

kpm_status kpm_model_code_balance(const kpm_problem* p, const kpm_arith* a, double omega, kpm_balance* out) {
  return guard([&] {
    need(out, "out");
    const kpm::BalanceReport r = kpm::code_balance(problem_of(deref(p, "problem")), arith_of(a), omega);
    kpm_balance b{};
    b.v_min = r.v_min;
    b.flops = r.flops;
    b.b_min = r.b_min;
    b.omega = r.omega;
    b.b = r.b;
    for (const auto& st : r.stages) {
      b.stage_bytes[static_cast<int>(st.stage)] = st.bytes;
      b.stage_balance[static_cast<int>(st.stage)] = st.balance;
    }
    *out = b;
  });
}

kpm_status kpm_model_code_balance_limit(double nnz_per_row, const kpm_arith* a, double* b_min) {
  return guard([&] {
    need(b_min, "b_min");
    *b_min = kpm::code_balance_limit(nnz_per_row, arith_of(a));
  });
}

const char* kpm_bottleneck_string(int bottleneck) {
  switch (bottleneck) {
    case KPM_BOTTLENECK_MEMORY: return kpm::to_string(kpm::Bottleneck::memory);
    case KPM_BOTTLENECK_LLC: return kpm::to_string(kpm::Bottleneck::llc);
    case KPM_BOTTLENECK_CORE: return kpm::to_string(kpm::Bottleneck::core);
  }
  return "?";
}

kpm_status kpm_model_roofline(const kpm_balance* b, const kpm_machine* m, kpm_roofline* out) {
  return guard([&] {
    need(out, "out");
    const kpm_balance& bal = deref(b, "balance");
    const kpm_machine& mc = deref(m, "machine");
    kpm::BalanceReport r;
    r.v_min = bal.v_min;
    r.flops = bal.flops;
    r.b_min = bal.b_min;
    r.omega = bal.omega;
    r.b = bal.b;
    kpm::MachineProfile p{mc.name, mc.bandwidth_gbs, mc.peak_gflops, mc.llc_mib, std::nullopt};
    if (mc.has_llc_gflops) p.llc_gflops = mc.llc_gflops;
    const kpm::RooflinePrediction pr = kpm::roofline(r, p);
    *out = {pr.p_mem, pr.p_star, pr.p_custom.value_or(0.0), pr.p_custom.has_value(), static_cast<int>(pr.bottleneck),
            pr.bound()};
  });
}

kpm_status kpm_model_resource_compare(double total_flops, kpm_resource_row* rows, size_t count, double* cost_ratio) {
  return guard([&] {
    need(rows, "rows");
    std::vector<kpm::ResourceEntry> in;
    for (size_t k = 0; k < count; ++k) in.push_back({rows[k].label ? rows[k].label : "", rows[k].rate_flops, rows[k].nodes});
    const kpm::ResourceTable t = kpm::resource_compare(total_flops, in);
    for (size_t k = 0; k < count; ++k) {
      rows[k].seconds = t.rows[k].seconds;
      rows[k].node_hours = t.rows[k].node_hours;
    }
    if (cost_ratio) *cost_ratio = t.cost_ratio;
  });
}

void kpm_bench_spec_init(kpm_bench_spec* s) {
  if (!s) return;
  const kpm::BenchSpec d;
  *s = kpm_bench_spec{};
  s->stage = static_cast<int>(d.stage);
  s->mode = KPM_BENCH_SOLVE;
  s->vectors = d.vectors;
  s->moments = d.moments;
  kpm_exec_init(&s->exec);
  s->reps = d.reps;
  s->seed = d.seed;
  s->llc_bytes = d.llc_bytes;
}

kpm_status kpm_bench(const kpm_matrix* m, const kpm_bounds* b, const kpm_bench_spec* s, kpm_bench_result* out) {
  return guard([&] {
    need(out, "out");
    const kpm::BenchResult r =
        kpm::bench_kernel(deref(m, "matrix").m, bounds_of(deref(b, "bounds")), bench_of(deref(s, "spec")));
    copy_bench(r, out);
  });
}

const char* kpm_sweep_header(void) { return kpm::kSweepHeader; }

kpm_status kpm_bench_format_row(const kpm_bench_result* r, char* buf, size_t len) {
  return guard([&] {
    need(buf, "buf");
    const std::string row = kpm::sweep_row(bench_from(deref(r, "result")));
    kpm::require(len > row.size(), kpm::Errc::dimension_mismatch, "row buffer too small");
    std::memcpy(buf, row.c_str(), row.size() + 1);
  });
}

kpm_status kpm_bench_sweep(const kpm_matrix* m, const kpm_bounds* b, const kpm_bench_spec* base, const int* widths,
                           size_t num_widths, const int* threads, size_t num_threads, int overlay_model,
                           const char* path) {
  return guard([&] {
    need(widths, "widths");
    need(threads, "threads");
    const std::vector<int> w(widths, widths + num_widths);
    const std::vector<int> t(threads, threads + num_threads);
    const kpm::SparseMatrix& h = deref(m, "matrix").m;
    const kpm::SpectralBounds bounds = bounds_of(deref(b, "bounds"));
    const kpm::BenchSpec spec = bench_of(deref(base, "spec"));
    if (!path) {
      kpm::sweep(h, bounds, spec, w, t, std::cout, overlay_model != 0);
      return;
    }
    std::ofstream out(path);
    if (!out) kpm::fail(kpm::Errc::io, std::string("cannot open ") + path);
    kpm::sweep(h, bounds, spec, w, t, out, overlay_model != 0);
    if (!out) kpm::fail(kpm::Errc::io, std::string("write failed: ") + path);
  });
}

kpm_status kpm_simulated_omega(const kpm_matrix* m, int stage, int vectors, int moments, uint64_t llc_bytes,
                               double* omega) {
  return guard([&] {
    need(omega, "omega");
    kpm::require(llc_bytes > 0, kpm::Errc::invalid_argument, "llc_bytes must be positive");
    *omega = kpm::simulated_omega(deref(m, "matrix").m, stage_of(stage), vectors, moments, llc_bytes);
  });
}

kpm_status kpm_llc_sized_domain(uint64_t llc_bytes, int vectors, kpm_domain* out) {
  return guard([&] {
    need(out, "out");
    const kpm::Domain d = kpm::llc_sized_domain(llc_bytes, vectors);
    kpm_domain_init(out, d.nx, d.ny, d.nz);
  });
}

kpm_status kpm_verify(const char* suite, const kpm_exec* exec, uint64_t seed, kpm_verify_callback cb, void* user) {
  bool passed = true;
  const kpm_status st = guard([&] {
    need(suite, "suite");
    const kpm::VerifyReport rep = kpm::verify(suite, exec_of(exec), seed);
    for (const auto& c : rep.checks) {
      if (!cb) continue;
      const kpm_verify_check out{c.suite.c_str(), c.name.c_str(), c.passed, c.measured, c.tolerance, c.detail.c_str()};
      cb(&out, user);
    }
    passed = rep.passed();
  });
  if (st != KPM_OK) return st;
  if (!passed) {
    last_error = "one or more verification checks failed";
    return KPM_ERR_VERIFICATION;
  }
  return KPM_OK;
}

}  // extern "C"
