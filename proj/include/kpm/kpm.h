#ifndef KPM_KPM_H
#define KPM_KPM_H

#include <stddef.h>
#include <stdint.h>

#if defined(KPM_BUILDING_LIBRARY)
#define KPM_API __attribute__((visibility("default")))
#else
#define KPM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Every fallible call returns a status; on failure kpm_last_error() holds a
 * message for the calling thread. Output arguments are untouched on failure. */
typedef enum kpm_status {
  KPM_OK = 0,
  KPM_ERR_INVALID_ARGUMENT = 1,
  KPM_ERR_DIMENSION = 2,
  KPM_ERR_SIZING = 3,
  KPM_ERR_IO = 4,
  KPM_ERR_NUMERIC = 5,
  KPM_ERR_VERIFICATION = 6,
  KPM_ERR_INTERNAL = 7
} kpm_status;

KPM_API const char* kpm_version(void);
KPM_API const char* kpm_status_string(kpm_status status);
KPM_API const char* kpm_last_error(void);

typedef struct kpm_matrix kpm_matrix;
typedef struct kpm_moments kpm_moments;

/* ---- lattice ---------------------------------------------------------- */

typedef enum kpm_potential_kind {
  KPM_POTENTIAL_ZERO = 0,
  KPM_POTENTIAL_UNIFORM = 1,
  KPM_POTENTIAL_SUPERLATTICE = 2
} kpm_potential_kind;

typedef struct kpm_domain {
  int nx, ny, nz;
  int periodic_z;
  int potential_kind;
  double potential_value; /* uniform */
  int spacing[3];         /* superlattice */
  double depth;
  int dot_size;
} kpm_domain;

KPM_API void kpm_domain_init(kpm_domain* d, int nx, int ny, int nz);

typedef struct kpm_exec {
  int threads;
  const double* weights; /* optional, one per thread */
  size_t num_weights;
} kpm_exec;

KPM_API void kpm_exec_init(kpm_exec* e);

typedef enum kpm_layout { KPM_LAYOUT_CRS = 0, KPM_LAYOUT_SELL = 1 } kpm_layout;

typedef struct kpm_matrix_info {
  int64_t rows, cols;
  int64_t nnz;    /* true nonzeros */
  int64_t stored; /* including SELL padding */
  int layout;
  int chunk_height, sigma;
  double padding_fraction;
  uint64_t storage_bytes;
} kpm_matrix_info;

KPM_API kpm_status kpm_matrix_generate(const kpm_domain* d, kpm_matrix** out);
KPM_API kpm_status kpm_matrix_read(const char* path, kpm_matrix** out);
KPM_API kpm_status kpm_matrix_write(const kpm_matrix* m, const char* path);
/* KPM_LAYOUT_CRS ignores chunk_height and sigma. */
KPM_API kpm_status kpm_matrix_convert(const kpm_matrix* m, int layout, int chunk_height, int sigma, kpm_matrix** out);
KPM_API kpm_status kpm_matrix_get_info(const kpm_matrix* m, kpm_matrix_info* info);
KPM_API void kpm_matrix_free(kpm_matrix* m);

/* Bytes a solve on d would need; KPM_ERR_SIZING when above available memory. */
KPM_API kpm_status kpm_check_footprint(const kpm_domain* d, int stage, int vectors, uint64_t* bytes);

typedef struct kpm_bounds {
  double a, b, epsilon;
} kpm_bounds;

KPM_API kpm_status kpm_bounds_estimate(const kpm_matrix* m, double epsilon, kpm_bounds* out);

/* ---- solver ----------------------------------------------------------- */

typedef enum kpm_stage { KPM_STAGE_NAIVE = 0, KPM_STAGE_AUG_SPMV = 1, KPM_STAGE_AUG_SPMMV = 2 } kpm_stage;

KPM_API kpm_status kpm_stage_parse(const char* text, int* stage);
KPM_API const char* kpm_stage_string(int stage);

typedef struct kpm_solve_config {
  int moments;
  int vectors;
  uint64_t seed;
  int stage;
  kpm_bounds bounds;
  kpm_exec exec;
  int reduce_at_end;
} kpm_solve_config;

KPM_API void kpm_solve_config_init(kpm_solve_config* c);
KPM_API kpm_status kpm_solve(const kpm_matrix* m, const kpm_solve_config* c, kpm_moments** out);

typedef struct kpm_traffic {
  uint64_t bytes_matrix_values;
  uint64_t bytes_matrix_indices;
  uint64_t bytes_vector_reads;
  uint64_t bytes_vector_writes;
  uint64_t flops_add;
  uint64_t flops_mul;
} kpm_traffic;

/* Serial solve with traffic counting. llc_bytes == 0 counts a perfect cache;
 * otherwise the gathered vector runs through a simulated LRU of that size.
 * out may be NULL. */
KPM_API kpm_status kpm_solve_counted(const kpm_matrix* m, const kpm_solve_config* c, uint64_t llc_bytes,
                                     kpm_moments** out, kpm_traffic* measured, kpm_traffic* ideal);
KPM_API uint64_t kpm_traffic_total_bytes(const kpm_traffic* t);

KPM_API kpm_status kpm_moments_shape(const kpm_moments* s, int* moments, int* vectors);
/* mu must hold `moments` doubles. */
KPM_API kpm_status kpm_moments_get_mu(const kpm_moments* s, double* mu, size_t len);
/* re_im holds 2*moments doubles, interleaved. */
KPM_API kpm_status kpm_moments_get_eta(const kpm_moments* s, int vector, double* re_im, size_t len);
KPM_API kpm_status kpm_moments_write_csv(const kpm_moments* s, const char* path);
KPM_API void kpm_moments_free(kpm_moments* s);

typedef enum kpm_damping { KPM_DAMPING_NONE = 0, KPM_DAMPING_JACKSON = 1 } kpm_damping;
typedef enum kpm_sampling { KPM_SAMPLING_CHEBYSHEV = 0, KPM_SAMPLING_UNIFORM = 1 } kpm_sampling;

/* Fills `points` samples in ascending energy; weights may be NULL. */
KPM_API kpm_status kpm_dos_reconstruct(const kpm_moments* s, const kpm_bounds* b, double n, int points, int damping,
                                       int sampling, double* energies, double* rho, double* weights);
KPM_API kpm_status kpm_dos_integrate(const kpm_moments* s, const kpm_bounds* b, double n, double e_lo, double e_hi,
                                     int damping, double* states);
KPM_API kpm_status kpm_dos_write_csv(const kpm_moments* s, const kpm_bounds* b, double n, int points, int damping,
                                     int sampling, const char* path);

/* ---- performance model ------------------------------------------------ */

typedef struct kpm_arith {
  double value_bytes, index_bytes, flops_add, flops_mul;
} kpm_arith;

KPM_API void kpm_arith_default(kpm_arith* a);

typedef struct kpm_machine {
  char name[64];
  double bandwidth_gbs;
  double peak_gflops;
  double llc_mib;
  double llc_gflops;
  int has_llc_gflops;
} kpm_machine;

KPM_API kpm_status kpm_machine_builtin(const char* name, kpm_machine* out);
/* Loads a config file. profile may be NULL when only [arith] is wanted;
 * machine or arith may be NULL. */
KPM_API kpm_status kpm_model_config_load(const char* path, const char* profile, kpm_machine* machine, kpm_arith* arith);

typedef struct kpm_problem {
  uint64_t n, nnz;
  int vectors, moments;
} kpm_problem;

/* arith may be NULL for the double complex defaults. */
KPM_API kpm_status kpm_model_v_kpm(int stage, const kpm_problem* p, const kpm_arith* a, double* bytes);
KPM_API kpm_status kpm_model_flops(const kpm_problem* p, const kpm_arith* a, double* flops);
KPM_API kpm_status kpm_model_function_cost(const char* function, const kpm_problem* p, const kpm_arith* a,
                                           double* bytes_per_call, double* flops_per_call, double* calls);

typedef struct kpm_balance {
  double v_min, flops, b_min, omega, b;
  double stage_bytes[3];
  double stage_balance[3];
} kpm_balance;

KPM_API kpm_status kpm_model_code_balance(const kpm_problem* p, const kpm_arith* a, double omega, kpm_balance* out);
KPM_API kpm_status kpm_model_code_balance_limit(double nnz_per_row, const kpm_arith* a, double* b_min);

typedef enum kpm_bottleneck { KPM_BOTTLENECK_MEMORY = 0, KPM_BOTTLENECK_LLC = 1, KPM_BOTTLENECK_CORE = 2 } kpm_bottleneck;

typedef struct kpm_roofline {
  double p_mem, p_star, p_custom;
  int has_custom;
  int bottleneck;
  double bound;
} kpm_roofline;

KPM_API const char* kpm_bottleneck_string(int bottleneck);
KPM_API kpm_status kpm_model_roofline(const kpm_balance* b, const kpm_machine* m, kpm_roofline* out);

/* label, rate_flops and nodes are inputs; seconds and node_hours outputs. */
typedef struct kpm_resource_row {
  const char* label;
  double rate_flops;
  double nodes;
  double seconds;
  double node_hours;
} kpm_resource_row;

/* cost_ratio = node_hours(rows[0]) / node_hours(rows[count-1]). */
KPM_API kpm_status kpm_model_resource_compare(double total_flops, kpm_resource_row* rows, size_t count,
                                              double* cost_ratio);

/* ---- benchmarks ------------------------------------------------------- */

typedef enum kpm_bench_mode { KPM_BENCH_SOLVE = 0, KPM_BENCH_KERNEL = 1 } kpm_bench_mode;

typedef struct kpm_bench_spec {
  int stage;
  int mode;
  int vectors;
  int moments;
  kpm_exec exec;
  int reps;
  uint64_t seed;
  uint64_t llc_bytes; /* 0 skips the omega simulation */
} kpm_bench_spec;

typedef struct kpm_bench_result {
  char kernel[32];
  int stage;
  uint64_t n, nnz;
  int vectors, moments, threads;
  double time_s, flops, bytes, gflops, bw_gbs, omega;
  int reps;
  uint64_t seed;
} kpm_bench_result;

KPM_API void kpm_bench_spec_init(kpm_bench_spec* s);
KPM_API kpm_status kpm_bench(const kpm_matrix* m, const kpm_bounds* b, const kpm_bench_spec* s, kpm_bench_result* out);
KPM_API const char* kpm_sweep_header(void);
KPM_API kpm_status kpm_bench_format_row(const kpm_bench_result* r, char* buf, size_t len);
/* Writes sweep CSV to path, or stdout when path is NULL. */
KPM_API kpm_status kpm_bench_sweep(const kpm_matrix* m, const kpm_bounds* b, const kpm_bench_spec* base,
                                   const int* widths, size_t num_widths, const int* threads, size_t num_threads,
                                   int overlay_model, const char* path);
KPM_API kpm_status kpm_simulated_omega(const kpm_matrix* m, int stage, int vectors, int moments, uint64_t llc_bytes,
                                       double* omega);
KPM_API kpm_status kpm_llc_sized_domain(uint64_t llc_bytes, int vectors, kpm_domain* out);

/* ---- verification ----------------------------------------------------- */

typedef struct kpm_verify_check {
  const char* suite;
  const char* name;
  int passed;
  double measured;
  double tolerance;
  const char* detail;
} kpm_verify_check;

typedef void (*kpm_verify_callback)(const kpm_verify_check* check, void* user);

/* Runs a suite (stages, oracle-dos, traffic, formats, all) and reports each
 * check through cb. Returns KPM_ERR_VERIFICATION when any check failed. */
KPM_API kpm_status kpm_verify(const char* suite, const kpm_exec* exec, uint64_t seed, kpm_verify_callback cb,
                              void* user);

#ifdef __cplusplus
}
#endif

#endif
