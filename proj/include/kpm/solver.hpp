#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "kpm/kernels.hpp"
#include "kpm/lattice.hpp"

namespace kpm {

enum class Stage { naive, aug_spmv, aug_spmmv };

const char* to_string(Stage s) noexcept;
Stage parse_stage(const std::string& s);

struct KpmConfig {
  int moments = 200;   // M, even
  int vectors = 1;     // R
  std::uint64_t seed = 1;
  Stage stage = Stage::aug_spmmv;
  SpectralBounds bounds;
  ExecPolicy exec;
  /// Stage 2 only: keep per-worker dot partials for every step and combine
  /// them once after the loop instead of after every sweep.
  bool reduce_at_end = false;

  void validate() const;
};

/// eta[r][m] for every random vector r and m < M, plus the averaged mu.
struct MomentSeries {
  int moments = 0;
  int vectors = 0;
  std::uint64_t seed = 0;
  Stage stage = Stage::aug_spmmv;
  std::vector<std::vector<Complex>> eta;
  std::vector<double> mu;
};

// All drivers work on H together with (a, b) from config.bounds and never
// materialize H~. The start-up step nu_1 = H~ nu_0 is executed as one regular
// sweep with scale a/2 and w = 0, so every random vector costs exactly M/2
// sweeps. With a meter the sweeps run counted (serially).

/// Literal BLAS-1 chain: spmv, axpy, scal, axpy, nrm2, dot per step.
MomentSeries kpm_naive(const SparseMatrix& h, const KpmConfig& config, TrafficMeter* meter = nullptr);
/// One aug_spmv per step, outer loop over random vectors.
MomentSeries kpm_stage1(const SparseMatrix& h, const KpmConfig& config, TrafficMeter* meter = nullptr);
/// All R vectors advance in lockstep through aug_spmmv.
MomentSeries kpm_stage2(const SparseMatrix& h, const KpmConfig& config, TrafficMeter* meter = nullptr);
/// Dispatches on config.stage.
MomentSeries run_kpm(const SparseMatrix& h, const KpmConfig& config, TrafficMeter* meter = nullptr);

/// Stochastic-trace average of normalized moments via
/// mu_2m = 2 eta_2m / eta_0 - 1 and mu_2m+1 = 2 eta_2m+1 / eta_0 - mu_1.
std::vector<double> average_moments(const std::vector<std::vector<Complex>>& eta);

enum class Damping { none, jackson };

Damping parse_damping(const std::string& s);

/// Jackson kernel coefficients g_0..g_{M-1}.
std::vector<double> jackson_kernel(int moments);
std::vector<double> damping_coefficients(int moments, Damping damping);

enum class Sampling { chebyshev, uniform };

/// rho(E) sampled at K points; weights[k] integrate the curve: sum w_k rho_k
/// approximates the integral of rho over the Chebyshev interval.
struct DosCurve {
  std::vector<double> energies;
  std::vector<double> rho;
  std::vector<double> weights;

  double integral() const;
};

/// Density of states of an n-dimensional operator, ascending in energy.
DosCurve reconstruct_dos(std::span<const double> mu, const SpectralBounds& bounds, double n, int points,
                         Damping damping = Damping::jackson, Sampling sampling = Sampling::chebyshev);

/// Exact integral of the damped expansion over [e_lo, e_hi] (clipped to the
/// Chebyshev interval), i.e. the expected number of states in that window.
double integrate_dos(std::span<const double> mu, const SpectralBounds& bounds, double n, double e_lo, double e_hi,
                     Damping damping = Damping::jackson);

/// CSV "m,mu" with full round-trip precision.
void write_moments_csv(const MomentSeries& s, const std::filesystem::path& path);
/// CSV "E,rho".
void write_dos_csv(const DosCurve& dos, const std::filesystem::path& path);

}  // namespace kpm
