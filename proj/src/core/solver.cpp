#include "kpm/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace kpm {

const char* to_string(Stage s) noexcept {
  switch (s) {
    case Stage::naive:
      return "naive";
    case Stage::aug_spmv:
      return "aug_spmv";
    case Stage::aug_spmmv:
      return "aug_spmmv";
  }
  return "?";
}

Stage parse_stage(const std::string& s) {
  if (s == "naive" || s == "0" || s == "stage0") return Stage::naive;
  if (s == "aug_spmv" || s == "1" || s == "stage1") return Stage::aug_spmv;
  if (s == "aug_spmmv" || s == "2" || s == "stage2") return Stage::aug_spmmv;
  fail(Errc::invalid_argument, "unknown stage '" + s + "' (naive|aug_spmv|aug_spmmv)");
}

void KpmConfig::validate() const {
  require(moments >= 2 && moments % 2 == 0, Errc::invalid_argument, "number of moments M must be even and >= 2");
  require(vectors >= 1, Errc::invalid_argument, "number of random vectors R must be >= 1");
  require(bounds.a > 0.0 && std::isfinite(bounds.a) && std::isfinite(bounds.b), Errc::invalid_argument,
          "spectral scale a must be positive and finite");
  exec.validate();
}

namespace {

void check_operator(const SparseMatrix& h, const KpmConfig& config) {
  config.validate();
  require(h.rows() == h.cols(), Errc::dimension_mismatch, "KPM needs a square matrix");
  require(h.rows() >= 1, Errc::dimension_mismatch, "KPM needs a non-empty matrix");
}

MomentSeries make_series(const KpmConfig& config) {
  MomentSeries s;
  s.moments = config.moments;
  s.vectors = config.vectors;
  s.seed = config.seed;
  s.stage = config.stage;
  s.eta.assign(config.vectors, std::vector<Complex>(config.moments));
  return s;
}

}  // namespace

MomentSeries kpm_naive(const SparseMatrix& h, const KpmConfig& config, TrafficMeter* meter) {
  check_operator(h, config);
  MomentSeries out = make_series(config);
  const Index n = h.rows();
  const double a = config.bounds.a;
  const double b = config.bounds.b;
  const auto& ex = config.exec;

  BlockVector u(n, 1);
  for (int r = 0; r < config.vectors; ++r) {
    BlockVector v = random_block_vector(n, 1, config.seed, r);
    BlockVector w(n, 1);
    auto& eta = out.eta[r];
    for (int m = 0; m < config.moments / 2; ++m) {
      if (m > 0) std::swap(v, w);
      const double scale = m == 0 ? 0.5 * a : a;
      spmv(h, v, u, ex, meter);
      axpy(u, -b, v, ex, meter);
      scal(w, -1.0, ex, meter);
      axpy(w, 2.0 * scale, u, ex, meter);
      eta[2 * m] = nrm2(v, ex, meter)[0];
      eta[2 * m + 1] = dot(w, v, ex, meter)[0];
    }
  }
  out.mu = average_moments(out.eta);
  return out;
}

MomentSeries kpm_stage1(const SparseMatrix& h, const KpmConfig& config, TrafficMeter* meter) {
  check_operator(h, config);
  MomentSeries out = make_series(config);
  const Index n = h.rows();
  for (int r = 0; r < config.vectors; ++r) {
    BlockVector v = random_block_vector(n, 1, config.seed, r);
    BlockVector w(n, 1);
    auto& eta = out.eta[r];
    for (int m = 0; m < config.moments / 2; ++m) {
      if (m > 0) std::swap(v, w);
      const double scale = m == 0 ? 0.5 * config.bounds.a : config.bounds.a;
      const AugmentedResult res = aug_spmv(h, scale, config.bounds.b, v, w, config.exec, meter);
      eta[2 * m] = res.eta_even[0];
      eta[2 * m + 1] = res.eta_odd[0];
    }
  }
  out.mu = average_moments(out.eta);
  return out;
}

MomentSeries kpm_stage2(const SparseMatrix& h, const KpmConfig& config, TrafficMeter* meter) {
  check_operator(h, config);
  MomentSeries out = make_series(config);
  const Index n = h.rows();
  const int nr = config.vectors;
  const int steps = config.moments / 2;

  BlockVector v = random_block_vector(n, nr, config.seed, 0);
  BlockVector w(n, nr);
  std::vector<PartialDots> deferred;
  if (config.reduce_at_end) deferred.reserve(steps);

  auto store = [&](int m, const AugmentedResult& res) {
    for (int r = 0; r < nr; ++r) {
      out.eta[r][2 * m] = res.eta_even[r];
      out.eta[r][2 * m + 1] = res.eta_odd[r];
    }
  };

  for (int m = 0; m < steps; ++m) {
    if (m > 0) std::swap(v, w);
    const double scale = m == 0 ? 0.5 * config.bounds.a : config.bounds.a;
    PartialDots dots = aug_spmmv_partial(h, scale, config.bounds.b, v, w, config.exec, meter);
    if (config.reduce_at_end) deferred.push_back(std::move(dots));
    else store(m, dots.reduce());
  }
  for (int m = 0; m < static_cast<int>(deferred.size()); ++m) store(m, deferred[m].reduce());

  out.mu = average_moments(out.eta);
  return out;
}

MomentSeries run_kpm(const SparseMatrix& h, const KpmConfig& config, TrafficMeter* meter) {
  switch (config.stage) {
    case Stage::naive:
      return kpm_naive(h, config, meter);
    case Stage::aug_spmv:
      return kpm_stage1(h, config, meter);
    case Stage::aug_spmmv:
      return kpm_stage2(h, config, meter);
  }
  fail(Errc::invalid_argument, "unknown stage");
}

std::vector<double> average_moments(const std::vector<std::vector<Complex>>& eta) {
  require(!eta.empty(), Errc::invalid_argument, "need at least one moment series");
  const std::size_t moments = eta.front().size();
  require(moments >= 2, Errc::invalid_argument, "need at least two moments");
  for (const auto& e : eta) require(e.size() == moments, Errc::dimension_mismatch, "moment series differ in length");

  const double count = static_cast<double>(eta.size());
  std::vector<Complex> mean(moments);
  for (const auto& e : eta) {
    const double eta0 = e[0].real();
    if (!(eta0 > 0.0)) fail(Errc::numeric, "eta_0 = <nu_0|nu_0> must be positive");
    const Complex mu1 = e[1] / eta0;
    mean[0] += 1.0;
    mean[1] += mu1;
    for (std::size_t k = 2; k < moments; ++k)
      mean[k] += (k % 2 == 0) ? 2.0 * e[k] / eta0 - 1.0 : 2.0 * e[k] / eta0 - mu1;
  }

  std::vector<double> mu(moments);
  for (std::size_t k = 0; k < moments; ++k) {
    const Complex v = mean[k] / count;
    if (std::abs(v.imag()) >= 1e-10)
      fail(Errc::numeric, "moment " + std::to_string(k) + " has imaginary part " + std::to_string(v.imag()) +
                              "; operator is not Hermitian");
    mu[k] = v.real();
  }
  return mu;
}

Damping parse_damping(const std::string& s) {
  if (s == "jackson") return Damping::jackson;
  if (s == "none") return Damping::none;
  fail(Errc::invalid_argument, "unknown damping '" + s + "' (jackson|none)");
}

std::vector<double> jackson_kernel(int moments) {
  require(moments >= 1, Errc::invalid_argument, "Jackson kernel needs M >= 1");
  const double mp1 = moments + 1.0;
  const double q = std::numbers::pi / mp1;
  const double cot = std::cos(q) / std::sin(q);
  std::vector<double> g(moments);
  for (int m = 0; m < moments; ++m)
    g[m] = ((mp1 - m) * std::cos(q * m) + std::sin(q * m) * cot) / mp1;
  return g;
}

std::vector<double> damping_coefficients(int moments, Damping damping) {
  if (damping == Damping::jackson) return jackson_kernel(moments);
  return std::vector<double>(moments, 1.0);
}

double DosCurve::integral() const {
  double s = 0.0;
  for (std::size_t k = 0; k < rho.size(); ++k) s += weights[k] * rho[k];
  return s;
}

namespace {

/// sum_m c_m mu_m cos(m theta) with c_0 = g_0, c_m = 2 g_m.
double chebyshev_series(std::span<const double> mu, std::span<const double> g, double theta) {
  double s = g[0] * mu[0];
  for (std::size_t m = 1; m < mu.size(); ++m) s += 2.0 * g[m] * mu[m] * std::cos(static_cast<double>(m) * theta);
  return s;
}

}  // namespace

DosCurve reconstruct_dos(std::span<const double> mu, const SpectralBounds& bounds, double n, int points,
                         Damping damping, Sampling sampling) {
  require(mu.size() >= 2, Errc::invalid_argument, "DOS reconstruction needs M >= 2");
  require(points >= 2, Errc::invalid_argument, "DOS reconstruction needs K >= 2 sample points");
  require(bounds.a > 0.0, Errc::invalid_argument, "spectral scale a must be positive");
  const auto g = damping_coefficients(static_cast<int>(mu.size()), damping);
  const double pi = std::numbers::pi;
  const double k_count = points;

  DosCurve out;
  out.energies.resize(points);
  out.rho.resize(points);
  out.weights.resize(points);
  for (int k = 0; k < points; ++k) {
    double x = 0.0;
    double w = 0.0;
    if (sampling == Sampling::chebyshev) {
      // ascending Chebyshev nodes
      x = -std::cos(pi * (k + 0.5) / k_count);
      w = pi * std::sqrt(1.0 - x * x) / k_count;
    } else {
      x = -1.0 + (k + 0.5) * 2.0 / k_count;
      w = 2.0 / k_count;
    }
    require(std::abs(x) < 1.0, Errc::invalid_argument, "sample abscissa outside (-1, 1)");
    const double theta = std::acos(x);
    const double rho_x = chebyshev_series(mu, g, theta) / (pi * std::sqrt(1.0 - x * x));
    out.energies[k] = x / bounds.a + bounds.b;
    out.rho[k] = n * bounds.a * rho_x;
    out.weights[k] = w / bounds.a;
  }
  return out;
}

double integrate_dos(std::span<const double> mu, const SpectralBounds& bounds, double n, double e_lo, double e_hi,
                     Damping damping) {
  require(mu.size() >= 1, Errc::invalid_argument, "need at least one moment");
  require(e_lo <= e_hi, Errc::invalid_argument, "integration window must satisfy e_lo <= e_hi");
  const auto g = damping_coefficients(static_cast<int>(mu.size()), damping);
  const double x1 = std::clamp(bounds.a * (e_lo - bounds.b), -1.0, 1.0);
  const double x2 = std::clamp(bounds.a * (e_hi - bounds.b), -1.0, 1.0);
  const double t1 = std::acos(x1);
  const double t2 = std::acos(x2);
  double s = g[0] * mu[0] * (t1 - t2);
  for (std::size_t m = 1; m < mu.size(); ++m) {
    const double md = static_cast<double>(m);
    s += 2.0 * g[m] * mu[m] * (std::sin(md * t1) - std::sin(md * t2)) / md;
  }
  return n * s / std::numbers::pi;
}

void write_moments_csv(const MomentSeries& s, const std::filesystem::path& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) fail(Errc::io, "cannot open " + path.string() + " for writing");
  std::fprintf(f, "m,mu\n");
  for (std::size_t m = 0; m < s.mu.size(); ++m) std::fprintf(f, "%zu,%.17g\n", m, s.mu[m]);
  if (std::fclose(f) != 0) fail(Errc::io, "error writing " + path.string());
}

void write_dos_csv(const DosCurve& dos, const std::filesystem::path& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) fail(Errc::io, "cannot open " + path.string() + " for writing");
  std::fprintf(f, "E,rho\n");
  for (std::size_t k = 0; k < dos.rho.size(); ++k) std::fprintf(f, "%.17g,%.17g\n", dos.energies[k], dos.rho[k]);
  if (std::fclose(f) != 0) fail(Errc::io, "error writing " + path.string());
}

}  // namespace kpm
