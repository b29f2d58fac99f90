#include "kpm/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kpm {

PotentialSpec PotentialSpec::uniform(double v) {
  PotentialSpec p;
  p.kind = Kind::uniform;
  p.value = v;
  return p;
}

PotentialSpec PotentialSpec::superlattice(std::array<int, 3> spacing, double depth, int dot_size) {
  PotentialSpec p;
  p.kind = Kind::superlattice;
  p.spacing = spacing;
  p.depth = depth;
  p.dot_size = dot_size;
  p.validate();
  return p;
}

void PotentialSpec::validate() const {
  if (kind != Kind::superlattice) return;
  for (int s : spacing) require(s >= 1, Errc::invalid_argument, "superlattice spacing must be >= 1");
  require(dot_size >= 1, Errc::invalid_argument, "superlattice dot size must be >= 1");
}

double PotentialSpec::at(int x, int y, int z) const noexcept {
  switch (kind) {
    case Kind::zero:
      return 0.0;
    case Kind::uniform:
      return value;
    case Kind::superlattice:
      return (x % spacing[0] < dot_size && y % spacing[1] < dot_size && z % spacing[2] < dot_size)
                 ? depth
                 : 0.0;
  }
  return 0.0;
}

void Domain::validate() const {
  require(nx >= 1 && ny >= 1 && nz >= 1, Errc::invalid_argument, "lattice extents must be >= 1");
  potential.validate();
  if (dimension() > std::numeric_limits<Index>::max())
    fail(Errc::sizing, "matrix dimension 4*nx*ny*nz = " + std::to_string(dimension()) +
                           " exceeds the 32-bit index range");
}

Block4 operator*(const Block4& x, const Block4& y) {
  Block4 out{};
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k)
      for (int j = 0; j < 4; ++j) out[i][j] += x[i][k] * y[k][j];
  return out;
}

Block4 adjoint(const Block4& x) {
  Block4 out{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out[i][j] = std::conj(x[j][i]);
  return out;
}

namespace {

using Pauli = std::array<std::array<Complex, 2>, 2>;

constexpr Complex I{0.0, 1.0};
const Pauli kId{{{1.0, 0.0}, {0.0, 1.0}}};
const Pauli kSx{{{0.0, 1.0}, {1.0, 0.0}}};
const Pauli kSy{{{0.0, -I}, {I, 0.0}}};
const Pauli kSz{{{1.0, 0.0}, {0.0, -1.0}}};

Block4 kron(const Pauli& orbital, const Pauli& spin) {
  Block4 out{};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) out[2 * a + c][2 * b + d] = orbital[a][b] * spin[c][d];
  return out;
}

Block4 scaled_sum(Complex s, const Block4& x, Complex u, const Block4& y) {
  Block4 out{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out[i][j] = s * x[i][j] + u * y[i][j];
  return out;
}

}  // namespace

GammaSet GammaSet::dirac() {
  return {{kron(kId, kId), kron(kSz, kId), kron(kSx, kSx), kron(kSx, kSy), kron(kSx, kSz)}};
}

Block4 hopping_block(int axis) {
  require(axis >= 0 && axis < 3, Errc::invalid_argument, "hopping axis must be 0, 1 or 2");
  static const GammaSet g = GammaSet::dirac();
  // -t (Gamma^1 - i Gamma^{axis+2}) / 2
  return scaled_sum(-kHopping * 0.5, g.gamma[1], kHopping * 0.5 * I, g.gamma[axis + 2]);
}

Block4 onsite_block(double potential) {
  static const GammaSet g = GammaSet::dirac();
  return scaled_sum(potential, g.gamma[0], 2.0, g.gamma[1]);
}

namespace {

struct SiteRow {
  std::array<std::pair<std::int64_t, Block4>, 7> blocks;
  int count = 0;

  void add(std::int64_t col_site, const Block4& b) {
    for (int k = 0; k < count; ++k) {
      if (blocks[k].first == col_site) {
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j) blocks[k].second[i][j] += b[i][j];
        return;
      }
    }
    blocks[count++] = {col_site, b};
  }

  void sort() {
    std::sort(blocks.begin(), blocks.begin() + count,
              [](const auto& x, const auto& y) { return x.first < y.first; });
  }
};

SiteRow assemble_site(const Domain& d, int x, int y, int z, const std::array<Block4, 3>& hop,
                      const std::array<Block4, 3>& hop_adj) {
  auto site = [&](int sx, int sy, int sz) { return std::int64_t{sx} + std::int64_t{d.nx} * (sy + std::int64_t{d.ny} * sz); };
  SiteRow row;
  row.add(site(x, y, z), onsite_block(d.potential.at(x, y, z)));

  const std::array<int, 3> ext{d.nx, d.ny, d.nz};
  const std::array<bool, 3> periodic{true, true, d.periodic_z};
  const std::array<int, 3> pos{x, y, z};
  for (int axis = 0; axis < 3; ++axis) {
    for (int dir : {-1, +1}) {
      std::array<int, 3> p = pos;
      p[axis] += dir;
      if (p[axis] < 0 || p[axis] >= ext[axis]) {
        if (!periodic[axis]) continue;
        p[axis] = (p[axis] + ext[axis]) % ext[axis];
      }
      // Row n couples to n - e_j through T_j and to n + e_j through T_j^dagger.
      row.add(site(p[0], p[1], p[2]), dir < 0 ? hop[axis] : hop_adj[axis]);
    }
  }
  row.sort();
  return row;
}

}  // namespace

SparseMatrix build_hamiltonian(const Domain& domain) {
  domain.validate();
  const std::int64_t sites = domain.sites();
  const auto n = static_cast<Index>(domain.dimension());

  std::array<Block4, 3> hop, hop_adj;
  for (int axis = 0; axis < 3; ++axis) {
    hop[axis] = hopping_block(axis);
    hop_adj[axis] = adjoint(hop[axis]);
  }

  auto coords = [&](std::int64_t s) {
    const int x = static_cast<int>(s % domain.nx);
    const int y = static_cast<int>((s / domain.nx) % domain.ny);
    const int z = static_cast<int>(s / (std::int64_t{domain.nx} * domain.ny));
    return std::array<int, 3>{x, y, z};
  };

  std::vector<Offset> row_ptr(static_cast<std::size_t>(n) + 1, 0);
#pragma omp parallel for schedule(static)
  for (std::int64_t s = 0; s < sites; ++s) {
    const auto [x, y, z] = coords(s);
    const SiteRow sr = assemble_site(domain, x, y, z, hop, hop_adj);
    for (int alpha = 0; alpha < 4; ++alpha) {
      Offset len = 0;
      for (int k = 0; k < sr.count; ++k)
        for (int beta = 0; beta < 4; ++beta) len += sr.blocks[k].second[alpha][beta] != Complex{} ? 1 : 0;
      row_ptr[4 * s + alpha + 1] = len;
    }
  }
  for (Index i = 0; i < n; ++i) row_ptr[i + 1] += row_ptr[i];

  std::vector<Index> cols(row_ptr.back());
  std::vector<Complex> vals(row_ptr.back());
#pragma omp parallel for schedule(static)
  for (std::int64_t s = 0; s < sites; ++s) {
    const auto [x, y, z] = coords(s);
    const SiteRow sr = assemble_site(domain, x, y, z, hop, hop_adj);
    for (int alpha = 0; alpha < 4; ++alpha) {
      Offset at = row_ptr[4 * s + alpha];
      for (int k = 0; k < sr.count; ++k) {
        for (int beta = 0; beta < 4; ++beta) {
          const Complex v = sr.blocks[k].second[alpha][beta];
          if (v == Complex{}) continue;
          cols[at] = static_cast<Index>(4 * sr.blocks[k].first + beta);
          vals[at] = v;
          ++at;
        }
      }
    }
  }
  return SparseMatrix::from_crs(n, n, std::move(row_ptr), std::move(cols), std::move(vals));
}

SpectralBounds estimate_bounds(const SparseMatrix& m, double epsilon) {
  require(m.rows() == m.cols(), Errc::dimension_mismatch, "spectral bounds need a square matrix");
  require(m.rows() > 0, Errc::invalid_argument, "spectral bounds need a non-empty matrix");
  require(epsilon > 0.0 && epsilon < 0.5, Errc::invalid_argument, "epsilon must lie in (0, 0.5)");

  std::vector<double> center(m.rows(), 0.0), radius(m.rows(), 0.0);
  m.for_each_entry([&](Index i, Index j, Complex v) {
    if (i == j) {
      center[i] += v.real();
      radius[i] += std::abs(v.imag());
    } else {
      radius[i] += std::abs(v);
    }
  });
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (Index i = 0; i < m.rows(); ++i) {
    lo = std::min(lo, center[i] - radius[i]);
    hi = std::max(hi, center[i] + radius[i]);
  }
  SpectralBounds out;
  out.epsilon = epsilon;
  out.b = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  out.a = half > 0.0 ? (1.0 - epsilon) / half : 1.0 - epsilon;
  return out;
}

SparseMatrix apply_shift_scale(const SparseMatrix& m, const SpectralBounds& bounds) {
  require(m.rows() == m.cols(), Errc::dimension_mismatch, "shift/scale needs a square matrix");
  const SparseMatrix crs = m.layout() == Layout::crs ? m : sell_to_crs(m);
  const auto rp = crs.row_ptr();
  const auto cols = crs.col_idx();
  const auto vals = crs.values();
  const Index n = crs.rows();

  std::vector<Offset> row_ptr(static_cast<std::size_t>(n) + 1, 0);
  for (Index i = 0; i < n; ++i) {
    const bool has_diag = std::find(cols.begin() + rp[i], cols.begin() + rp[i + 1], i) != cols.begin() + rp[i + 1];
    row_ptr[i + 1] = row_ptr[i] + (rp[i + 1] - rp[i]) + (has_diag ? 0 : 1);
  }
  std::vector<Index> out_cols(row_ptr.back());
  std::vector<Complex> out_vals(row_ptr.back());
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) {
    std::vector<std::pair<Index, Complex>> row;
    row.reserve(static_cast<std::size_t>(rp[i + 1] - rp[i]) + 1);
    bool has_diag = false;
    for (Offset k = rp[i]; k < rp[i + 1]; ++k) {
      if (cols[k] == i) {
        has_diag = true;
        row.emplace_back(i, bounds.a * (vals[k] - bounds.b));
      } else {
        row.emplace_back(cols[k], bounds.a * vals[k]);
      }
    }
    if (!has_diag) row.emplace_back(i, Complex{-bounds.a * bounds.b, 0.0});
    std::sort(row.begin(), row.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    for (std::size_t k = 0; k < row.size(); ++k) {
      out_cols[row_ptr[i] + k] = row[k].first;
      out_vals[row_ptr[i] + k] = row[k].second;
    }
  }
  return SparseMatrix::from_crs(n, n, std::move(row_ptr), std::move(out_cols), std::move(out_vals));
}

}  // namespace kpm
