#pragma once

#include <array>

#include "kpm/sparse_matrix.hpp"

namespace kpm {

/// External on-site potential V_n.
struct PotentialSpec {
  enum class Kind { zero, uniform, superlattice };

  Kind kind = Kind::zero;
  double value = 0.0;                  // uniform
  std::array<int, 3> spacing{1, 1, 1}; // superlattice period per axis
  double depth = 0.0;                  // superlattice dot potential
  int dot_size = 1;                    // superlattice dot edge length

  static PotentialSpec zero() { return {}; }
  static PotentialSpec uniform(double v);
  /// Cuboid dots of edge dot_size repeated every spacing[axis] sites.
  static PotentialSpec superlattice(std::array<int, 3> spacing, double depth, int dot_size);

  double at(int x, int y, int z) const noexcept;
  void validate() const;
};

/// nx * ny * nz sample of the four-band topological insulator model.
/// Boundaries are periodic in x and y and open in z unless periodic_z is set.
struct Domain {
  int nx = 1;
  int ny = 1;
  int nz = 1;
  PotentialSpec potential;
  bool periodic_z = false;

  std::int64_t sites() const noexcept { return std::int64_t{nx} * ny * nz; }
  /// Matrix dimension N = 4 * nx * ny * nz.
  std::int64_t dimension() const noexcept { return 4 * sites(); }
  void validate() const;
};

using Block4 = std::array<std::array<Complex, 4>, 4>;

/// Gamma^0 = 1 and four anticommuting Hermitian Dirac matrices built from
/// Pauli products: Gamma^1 = sz(x)1, Gamma^{2,3,4} = sx(x)s_{x,y,z}.
struct GammaSet {
  std::array<Block4, 5> gamma;

  static GammaSet dirac();
};

Block4 operator*(const Block4& x, const Block4& y);
Block4 adjoint(const Block4& x);

/// Shift/scale for the Chebyshev interval: H~ = a (H - b 1).
struct SpectralBounds {
  double a = 1.0;
  double b = 0.0;
  double epsilon = 0.01;

  /// Energy interval [b - 1/a, b + 1/a] that maps onto [-1, 1].
  double e_min() const noexcept { return b - 1.0 / a; }
  double e_max() const noexcept { return b + 1.0 / a; }
};

inline constexpr double kHopping = 1.0;

/// Hopping block between site n and n + e_j (j = 0, 1, 2 for x, y, z):
/// -t (Gamma^1 - i Gamma^{j+2}) / 2 sits at block (n + e_j, n).
Block4 hopping_block(int axis);
/// On-site block V Gamma^0 + 2 Gamma^1.
Block4 onsite_block(double potential);

/// Assembles the Hermitian CRS Hamiltonian; structural zeros inside the 4x4
/// blocks are dropped. Rows are ordered site-major with site index
/// x + nx*(y + ny*z) and four internal components per site.
SparseMatrix build_hamiltonian(const Domain& domain);

/// Gershgorin enclosure [lo, hi]; b is its midpoint and a = (1 - eps)/halfwidth.
/// A zero-width enclosure (multiple of the identity) yields a = 1 - eps.
SpectralBounds estimate_bounds(const SparseMatrix& m, double epsilon = 0.01);

/// Returns a (H - b 1) in CRS with every diagonal entry stored explicitly.
SparseMatrix apply_shift_scale(const SparseMatrix& m, const SpectralBounds& bounds);

}  // namespace kpm
