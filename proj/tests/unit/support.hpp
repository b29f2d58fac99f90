#pragma once

#include <Eigen/Dense>

#include "kpm/block_vector.hpp"
#include "kpm/lattice.hpp"

namespace kpm::test {

inline Domain box(int nx, int ny, int nz, bool periodic_z = false) {
  Domain d;
  d.nx = nx;
  d.ny = ny;
  d.nz = nz;
  d.periodic_z = periodic_z;
  return d;
}

inline Eigen::MatrixXcd dense(const SparseMatrix& h) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(h.rows(), h.cols());
  h.for_each_entry([&](Index i, Index j, Complex v) { m(i, j) += v; });
  return m;
}

inline Eigen::MatrixXcd dense(const BlockVector& v) {
  Eigen::MatrixXcd m(v.rows(), v.width());
  for (Index i = 0; i < v.rows(); ++i)
    for (int r = 0; r < v.width(); ++r) m(i, r) = v(i, r);
  return m;
}

/// Small random Hermitian CRS matrix with a few zero rows possible.
inline SparseMatrix random_hermitian(Index n, double density, unsigned seed) {
  std::vector<Entry> list;
  std::uint64_t s = seed * 0x9E3779B97F4A7C15ull + 1;
  auto next = [&] {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    return static_cast<double>(s >> 11) * 0x1.0p-53;
  };
  for (Index i = 0; i < n; ++i) {
    list.push_back({i, i, Complex(next() - 0.5, 0.0)});
    for (Index j = i + 1; j < n; ++j) {
      if (next() >= density) continue;
      const Complex v(next() - 0.5, next() - 0.5);
      list.push_back({i, j, v});
      list.push_back({j, i, std::conj(v)});
    }
  }
  return from_entries(n, n, std::move(list));
}

}  // namespace kpm::test
