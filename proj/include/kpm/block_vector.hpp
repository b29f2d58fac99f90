#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "kpm/common.hpp"

namespace kpm {

/// R complex vectors of length n stored interleaved (row-major): element
/// (i, r) lives at offset i*R + r, so a block row is contiguous.
class BlockVector {
 public:
  BlockVector() = default;
  BlockVector(Index rows, int width);

  Index rows() const noexcept { return rows_; }
  int width() const noexcept { return width_; }
  std::size_t size() const noexcept { return data_.size(); }

  Complex& operator()(Index i, int r) noexcept { return data_[static_cast<std::size_t>(i) * width_ + r]; }
  const Complex& operator()(Index i, int r) const noexcept {
    return data_[static_cast<std::size_t>(i) * width_ + r];
  }

  Complex* row(Index i) noexcept { return data_.data() + static_cast<std::size_t>(i) * width_; }
  const Complex* row(Index i) const noexcept { return data_.data() + static_cast<std::size_t>(i) * width_; }

  std::span<Complex> data() noexcept { return data_; }
  std::span<const Complex> data() const noexcept { return data_; }

  /// Copy of column r as a width-1 block.
  BlockVector column(int r) const;
  void set_column(int r, const BlockVector& col);
  void fill(Complex value);

  bool same_shape(const BlockVector& o) const noexcept { return rows_ == o.rows_ && width_ == o.width_; }

 private:
  Index rows_ = 0;
  int width_ = 0;
  std::vector<Complex> data_;
};

/// Counter-based unit-modulus phase generator.
///
/// The phase of entry (row, column) is a pure function of (seed, column, row),
/// computed with the SplitMix64 finalizer over the three counters. Columns can
/// therefore be generated independently and in any order, and column r of a
/// width-R block is identical to the width-1 block drawn with first_column=r.
Complex random_phase(std::uint64_t seed, std::uint64_t column, std::uint64_t row) noexcept;

/// Block whose column r holds phases of global column first_column + r.
BlockVector random_block_vector(Index n, int width, std::uint64_t seed, int first_column = 0);

/// result[r] = sum_i conj(x(i,r)) * y(i,r).
std::vector<Complex> column_dot(const BlockVector& x, const BlockVector& y, const ExecPolicy& exec = {});
/// result[r] = <x_r|x_r>, the squared Euclidean norm of each column.
std::vector<double> column_nrm2(const BlockVector& x, const ExecPolicy& exec = {});

/// Raw dump: "KPMBLKV1" magic, uint64 n, uint64 R, uint32 element type
/// (1 = complex double), then n*R little-endian (re, im) pairs in row-major order.
void write_block_vector(const BlockVector& v, const std::filesystem::path& path);
BlockVector read_block_vector(const std::filesystem::path& path);

}  // namespace kpm
