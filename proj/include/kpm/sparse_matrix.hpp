#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "kpm/common.hpp"

namespace kpm {

enum class Layout { crs, sell };

/// Square or rectangular complex sparse matrix in CRS or SELL-C-sigma layout.
///
/// CRS: row_ptr (nrows+1 offsets), col_idx and values of length nnz.
///
/// SELL-C-sigma: rows are sorted by descending length inside windows of
/// sigma rows (stable, so ties keep their original order), then packed into
/// chunks of C rows. Chunk c holds chunk_len[c] columns stored column-major
/// starting at chunk_ptr[c], i.e. element k of the row in slot s lives at
/// chunk_ptr[c] + k*C + s. Rows shorter than chunk_len[c] are padded with
/// value 0 and a valid column index. row_perm[p] is the original row that
/// occupies sorted position p. SELL-1-1 stores exactly the CRS value sequence.
///
/// Matrices are immutable after construction.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  /// Validates and adopts CRS arrays. Column indices within a row need not be
  /// sorted but must lie in [0, ncols).
  static SparseMatrix from_crs(Index nrows, Index ncols, std::vector<Offset> row_ptr,
                               std::vector<Index> col_idx, std::vector<Complex> values);

  Index rows() const noexcept { return nrows_; }
  Index cols() const noexcept { return ncols_; }
  Layout layout() const noexcept { return layout_; }
  int chunk_height() const noexcept { return chunk_height_; }
  int sigma() const noexcept { return sigma_; }

  /// True nonzeros (padding excluded).
  Offset nnz() const noexcept { return nnz_; }
  /// Stored value slots, padding included. Equals nnz() for CRS.
  Offset stored() const noexcept { return static_cast<Offset>(values_.size()); }
  double padding_fraction() const noexcept;
  /// Bytes held by values, indices and row/chunk descriptors.
  std::size_t storage_bytes() const noexcept;

  std::span<const Complex> values() const noexcept { return values_; }
  std::span<const Index> col_idx() const noexcept { return col_idx_; }

  // CRS only.
  std::span<const Offset> row_ptr() const noexcept { return row_ptr_; }

  // SELL only.
  Index num_chunks() const noexcept { return static_cast<Index>(chunk_len_.size()); }
  std::span<const Offset> chunk_ptr() const noexcept { return chunk_ptr_; }
  std::span<const Index> chunk_len() const noexcept { return chunk_len_; }
  std::span<const Index> row_perm() const noexcept { return row_perm_; }
  /// True length of the row at sorted position p.
  std::span<const Index> row_len() const noexcept { return row_len_; }

  /// Calls fn(row, col, value) for every true entry, in storage order per row.
  template <class Fn>
  void for_each_entry(Fn&& fn) const;

  friend SparseMatrix crs_to_sell(const SparseMatrix& m, int chunk_height, int sigma);
  friend SparseMatrix sell_to_crs(const SparseMatrix& m);

 private:
  Index nrows_ = 0;
  Index ncols_ = 0;
  Offset nnz_ = 0;
  Layout layout_ = Layout::crs;
  int chunk_height_ = 1;
  int sigma_ = 1;

  std::vector<Complex> values_;
  std::vector<Index> col_idx_;
  std::vector<Offset> row_ptr_;

  std::vector<Offset> chunk_ptr_;
  std::vector<Index> chunk_len_;
  std::vector<Index> row_perm_;
  std::vector<Index> row_len_;
};

/// Converts a CRS matrix to SELL-C-sigma. sigma must be 1 or a multiple of C.
SparseMatrix crs_to_sell(const SparseMatrix& m, int chunk_height, int sigma);
/// Converts back to CRS with rows in original order and padding removed.
SparseMatrix sell_to_crs(const SparseMatrix& m);

/// Coordinate-format entry used by builders and I/O.
struct Entry {
  Index row;
  Index col;
  Complex value;
};

/// Sorted (row, col) entry list of the true nonzeros, any layout.
std::vector<Entry> entries(const SparseMatrix& m);

/// Builds a CRS matrix from unsorted coordinates; duplicates are summed and
/// exact zeros kept (callers decide the zero policy).
SparseMatrix from_entries(Index nrows, Index ncols, std::vector<Entry> list);

/// Matrix Market coordinate format, 1-based. Writing always emits
/// `complex general`; reading accepts real/complex with general, symmetric or
/// hermitian symmetry and expands the stored triangle.
void write_matrix_market(const SparseMatrix& m, const std::filesystem::path& path);
SparseMatrix read_matrix_market(const std::filesystem::path& path);

template <class Fn>
void SparseMatrix::for_each_entry(Fn&& fn) const {
  if (layout_ == Layout::crs) {
    for (Index i = 0; i < nrows_; ++i)
      for (Offset k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) fn(i, col_idx_[k], values_[k]);
    return;
  }
  const Index c = chunk_height_;
  for (Index ch = 0; ch < num_chunks(); ++ch) {
    for (Index s = 0; s < c; ++s) {
      const Index pos = ch * c + s;
      if (pos >= nrows_) break;
      for (Index k = 0; k < row_len_[pos]; ++k) {
        const Offset at = chunk_ptr_[ch] + static_cast<Offset>(k) * c + s;
        fn(row_perm_[pos], col_idx_[at], values_[at]);
      }
    }
  }
}

}  // namespace kpm
