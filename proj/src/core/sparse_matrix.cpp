#include "kpm/sparse_matrix.hpp"

#include <algorithm>
#include <numeric>

namespace kpm {

SparseMatrix SparseMatrix::from_crs(Index nrows, Index ncols, std::vector<Offset> row_ptr,
                                    std::vector<Index> col_idx, std::vector<Complex> values) {
  require(nrows >= 0 && ncols >= 0, Errc::invalid_argument, "negative matrix extent");
  require(row_ptr.size() == static_cast<std::size_t>(nrows) + 1, Errc::invalid_argument,
          "row_ptr must have nrows+1 entries");
  require(row_ptr.front() == 0, Errc::invalid_argument, "row_ptr must start at 0");
  require(col_idx.size() == values.size(), Errc::invalid_argument,
          "col_idx and values differ in length");
  require(row_ptr.back() == static_cast<Offset>(values.size()), Errc::invalid_argument,
          "row_ptr end does not match entry count");
  for (Index i = 0; i < nrows; ++i)
    require(row_ptr[i] <= row_ptr[i + 1], Errc::invalid_argument, "row_ptr must be nondecreasing");
  for (Index c : col_idx)
    require(c >= 0 && c < ncols, Errc::invalid_argument, "column index out of range");

  SparseMatrix m;
  m.nrows_ = nrows;
  m.ncols_ = ncols;
  m.nnz_ = static_cast<Offset>(values.size());
  m.layout_ = Layout::crs;
  m.row_ptr_ = std::move(row_ptr);
  m.col_idx_ = std::move(col_idx);
  m.values_ = std::move(values);
  return m;
}

double SparseMatrix::padding_fraction() const noexcept {
  if (values_.empty()) return 0.0;
  return static_cast<double>(stored() - nnz_) / static_cast<double>(stored());
}

std::size_t SparseMatrix::storage_bytes() const noexcept {
  std::size_t bytes = values_.size() * kValueBytes + col_idx_.size() * kIndexBytes;
  bytes += row_ptr_.size() * sizeof(Offset);
  bytes += chunk_ptr_.size() * sizeof(Offset);
  bytes += (chunk_len_.size() + row_perm_.size() + row_len_.size()) * sizeof(Index);
  return bytes;
}

SparseMatrix crs_to_sell(const SparseMatrix& m, int chunk_height, int sigma) {
  require(m.layout() == Layout::crs, Errc::invalid_argument, "crs_to_sell expects a CRS matrix");
  require(chunk_height >= 1, Errc::invalid_argument, "chunk height C must be >= 1");
  require(sigma >= 1 && (sigma == 1 || sigma % chunk_height == 0), Errc::invalid_argument,
          "sigma must be 1 or a multiple of C");

  const Index n = m.rows();
  const auto rp = m.row_ptr();
  auto len = [&](Index i) { return static_cast<Index>(rp[i + 1] - rp[i]); };

  std::vector<Index> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  if (sigma > 1) {
    for (Index w = 0; w < n; w += sigma) {
      const Index end = std::min<Index>(n, w + sigma);
      std::stable_sort(perm.begin() + w, perm.begin() + end,
                       [&](Index x, Index y) { return len(x) > len(y); });
    }
  }

  const Index c = chunk_height;
  const Index nchunks = (n + c - 1) / c;
  SparseMatrix s;
  s.nrows_ = n;
  s.ncols_ = m.cols();
  s.nnz_ = m.nnz();
  s.layout_ = Layout::sell;
  s.chunk_height_ = chunk_height;
  s.sigma_ = sigma;
  s.row_perm_ = perm;
  s.row_len_.resize(n);
  for (Index p = 0; p < n; ++p) s.row_len_[p] = len(perm[p]);

  s.chunk_len_.assign(nchunks, 0);
  s.chunk_ptr_.assign(nchunks + 1, 0);
  for (Index ch = 0; ch < nchunks; ++ch) {
    Index width = 0;
    for (Index p = ch * c; p < std::min<Index>(n, (ch + 1) * c); ++p)
      width = std::max(width, s.row_len_[p]);
    s.chunk_len_[ch] = width;
    s.chunk_ptr_[ch + 1] = s.chunk_ptr_[ch] + static_cast<Offset>(width) * c;
  }

  const auto cols = m.col_idx();
  const auto vals = m.values();
  s.values_.assign(s.chunk_ptr_.back(), Complex{});
  s.col_idx_.assign(s.chunk_ptr_.back(), 0);
  for (Index ch = 0; ch < nchunks; ++ch) {
    for (Index slot = 0; slot < c; ++slot) {
      const Index p = ch * c + slot;
      const bool real_row = p < n;
      const Index row = real_row ? perm[p] : 0;
      const Index l = real_row ? len(row) : 0;
      // Padding reuses the row's last column (or column 0) so gathers stay in range.
      const Index dummy = l > 0 ? cols[rp[row] + l - 1] : 0;
      for (Index k = 0; k < s.chunk_len_[ch]; ++k) {
        const Offset at = s.chunk_ptr_[ch] + static_cast<Offset>(k) * c + slot;
        if (k < l) {
          s.values_[at] = vals[rp[row] + k];
          s.col_idx_[at] = cols[rp[row] + k];
        } else {
          s.col_idx_[at] = dummy;
        }
      }
    }
  }
  return s;
}

SparseMatrix sell_to_crs(const SparseMatrix& m) {
  if (m.layout() == Layout::crs) return m;
  const Index n = m.rows();
  std::vector<Index> length(n, 0);
  for (Index p = 0; p < n; ++p) length[m.row_perm_[p]] = m.row_len_[p];
  std::vector<Offset> row_ptr(n + 1, 0);
  for (Index i = 0; i < n; ++i) row_ptr[i + 1] = row_ptr[i] + length[i];

  std::vector<Index> cols(row_ptr.back());
  std::vector<Complex> vals(row_ptr.back());
  std::vector<Offset> fill(row_ptr.begin(), row_ptr.end() - 1);
  m.for_each_entry([&](Index i, Index j, Complex v) {
    cols[fill[i]] = j;
    vals[fill[i]] = v;
    ++fill[i];
  });
  return SparseMatrix::from_crs(n, m.cols(), std::move(row_ptr), std::move(cols), std::move(vals));
}

std::vector<Entry> entries(const SparseMatrix& m) {
  std::vector<Entry> out;
  out.reserve(static_cast<std::size_t>(m.nnz()));
  m.for_each_entry([&](Index i, Index j, Complex v) { out.push_back({i, j, v}); });
  std::sort(out.begin(), out.end(), [](const Entry& x, const Entry& y) {
    return x.row != y.row ? x.row < y.row : x.col < y.col;
  });
  return out;
}

SparseMatrix from_entries(Index nrows, Index ncols, std::vector<Entry> list) {
  for (const auto& e : list)
    require(e.row >= 0 && e.row < nrows && e.col >= 0 && e.col < ncols, Errc::invalid_argument,
            "entry outside matrix bounds");
  std::sort(list.begin(), list.end(), [](const Entry& x, const Entry& y) {
    return x.row != y.row ? x.row < y.row : x.col < y.col;
  });
  std::vector<Offset> row_ptr(static_cast<std::size_t>(nrows) + 1, 0);
  std::vector<Index> cols;
  std::vector<Complex> vals;
  cols.reserve(list.size());
  vals.reserve(list.size());
  for (std::size_t k = 0; k < list.size(); ++k) {
    if (k > 0 && list[k].row == list[k - 1].row && list[k].col == list[k - 1].col) {
      vals.back() += list[k].value;
      continue;
    }
    cols.push_back(list[k].col);
    vals.push_back(list[k].value);
    ++row_ptr[list[k].row + 1];
  }
  for (Index i = 0; i < nrows; ++i) row_ptr[i + 1] += row_ptr[i];
  return SparseMatrix::from_crs(nrows, ncols, std::move(row_ptr), std::move(cols), std::move(vals));
}

}  // namespace kpm
