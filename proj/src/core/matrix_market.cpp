#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "kpm/sparse_matrix.hpp"

namespace kpm {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

void write_matrix_market(const SparseMatrix& m, const std::filesystem::path& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) fail(Errc::io, "cannot open " + path.string() + " for writing");
  std::fprintf(f, "%%%%MatrixMarket matrix coordinate complex general\n");
  std::fprintf(f, "%d %d %lld\n", m.rows(), m.cols(), static_cast<long long>(m.nnz()));
  for (const auto& e : entries(m))
    std::fprintf(f, "%d %d %.17g %.17g\n", e.row + 1, e.col + 1, e.value.real(), e.value.imag());
  if (std::fclose(f) != 0) fail(Errc::io, "error writing " + path.string());
}

SparseMatrix read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io, "cannot open " + path.string());

  std::string line;
  if (!std::getline(in, line)) fail(Errc::io, "empty Matrix Market file");
  std::istringstream banner(lower(line));
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%matrixmarket" || object != "matrix" || format != "coordinate")
    fail(Errc::io, "unsupported Matrix Market banner: " + line);
  if (field != "complex" && field != "real" && field != "integer")
    fail(Errc::io, "unsupported Matrix Market field: " + field);
  if (symmetry != "general" && symmetry != "symmetric" && symmetry != "hermitian")
    fail(Errc::io, "unsupported Matrix Market symmetry: " + symmetry);
  const bool is_complex = field == "complex";

  while (std::getline(in, line) && (line.empty() || line[0] == '%')) {
  }
  long long nr = 0, nc = 0, nz = 0;
  {
    std::istringstream size_line(line);
    if (!(size_line >> nr >> nc >> nz)) fail(Errc::io, "malformed Matrix Market size line");
  }
  constexpr long long kMax = std::numeric_limits<Index>::max();
  if (nr < 0 || nc < 0 || nr > kMax || nc > kMax)
    fail(Errc::sizing, "matrix extent exceeds the 32-bit index range");

  std::vector<Entry> list;
  list.reserve(static_cast<std::size_t>(symmetry == "general" ? nz : 2 * nz));
  for (long long k = 0; k < nz; ++k) {
    long long i = 0, j = 0;
    double re = 0.0, im = 0.0;
    if (!(in >> i >> j >> re)) fail(Errc::io, "truncated Matrix Market entry list");
    if (is_complex && !(in >> im)) fail(Errc::io, "missing imaginary part");
    if (i < 1 || i > nr || j < 1 || j > nc) fail(Errc::io, "Matrix Market index out of range");
    const Index r = static_cast<Index>(i - 1);
    const Index c = static_cast<Index>(j - 1);
    list.push_back({r, c, {re, im}});
    if (r != c && symmetry == "symmetric") list.push_back({c, r, {re, im}});
    if (r != c && symmetry == "hermitian") list.push_back({c, r, {re, -im}});
  }
  return from_entries(static_cast<Index>(nr), static_cast<Index>(nc), std::move(list));
}

}  // namespace kpm
