#include "kpm/block_vector.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numbers>

namespace kpm {

BlockVector::BlockVector(Index rows, int width) : rows_(rows), width_(width) {
  require(rows >= 0, Errc::invalid_argument, "block vector rows must be >= 0");
  require(width >= 1, Errc::invalid_argument, "block vector width must be >= 1");
  data_.assign(static_cast<std::size_t>(rows) * width, Complex{});
}

BlockVector BlockVector::column(int r) const {
  require(r >= 0 && r < width_, Errc::invalid_argument, "column out of range");
  BlockVector out(rows_, 1);
  for (Index i = 0; i < rows_; ++i) out(i, 0) = (*this)(i, r);
  return out;
}

void BlockVector::set_column(int r, const BlockVector& col) {
  require(r >= 0 && r < width_, Errc::invalid_argument, "column out of range");
  require(col.rows() == rows_ && col.width() == 1, Errc::dimension_mismatch, "column shape mismatch");
  for (Index i = 0; i < rows_; ++i) (*this)(i, r) = col(i, 0);
}

void BlockVector::fill(Complex value) { std::fill(data_.begin(), data_.end(), value); }

namespace {

constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

Complex random_phase(std::uint64_t seed, std::uint64_t column, std::uint64_t row) noexcept {
  const std::uint64_t key = splitmix64(splitmix64(seed) ^ column);
  const std::uint64_t bits = splitmix64(key + row * 0x9e3779b97f4a7c15ULL);
  // 53 random bits -> uniform in [0, 1)
  const double u = static_cast<double>(bits >> 11) * 0x1.0p-53;
  const double phi = 2.0 * std::numbers::pi * u;
  return {std::cos(phi), std::sin(phi)};
}

BlockVector random_block_vector(Index n, int width, std::uint64_t seed, int first_column) {
  require(n >= 1, Errc::invalid_argument, "random block vector needs n >= 1");
  require(first_column >= 0, Errc::invalid_argument, "first column must be >= 0");
  BlockVector v(n, width);
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i)
    for (int r = 0; r < width; ++r)
      v(i, r) = random_phase(seed, static_cast<std::uint64_t>(first_column + r), static_cast<std::uint64_t>(i));
  return v;
}

namespace {

constexpr char kMagic[8] = {'K', 'P', 'M', 'B', 'L', 'K', 'V', '1'};
constexpr std::uint32_t kComplexDouble = 1;

}  // namespace

void write_block_vector(const BlockVector& v, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::io, "cannot open " + path.string() + " for writing");
  const std::uint64_t n = static_cast<std::uint64_t>(v.rows());
  const std::uint64_t r = static_cast<std::uint64_t>(v.width());
  out.write(kMagic, sizeof kMagic);
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  out.write(reinterpret_cast<const char*>(&r), sizeof r);
  out.write(reinterpret_cast<const char*>(&kComplexDouble), sizeof kComplexDouble);
  out.write(reinterpret_cast<const char*>(v.data().data()),
            static_cast<std::streamsize>(v.size() * sizeof(Complex)));
  if (!out) fail(Errc::io, "error writing " + path.string());
}

BlockVector read_block_vector(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io, "cannot open " + path.string());
  char magic[8];
  std::uint64_t n = 0, r = 0;
  std::uint32_t type = 0;
  in.read(magic, sizeof magic);
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  in.read(reinterpret_cast<char*>(&r), sizeof r);
  in.read(reinterpret_cast<char*>(&type), sizeof type);
  if (!in || std::memcmp(magic, kMagic, sizeof magic) != 0) fail(Errc::io, "not a block vector dump");
  if (type != kComplexDouble) fail(Errc::io, "unsupported block vector element type");
  if (n > static_cast<std::uint64_t>(std::numeric_limits<Index>::max()) || r == 0 || r > (1u << 20))
    fail(Errc::io, "implausible block vector header");
  BlockVector v(static_cast<Index>(n), static_cast<int>(r));
  in.read(reinterpret_cast<char*>(v.data().data()), static_cast<std::streamsize>(v.size() * sizeof(Complex)));
  if (!in) fail(Errc::io, "truncated block vector dump");
  return v;
}

}  // namespace kpm
