#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace kpm {

using Complex = std::complex<double>;

/// Local row/column index. Kernels read 4-byte indices (S_i = 4).
using Index = std::int32_t;
/// Offsets into value/index arrays; N_nz may exceed the 32-bit range.
using Offset = std::int64_t;

inline constexpr std::size_t kValueBytes = sizeof(Complex);
inline constexpr std::size_t kIndexBytes = sizeof(Index);

enum class Errc {
  invalid_argument,
  dimension_mismatch,
  sizing,
  io,
  numeric,
  verification,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& what);

inline void require(bool cond, Errc code, const char* what) {
  if (!cond) fail(code, what);
}

/// Thread layout for the data-parallel kernels.
///
/// Rows (or SELL chunks) are split statically across `threads` workers.
/// When `weights` is non-empty it must hold one positive entry per worker and
/// the row share of worker t is proportional to weights[t]. Partial reductions
/// are always combined in worker order, so results are reproducible for a
/// fixed thread count and weight vector.
struct ExecPolicy {
  int threads = 1;
  std::vector<double> weights;

  void validate() const;
};

/// Boundaries b[0]=0 <= b[1] <= ... <= b[T]=n of a weighted static split of
/// n items. Boundaries other than the last are multiples of `granularity`.
std::vector<Index> partition(Index n, const ExecPolicy& exec, Index granularity = 1);

}  // namespace kpm
