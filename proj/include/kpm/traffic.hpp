#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kpm/common.hpp"

namespace kpm {

/// Logical data movement and work of one or more kernel calls.
struct TrafficCounters {
  std::uint64_t bytes_matrix_values = 0;
  std::uint64_t bytes_matrix_indices = 0;
  std::uint64_t bytes_vector_reads = 0;
  std::uint64_t bytes_vector_writes = 0;
  std::uint64_t flops_add = 0;
  std::uint64_t flops_mul = 0;

  std::uint64_t total_bytes() const noexcept {
    return bytes_matrix_values + bytes_matrix_indices + bytes_vector_reads + bytes_vector_writes;
  }
  std::uint64_t total_flops() const noexcept { return flops_add + flops_mul; }

  TrafficCounters& operator+=(const TrafficCounters& o) noexcept;
  friend bool operator==(const TrafficCounters&, const TrafficCounters&) = default;

  static std::string csv_header();
  std::string csv_row() const;
  std::string to_json() const;
};

/// Flops charged per complex operation (F_a, F_m for double complex).
inline constexpr std::uint64_t kFlopsAdd = 2;
inline constexpr std::uint64_t kFlopsMul = 6;

struct CountOptions {
  enum class Mode { perfect, llc };

  Mode mode = Mode::perfect;
  /// LLC mode only: capacity of the simulated fully associative LRU cache.
  std::uint64_t llc_bytes = 25ull << 20;
  std::uint32_t line_bytes = 64;
};

/// Traffic accounting for counted kernel execution.
///
/// Every call starts cold. Matrix data and streamed vectors are charged once
/// per element touched. The gathered input vector of a SpM(M)V is charged
/// once per distinct block row in perfect mode; in LLC mode its accesses run
/// through an LRU cache of whole lines and every miss costs a line. The
/// perfect-mode figures are always recorded as ideal(), so omega() =
/// measured/ideal is >= 1 and equals 1 in perfect mode.
class TrafficMeter {
 public:
  explicit TrafficMeter(CountOptions options = {});

  const CountOptions& options() const noexcept { return options_; }
  const TrafficCounters& measured() const noexcept { return measured_; }
  const TrafficCounters& ideal() const noexcept { return ideal_; }
  double omega() const noexcept;
  std::uint64_t calls() const noexcept { return calls_; }

  // Kernel-facing probe interface.
  void begin_call(Index gathered_rows, int gathered_width);
  void matrix_entries(std::uint64_t count) noexcept;
  /// Access to block row `row` of the gathered input vector.
  void gather(Index row);
  void stream_read(std::uint64_t elements) noexcept;
  void stream_write(std::uint64_t elements) noexcept;
  void flops(std::uint64_t add, std::uint64_t mul) noexcept;

 private:
  void touch_line(std::uint64_t line);

  CountOptions options_;
  TrafficCounters measured_;
  TrafficCounters ideal_;
  std::uint64_t calls_ = 0;

  int width_ = 1;
  std::vector<std::uint32_t> seen_;  // generation stamp per gathered row
  std::uint32_t generation_ = 0;

  // Intrusive LRU list over dense line ids.
  std::vector<std::uint32_t> resident_;  // generation stamp per line
  std::vector<std::int64_t> prev_, next_;
  std::int64_t head_ = -1, tail_ = -1;
  std::uint64_t lines_held_ = 0;
  std::uint64_t capacity_lines_ = 0;
};

}  // namespace kpm
