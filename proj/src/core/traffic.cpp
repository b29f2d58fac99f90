#include "kpm/traffic.hpp"

#include "json.hpp"

namespace kpm {

TrafficCounters& TrafficCounters::operator+=(const TrafficCounters& o) noexcept {
  bytes_matrix_values += o.bytes_matrix_values;
  bytes_matrix_indices += o.bytes_matrix_indices;
  bytes_vector_reads += o.bytes_vector_reads;
  bytes_vector_writes += o.bytes_vector_writes;
  flops_add += o.flops_add;
  flops_mul += o.flops_mul;
  return *this;
}

std::string TrafficCounters::csv_header() {
  return "bytes_matrix_values,bytes_matrix_indices,bytes_vector_reads,bytes_vector_writes,flops_add,flops_mul";
}

std::string TrafficCounters::csv_row() const {
  return std::to_string(bytes_matrix_values) + ',' + std::to_string(bytes_matrix_indices) + ',' +
         std::to_string(bytes_vector_reads) + ',' + std::to_string(bytes_vector_writes) + ',' +
         std::to_string(flops_add) + ',' + std::to_string(flops_mul);
}

std::string TrafficCounters::to_json() const {
  nlohmann::json j{{"bytes_matrix_values", bytes_matrix_values}, {"bytes_matrix_indices", bytes_matrix_indices},
                   {"bytes_vector_reads", bytes_vector_reads},   {"bytes_vector_writes", bytes_vector_writes},
                   {"flops_add", flops_add},                     {"flops_mul", flops_mul},
                   {"total_bytes", total_bytes()},               {"total_flops", total_flops()}};
  return j.dump();
}

TrafficMeter::TrafficMeter(CountOptions options) : options_(options) {
  require(options_.line_bytes >= kValueBytes && options_.line_bytes % kValueBytes == 0, Errc::invalid_argument,
          "cache line size must be a multiple of the element size");
  if (options_.mode == CountOptions::Mode::llc) {
    capacity_lines_ = options_.llc_bytes / options_.line_bytes;
    require(capacity_lines_ >= 1, Errc::invalid_argument, "simulated LLC must hold at least one line");
  }
}

double TrafficMeter::omega() const noexcept {
  const auto ideal = ideal_.total_bytes();
  return ideal == 0 ? 1.0 : static_cast<double>(measured_.total_bytes()) / static_cast<double>(ideal);
}

void TrafficMeter::begin_call(Index gathered_rows, int gathered_width) {
  ++calls_;
  ++generation_;
  width_ = gathered_width;
  if (seen_.size() < static_cast<std::size_t>(gathered_rows)) seen_.resize(gathered_rows, 0);
  if (options_.mode == CountOptions::Mode::llc) {
    const std::uint64_t bytes = static_cast<std::uint64_t>(gathered_rows) * gathered_width * kValueBytes;
    const std::uint64_t lines = (bytes + options_.line_bytes - 1) / options_.line_bytes;
    if (resident_.size() < lines) {
      resident_.resize(lines, 0);
      prev_.resize(lines, -1);
      next_.resize(lines, -1);
    }
    head_ = tail_ = -1;
    lines_held_ = 0;
  }
}

void TrafficMeter::matrix_entries(std::uint64_t count) noexcept {
  for (TrafficCounters* c : {&measured_, &ideal_}) {
    c->bytes_matrix_values += count * kValueBytes;
    c->bytes_matrix_indices += count * kIndexBytes;
  }
}

void TrafficMeter::gather(Index row) {
  const std::uint64_t row_bytes = static_cast<std::uint64_t>(width_) * kValueBytes;
  const bool first = seen_[row] != generation_;
  seen_[row] = generation_;
  if (first) ideal_.bytes_vector_reads += row_bytes;

  if (options_.mode == CountOptions::Mode::perfect) {
    if (first) measured_.bytes_vector_reads += row_bytes;
    return;
  }
  const std::uint64_t begin = static_cast<std::uint64_t>(row) * row_bytes;
  const std::uint64_t first_line = begin / options_.line_bytes;
  const std::uint64_t last_line = (begin + row_bytes - 1) / options_.line_bytes;
  for (std::uint64_t l = first_line; l <= last_line; ++l) touch_line(l);
}

void TrafficMeter::touch_line(std::uint64_t line) {
  const auto id = static_cast<std::int64_t>(line);
  if (resident_[line] == generation_) {
    if (head_ == id) return;
    // unlink and move to the MRU end
    next_[prev_[id]] = next_[id];
    if (next_[id] >= 0) prev_[next_[id]] = prev_[id];
    else tail_ = prev_[id];
    prev_[id] = -1;
    next_[id] = head_;
    prev_[head_] = id;
    head_ = id;
    return;
  }
  measured_.bytes_vector_reads += options_.line_bytes;
  if (lines_held_ == capacity_lines_) {
    const std::int64_t victim = tail_;
    tail_ = prev_[victim];
    if (tail_ >= 0) next_[tail_] = -1;
    else head_ = -1;
    resident_[victim] = 0;
    --lines_held_;
  }
  resident_[line] = generation_;
  prev_[id] = -1;
  next_[id] = head_;
  if (head_ >= 0) prev_[head_] = id;
  head_ = id;
  if (tail_ < 0) tail_ = id;
  ++lines_held_;
}

void TrafficMeter::stream_read(std::uint64_t elements) noexcept {
  measured_.bytes_vector_reads += elements * kValueBytes;
  ideal_.bytes_vector_reads += elements * kValueBytes;
}

void TrafficMeter::stream_write(std::uint64_t elements) noexcept {
  measured_.bytes_vector_writes += elements * kValueBytes;
  ideal_.bytes_vector_writes += elements * kValueBytes;
}

void TrafficMeter::flops(std::uint64_t add, std::uint64_t mul) noexcept {
  for (TrafficCounters* c : {&measured_, &ideal_}) {
    c->flops_add += add;
    c->flops_mul += mul;
  }
}

}  // namespace kpm
