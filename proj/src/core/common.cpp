#include "kpm/common.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace kpm {

void fail(Errc code, const std::string& what) { throw Error(code, what); }

void ExecPolicy::validate() const {
  require(threads >= 1, Errc::invalid_argument, "thread count must be >= 1");
  if (weights.empty()) return;
  require(static_cast<int>(weights.size()) == threads, Errc::invalid_argument,
          "need exactly one weight per worker thread");
  for (double w : weights)
    require(std::isfinite(w) && w > 0.0, Errc::invalid_argument, "worker weights must be positive");
}

std::vector<Index> partition(Index n, const ExecPolicy& exec, Index granularity) {
  exec.validate();
  require(granularity >= 1, Errc::invalid_argument, "partition granularity must be >= 1");
  const int t = exec.threads;
  std::vector<double> w = exec.weights;
  if (w.empty()) w.assign(t, 1.0);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);

  std::vector<Index> bounds(t + 1, 0);
  double acc = 0.0;
  for (int k = 1; k < t; ++k) {
    acc += w[k - 1];
    auto b = static_cast<Offset>(std::llround(acc / total * static_cast<double>(n)));
    b = (b / granularity) * granularity;
    bounds[k] = static_cast<Index>(std::clamp<Offset>(b, bounds[k - 1], n));
  }
  bounds[t] = n;
  return bounds;
}

}  // namespace kpm
