#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace aflsim {

struct BenchPoint {
  std::size_t n = 0;
  double median_seconds = 0.0;
};

struct BenchReport {
  std::vector<BenchPoint> points;
  double slope = 0.0;  // least-squares slope of log(time) against log(n)
};

enum class SelectionKernel { partition, full_sort };

/// Times one selection step (bid intake, reputation filter, budget-capped
/// winner determination) on `n` random bids for each size, taking the median
/// over `repetitions`, and fits the log-log slope.
BenchReport bench_selection(std::span<const std::size_t> sizes, int repetitions, std::uint64_t seed = 1,
                            SelectionKernel kernel = SelectionKernel::partition);

double loglog_slope(std::span<const BenchPoint> points);

}  // namespace aflsim
