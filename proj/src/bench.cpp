#include "aflsim/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>

#include "aflsim/market.hpp"
#include "aflsim/random.hpp"
#include "aflsim/reputation.hpp"
#include "aflsim/selection.hpp"

namespace aflsim {

namespace {

// Bids uniform in [1, 4] money; the cap admits a few hundred winners no
// matter how large the book is.
constexpr double kBidLow = 1.0;
constexpr double kBidHigh = 4.0;
constexpr double kCap = 1000.0;
constexpr double kThreshold = 0.7;

struct Market {
  std::vector<Bid> bids;
  std::vector<double> scores;  // indexed by owner id
};

Market random_market(std::size_t n, std::uint64_t seed) {
  SplitMix64 gen(derive_seed(seed, {n}));
  std::uniform_real_distribution<double> bid(kBidLow, kBidHigh);
  std::uniform_real_distribution<double> score(0.3, 0.95);
  Market m;
  m.bids.reserve(n);
  m.scores.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    m.bids.push_back({static_cast<OwnerId>(i), Money::from_real(bid(gen))});
    m.scores.push_back(score(gen));
  }
  return m;
}

}  // namespace

double loglog_slope(std::span<const BenchPoint> points) {
  if (points.size() < 2) throw std::invalid_argument("need at least two points for a slope");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& p : points) {
    const double x = std::log(static_cast<double>(p.n));
    const double y = std::log(p.median_seconds);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double k = static_cast<double>(points.size());
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

BenchReport bench_selection(std::span<const std::size_t> sizes, int repetitions, std::uint64_t seed,
                            SelectionKernel kernel) {
  if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
  BenchReport report;
  for (std::size_t n : sizes) {
    const Market market = random_market(n, seed);
    std::vector<double> times;
    for (int r = 0; r < repetitions; ++r) {
      const auto start = std::chrono::steady_clock::now();
      RoundBidBook book;
      book.round = 1;
      book.bids = market.bids;
      BudgetRequest req;
      req.cap = Money::from_real(kCap);
      req.filter = [&](OwnerId id) { return is_reputable(market.scores[static_cast<std::size_t>(id)], kThreshold); };
      const SelectionOutcome out = kernel == SelectionKernel::partition
                                       ? select_lowest_within_budget(book, req)
                                       : select_lowest_within_budget_reference(book, req);
      const auto stop = std::chrono::steady_clock::now();
      if (out.spend > req.cap) throw std::logic_error("selection exceeded its cap");
      times.push_back(std::chrono::duration<double>(stop - start).count());
    }
    std::nth_element(times.begin(), times.begin() + static_cast<std::ptrdiff_t>(times.size() / 2), times.end());
    report.points.push_back({n, times[times.size() / 2]});
  }
  report.slope = loglog_slope(report.points);
  return report;
}

}  // namespace aflsim
