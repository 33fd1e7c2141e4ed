#pragma once

#include <map>
#include <optional>
#include <span>
#include <string_view>

#include "aflsim/market.hpp"
#include "aflsim/scheduler.hpp"
#include "aflsim/selection.hpp"

namespace aflsim {

enum class PolicyKind { gps_afl, greedy_percentile, rrafl_like, oort_like };

std::string_view to_string(PolicyKind kind);
/// Accepts the short CLI names (gps, greedy, rrafl, oort) and the long names.
std::optional<PolicyKind> parse_policy(std::string_view name);

/// Every bid at or below the nearest-rank `percentile` of the bid multiset.
/// No budget cap.
SelectionOutcome greedy_select(const RoundBidBook& book, double percentile = 15.0);

/// Nearest-rank percentile: the ceil(p/100 * n)-th smallest value (1-based,
/// at least the first).
Money nearest_rank_percentile(std::span<const Money> values, double percentile);

struct RrAflOptions {
  std::span<const Money> overheads;  // per-bid execution cost, counted against the budget
  BidFilter provisional;             // bidders admitted despite a low score
};

/// Cheapest reputable bidders until the per-round budget is exhausted, which
/// maximizes the reputable head-count. Unspent budget is not carried over.
SelectionOutcome rrafl_select(const RoundBidBook& book, const ScoreFn& score, double threshold, Money budget,
                              const RrAflOptions& options = {});

/// Empirical per-owner statistics for the UCB-style selector.
class OortStats {
 public:
  void record(OwnerId owner, double observed_improvement);
  double mean(OwnerId owner) const;
  int selections(OwnerId owner) const;

 private:
  struct Entry {
    double sum = 0.0;
    int count = 0;
  };
  std::map<OwnerId, Entry> entries_;
};

/// mean + sqrt(2 ln t / max(1, times_selected))
double oort_utility(const OortStats& stats, OwnerId owner, int round);

/// Top-`cohort_size` bidders by utility, ties to the lower id. No budget cap.
SelectionOutcome oort_select(const RoundBidBook& book, const OortStats& stats, int round, int cohort_size);

}  // namespace aflsim
