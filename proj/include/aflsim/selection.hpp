#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "aflsim/market.hpp"

namespace aflsim {

enum class RejectReason { over_cap, filtered };

std::string_view to_string(RejectReason reason);

struct Rejection {
  OwnerId owner = 0;
  RejectReason reason = RejectReason::over_cap;

  bool operator==(const Rejection&) const = default;
};

/// Winners in ascending (bid, id) order; rejected bidders in book order.
struct SelectionOutcome {
  std::vector<OwnerId> winners;
  Money spend;
  std::vector<Rejection> rejected;

  bool operator==(const SelectionOutcome&) const = default;
};

using BidFilter = std::function<bool(OwnerId)>;

/// Limits for the budget-capped selection.
///
/// `cap` bounds the sum of accepted bids. `hard_limit`, when set, bounds the
/// sum of accepted bids plus their per-owner `overheads` (aligned with the
/// book's bids), which is how execution cost is kept inside the round budget.
struct BudgetRequest {
  Money cap;
  std::optional<Money> hard_limit;
  std::span<const Money> overheads;
  BidFilter filter;
};

/// Accepts the longest ascending-(bid, id) prefix of eligible bids that fits
/// every limit.
///
/// Runs in expected linear time: the prefix boundary is located by repeated
/// partitioning around a pivot, keeping the lower side whole whenever its sum
/// still fits, so no full sort of the bid vector is needed. Only the accepted
/// winners are sorted for output. Eligibility filtering is done in parallel
/// for large books.
SelectionOutcome select_lowest_within_budget(const RoundBidBook& book, const BudgetRequest& request);
SelectionOutcome select_lowest_within_budget(const RoundBidBook& book, Money cap, const BidFilter& filter = {});

/// Full-sort serial reference for select_lowest_within_budget. Kept for tests
/// and the benchmark; produces identical outcomes.
SelectionOutcome select_lowest_within_budget_reference(const RoundBidBook& book, const BudgetRequest& request);

}  // namespace aflsim
