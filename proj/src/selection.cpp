#include "aflsim/selection.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>

#include "aflsim/random.hpp"

namespace aflsim {

std::string_view to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::over_cap:
      return "over_cap";
    case RejectReason::filtered:
      return "filtered";
  }
  return "unknown";
}

namespace {

constexpr std::size_t kParallelIntakeThreshold = 1 << 14;

struct Item {
  Money bid;
  OwnerId id;
  Money overhead;
  std::size_t index;
};

bool key_less(const Item& a, const Item& b) { return a.bid != b.bid ? a.bid < b.bid : a.id < b.id; }

Money overhead_at(const BudgetRequest& req, std::size_t i) {
  return req.overheads.empty() ? Money::zero() : req.overheads[i];
}

void check_request(const RoundBidBook& book, const BudgetRequest& req) {
  if (!req.overheads.empty() && req.overheads.size() != book.bids.size())
    throw std::invalid_argument("overheads must align with the book's bids");
}

/// Eligibility flags; the filter runs in parallel for large books.
std::vector<char> eligibility(const RoundBidBook& book, const BidFilter& filter) {
  const std::size_t n = book.bids.size();
  std::vector<char> ok(n, 1);
  if (!filter) return ok;
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static) if (n >= kParallelIntakeThreshold)
  for (std::int64_t i = 0; i < count; ++i) ok[i] = filter(book.bids[i].owner) ? 1 : 0;
  return ok;
}

SelectionOutcome assemble(const RoundBidBook& book, const std::vector<char>& ok, std::vector<Item> taken) {
  std::sort(taken.begin(), taken.end(), key_less);
  SelectionOutcome out;
  std::vector<char> won(book.bids.size(), 0);
  for (const auto& it : taken) {
    out.winners.push_back(it.id);
    out.spend += it.bid;
    won[it.index] = 1;
  }
  for (std::size_t i = 0; i < book.bids.size(); ++i) {
    if (!ok[i])
      out.rejected.push_back({book.bids[i].owner, RejectReason::filtered});
    else if (!won[i])
      out.rejected.push_back({book.bids[i].owner, RejectReason::over_cap});
  }
  return out;
}

}  // namespace

SelectionOutcome select_lowest_within_budget(const RoundBidBook& book, const BudgetRequest& req) {
  check_request(book, req);
  const auto ok = eligibility(book, req.filter);

  std::vector<Item> items;
  items.reserve(book.bids.size());
  for (std::size_t i = 0; i < book.bids.size(); ++i)
    if (ok[i]) items.push_back({book.bids[i].amount, book.bids[i].owner, overhead_at(req, i), i});

  Money rem_cap = req.cap;
  Money rem_hard = req.hard_limit.value_or(Money::max());
  if (rem_cap < Money::zero() || rem_hard < Money::zero()) return assemble(book, ok, {});

  // items[0, lo) are accepted; the boundary lies inside [lo, hi).
  std::size_t lo = 0, hi = items.size();
  SplitMix64 rng(items.size());
  while (lo < hi) {
    const std::size_t p = lo + static_cast<std::size_t>(rng() % (hi - lo));
    std::swap(items[p], items[hi - 1]);
    const Item pivot = items[hi - 1];

    std::size_t store = lo;
    Money sum_bid, sum_all;
    for (std::size_t i = lo; i + 1 < hi; ++i) {
      if (key_less(items[i], pivot)) {
        sum_bid += items[i].bid;
        sum_all += items[i].bid + items[i].overhead;
        std::swap(items[i], items[store++]);
      }
    }
    std::swap(items[store], items[hi - 1]);

    if (sum_bid <= rem_cap && sum_all <= rem_hard) {
      rem_cap -= sum_bid;
      rem_hard -= sum_all;
      if (pivot.bid <= rem_cap && pivot.bid + pivot.overhead <= rem_hard) {
        rem_cap -= pivot.bid;
        rem_hard -= pivot.bid + pivot.overhead;
        lo = store + 1;
      } else {
        lo = store;
        break;
      }
    } else {
      hi = store;
    }
  }
  items.resize(lo);
  return assemble(book, ok, std::move(items));
}

SelectionOutcome select_lowest_within_budget(const RoundBidBook& book, Money cap, const BidFilter& filter) {
  return select_lowest_within_budget(book, BudgetRequest{cap, std::nullopt, {}, filter});
}

SelectionOutcome select_lowest_within_budget_reference(const RoundBidBook& book, const BudgetRequest& req) {
  check_request(book, req);
  std::vector<char> ok(book.bids.size(), 1);
  std::vector<Item> items;
  for (std::size_t i = 0; i < book.bids.size(); ++i) {
    if (req.filter && !req.filter(book.bids[i].owner)) {
      ok[i] = 0;
      continue;
    }
    items.push_back({book.bids[i].amount, book.bids[i].owner, overhead_at(req, i), i});
  }
  std::sort(items.begin(), items.end(), key_less);

  const Money hard = req.hard_limit.value_or(Money::max());
  Money bids, all;
  std::size_t k = 0;
  for (; k < items.size(); ++k) {
    // Written as remaining-budget checks so Money::max() cannot overflow.
    if (items[k].bid > req.cap - bids || items[k].bid + items[k].overhead > hard - all) break;
    bids += items[k].bid;
    all += items[k].bid + items[k].overhead;
  }
  items.resize(k);
  return assemble(book, ok, std::move(items));
}

}  // namespace aflsim
