#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "aflsim/selection.hpp"

using namespace aflsim;
using namespace aflsim::money_literals;

namespace {

RoundBidBook book_of(std::vector<std::pair<OwnerId, double>> bids) {
  RoundBidBook b;
  for (auto [id, amount] : bids) b.bids.push_back({id, Money::from_real(amount)});
  return b;
}

// Exhaustive oracle: among all subsets of eligible bidders that are closed
// downward in (bid, id) order and fit every limit, the largest one.
std::vector<OwnerId> exhaustive_winners(const RoundBidBook& book, Money cap, std::optional<Money> hard,
                                        const std::vector<Money>& overheads, const BidFilter& filter) {
  const std::size_t n = book.bids.size();
  auto before = [&](std::size_t i, std::size_t j) {
    const auto& a = book.bids[i];
    const auto& b = book.bids[j];
    return a.amount < b.amount || (a.amount == b.amount && a.owner < b.owner);
  };
  auto eligible = [&](std::size_t i) { return !filter || filter(book.bids[i].owner); };
  std::uint32_t best = 0;
  int best_size = -1;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    Money spend, total;
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      const bool in = mask >> i & 1u;
      if (in && !eligible(i)) ok = false;
      if (!in) continue;
      spend += book.bids[i].amount;
      total += book.bids[i].amount + (overheads.empty() ? Money::zero() : overheads[i]);
      for (std::size_t j = 0; j < n; ++j)
        if (eligible(j) && before(j, i) && !(mask >> j & 1u)) ok = false;
    }
    if (!ok || spend > cap || (hard && total > *hard)) continue;
    const int size = std::popcount(mask);
    if (size > best_size) best_size = size, best = mask;
  }
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < n; ++i)
    if (best >> i & 1u) idx.push_back(i);
  std::sort(idx.begin(), idx.end(), before);
  std::vector<OwnerId> out;
  for (auto i : idx) out.push_back(book.bids[i].owner);
  return out;
}

RoundBidBook random_book(std::mt19937_64& rng, std::size_t n, int price_levels) {
  RoundBidBook b;
  std::vector<OwnerId> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<OwnerId>(i * 3 + 1);
  std::shuffle(ids.begin(), ids.end(), rng);
  for (auto id : ids) b.bids.push_back({id, Money::from_micros(1 + static_cast<std::int64_t>(rng() % price_levels) * 250'000)});
  return b;
}

}  // namespace

TEST_CASE("worked selection examples") {
  const auto book = book_of({{1, 5}, {2, 3}, {3, 4}});
  const auto out = select_lowest_within_budget(book, Money::from_real(8));
  CHECK(out.winners == std::vector<OwnerId>{2, 3});
  CHECK(out.spend == Money::from_real(7));
  CHECK(out.rejected == std::vector<Rejection>{{1, RejectReason::over_cap}});

  const auto none = select_lowest_within_budget(book, Money::zero());
  CHECK(none.winners.empty());
  CHECK(none.spend == Money::zero());
  CHECK(none.rejected.size() == 3);

  const auto tie = select_lowest_within_budget(book_of({{2, 3}, {1, 3}}), Money::from_real(3));
  CHECK(tie.winners == std::vector<OwnerId>{1});
}

TEST_CASE("filtered bidders are skipped and reported") {
  const auto book = book_of({{1, 1}, {2, 4}, {3, 6}});
  const auto out = select_lowest_within_budget(book, Money::from_real(5), [](OwnerId id) { return id != 1; });
  CHECK(out.winners == std::vector<OwnerId>{2});
  CHECK(out.spend == Money::from_real(4));
  CHECK(out.rejected == std::vector<Rejection>{{1, RejectReason::filtered}, {3, RejectReason::over_cap}});
  CHECK(to_string(RejectReason::filtered) == "filtered");
}

TEST_CASE("selection stops at the first bid that does not fit") {
  // The cheap bid carries a large overhead; the dearer one would fit alone,
  // but acceptance is a prefix of the price order.
  const auto book = book_of({{1, 1}, {2, 2}});
  const std::vector<Money> overheads = {Money::from_real(3), Money::zero()};
  BudgetRequest req{Money::from_real(3), Money::from_real(3), overheads, {}};
  CHECK(select_lowest_within_budget(book, req).winners.empty());
  CHECK(select_lowest_within_budget_reference(book, req).winners.empty());
}

TEST_CASE("hard limit counts per-owner overheads") {
  const auto book = book_of({{1, 1}, {2, 1}, {3, 1}});
  const std::vector<Money> overheads(3, Money::from_real(0.5));
  BudgetRequest req;
  req.cap = Money::from_real(3);
  req.hard_limit = Money::from_real(3);
  req.overheads = overheads;
  const auto out = select_lowest_within_budget(book, req);
  CHECK(out.winners == std::vector<OwnerId>{1, 2});
  CHECK(select_lowest_within_budget_reference(book, req) == out);
}

TEST_CASE("selection agrees with the exhaustive oracle on small books") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = 1 + rng() % 11;
    const auto book = random_book(rng, n, 6);
    const Money cap = Money::from_micros(static_cast<std::int64_t>(rng() % 4'000'000));
    std::vector<Money> overheads;
    std::optional<Money> hard;
    if (trial % 2) {
      for (std::size_t i = 0; i < n; ++i) overheads.push_back(Money::from_micros(static_cast<std::int64_t>(rng() % 200'000)));
      hard = cap + Money::from_micros(static_cast<std::int64_t>(rng() % 500'000));
    }
    const std::uint64_t mask = rng();
    BidFilter filter;
    if (trial % 3 == 0) filter = [mask](OwnerId id) { return (mask >> (id % 61)) & 1u; };

    BudgetRequest req{cap, hard, overheads, filter};
    const auto out = select_lowest_within_budget(book, req);
    CHECK(out.winners == exhaustive_winners(book, cap, hard, overheads, filter));
    CHECK(out.spend <= cap);
    CHECK(out.winners.size() + out.rejected.size() == n);
  }
}

TEST_CASE("partition kernel matches the full-sort reference") {
  std::mt19937_64 rng(77);
  for (std::size_t n : {1u, 2u, 17u, 300u, 5000u, 40000u}) {
    for (int trial = 0; trial < 6; ++trial) {
      CAPTURE(n);
      const auto book = random_book(rng, n, trial % 2 ? 4 : 4000);
      std::vector<Money> overheads(n, Money::from_micros(static_cast<std::int64_t>(rng() % 20'000)));
      const Money cap = Money::from_micros(static_cast<std::int64_t>(rng() % (n * 500'000 + 1)));
      BudgetRequest req{cap, std::nullopt, {}, {}};
      if (trial % 3 == 1) {
        req.hard_limit = cap;
        req.overheads = overheads;
      }
      if (trial % 3 == 2) req.filter = [](OwnerId id) { return id % 4 != 0; };
      CHECK(select_lowest_within_budget(book, req) == select_lowest_within_budget_reference(book, req));
    }
  }
}

TEST_CASE("outcome does not depend on the order bids arrive in") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    auto book = random_book(rng, 1 + rng() % 200, 5);
    const Money cap = Money::from_micros(static_cast<std::int64_t>(rng() % 60'000'000));
    const auto base = select_lowest_within_budget(book, cap);
    std::shuffle(book.bids.begin(), book.bids.end(), rng);
    const auto shuffled = select_lowest_within_budget(book, cap);
    CHECK(shuffled.winners == base.winners);
    CHECK(shuffled.spend == base.spend);
  }
}

TEST_CASE("empty book") {
  const RoundBidBook empty;
  const auto out = select_lowest_within_budget(empty, 5'000'000_mu);
  CHECK(out.winners.empty());
  CHECK(out.rejected.empty());
}
