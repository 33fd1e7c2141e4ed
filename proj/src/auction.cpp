#include "aflsim/auction.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>

namespace aflsim {

RoundBidBook collect_bids(std::span<const BidderAgent> agents, int round) {
  RoundBidBook book;
  book.round = round;
  book.bids.reserve(agents.size());
  for (const auto& a : agents) book.bids.push_back({a.profile.id, a.current_bid()});
  return book;
}

RoundBidBook settle(RoundBidBook book, const SelectionOutcome& outcome, PaymentRule rule) {
  if (book.settled) throw SettlementError("round " + std::to_string(book.round) + " settled twice");
  book.settled = true;
  book.winners = outcome.winners;
  book.payments.clear();
  book.winning_bid.reset();

  for (OwnerId w : outcome.winners) {
    auto bid = book.bid_of(w);
    if (!bid) throw SettlementError("winner " + std::to_string(w) + " has no bid in the book");
    book.winning_bid = book.winning_bid ? max(*book.winning_bid, *bid) : *bid;
  }
  for (OwnerId w : outcome.winners) {
    const Money pay = rule == PaymentRule::pay_as_bid ? *book.bid_of(w) : *book.winning_bid;
    book.payments.push_back({w, pay});
  }
  return book;
}

Money owner_utility(const RoundBidBook& settled, const DataOwnerProfile& owner) {
  if (!settled.is_winner(owner.id)) return Money::zero();
  return settled.payment_to(owner.id) - owner.private_cost;
}

void update_agents_after_announcement(std::vector<BidderAgent>& agents, const RoundBidBook& settled) {
  if (!settled.winning_bid) return;
  const Money win = *settled.winning_bid;
  const std::unordered_set<OwnerId> winners(settled.winners.begin(), settled.winners.end());
  for (auto& a : agents) {
    if (winners.count(a.profile.id)) continue;
    const Money gap = max(Money::zero(), a.valuation - win);
    const Money step = Money::from_real(a.adjust_rate * gap.to_real());
    a.valuation = max(a.profile.private_cost, a.valuation - step);
  }
}

}  // namespace aflsim
