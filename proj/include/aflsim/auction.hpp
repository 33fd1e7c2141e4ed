#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "aflsim/market.hpp"
#include "aflsim/selection.hpp"

namespace aflsim {

/// A data owner's bidding state. Truthful agents bid their current valuation.
struct BidderAgent {
  DataOwnerProfile profile;
  Money valuation;
  double adjust_rate = 0.0;
  /// Deviation probe: when set, the agent bids this instead of its valuation.
  std::optional<Money> bid_override;

  Money current_bid() const { return bid_override.value_or(valuation); }
};

enum class PaymentRule {
  pay_as_bid,
  /// Every winner receives the announced winning bid. Not a mechanism the
  /// simulator runs; exists so the truthfulness auditor can be mutation-tested.
  uniform_winning_bid,
};

class SettlementError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

RoundBidBook collect_bids(std::span<const BidderAgent> agents, int round);

/// Records winners and payments. winning_bid is the highest accepted bid.
RoundBidBook settle(RoundBidBook book, const SelectionOutcome& outcome,
                    PaymentRule rule = PaymentRule::pay_as_bid);

/// Realized utility of one owner: payment minus private cost for winners,
/// zero otherwise.
Money owner_utility(const RoundBidBook& settled, const DataOwnerProfile& owner);

/// Losers move their valuation toward the announced winning bid, never
/// upward and never below private cost. Winners are unchanged, as is
/// everyone when there was no winner.
void update_agents_after_announcement(std::vector<BidderAgent>& agents, const RoundBidBook& settled);

}  // namespace aflsim
