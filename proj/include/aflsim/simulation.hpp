#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "aflsim/auction.hpp"
#include "aflsim/baselines.hpp"
#include "aflsim/market.hpp"
#include "aflsim/reputation.hpp"
#include "aflsim/scheduler.hpp"
#include "aflsim/surrogate.hpp"

namespace aflsim {

struct WinnerRecord {
  OwnerId owner = 0;
  Money bid;
  Money payment;
  Money private_cost;
  Money utility;
  double score = 0.5;  // reputation when the round was decided
  double local_perf = 0.0;
  bool positive_feedback = true;
};

struct RoundMetrics {
  int round = 0;
  double xi = 0.0;
  Money revenue;
  Money c_hire;
  Money c_exe;
  Money utility;  // revenue - c_exe - c_hire
  Money queue_before;
  Money queue;                   // after the update (post-clamp)
  std::optional<Money> theta_t;  // empty for policies without a budget
  Money c_opt;
  Money cap;
  Branch branch = Branch::baseline;
  double improvement = 0.0;
  bool indicator = false;
  std::vector<WinnerRecord> winners;
  std::vector<double> reputation;  // per owner in scenario order, after this round's feedback

  std::size_t n_selected() const { return winners.size(); }
};

struct RunResult {
  std::uint64_t seed = 0;
  PolicyKind policy = PolicyKind::gps_afl;
  Money total_budget;
  bool budget_capped = false;
  Money total_utility;
  Money total_cost;
  double final_perf = 0.0;
  int rounds_executed = 0;
  std::vector<RoundMetrics> per_round;
};

/// Frozen inputs of a budget-capped selection, enough to replay the round's
/// auction against a modified bid vector.
struct RoundContext {
  RoundBidBook book;  // unsettled
  Money cap;
  std::optional<Money> hard_limit;
  std::vector<Money> overheads;  // aligned with book.bids
  std::vector<char> eligible;    // aligned with book.bids
  Branch branch = Branch::baseline;
};

/// Re-clears a captured round with some bids replaced, holding everything
/// else fixed.
RoundBidBook replay_round(const RoundContext& context, const std::vector<Bid>& overrides,
                          PaymentRule rule = PaymentRule::pay_as_bid);

struct SimulationOptions {
  PaymentRule payment_rule = PaymentRule::pay_as_bid;
  double greedy_percentile = 15.0;
  int oort_cohort = 0;  // 0 picks the GPS calibration cohort size
  bool keep_books = false;  // retain settled bid books for tracing
};

/// One replication: a scenario, a policy, and a seed.
///
/// Each round collects bids, selects winners with the configured policy,
/// settles pay-as-bid, asks the surrogate for local and global performance,
/// records reputation feedback, charges execution cost, updates the regret
/// queue and the rolled-over budget, and finally publishes the winning bid so
/// that losers can adjust.
class Simulation {
 public:
  Simulation(const Scenario& scenario, PolicyKind policy, std::uint64_t seed, SimulationOptions options = {});

  bool done() const { return done_; }
  const RoundMetrics& step();
  RunResult run();

  const Scenario& scenario() const { return scenario_; }
  const SchedulerState& scheduler() const { return state_; }
  const ReputationLedger& reputation() const { return ledger_; }
  const std::vector<BidderAgent>& agents() const { return agents_; }
  std::vector<BidderAgent>& agents() { return agents_; }
  const PerformanceOracle& oracle() const { return oracle_; }
  const RoundContext& last_context() const { return context_; }
  const std::vector<RoundMetrics>& history() const { return history_; }
  const std::vector<RoundBidBook>& books() const { return books_; }

  /// Records an externally scripted feedback (used by fixtures that need a
  /// particular reputation trajectory).
  ReputationLedger& mutable_reputation() { return ledger_; }

 private:
  double score_of(OwnerId owner, int now) const;
  SelectionOutcome select(const RoundBidBook& book, const std::vector<Money>& overheads, RoundMetrics& metrics);

  Scenario scenario_;
  PolicyKind policy_;
  std::uint64_t seed_;
  SimulationOptions options_;

  std::vector<BidderAgent> agents_;
  std::unordered_map<OwnerId, std::size_t> index_;
  std::vector<Money> overhead_by_owner_;
  ReputationLedger ledger_;
  PerformanceOracle oracle_;
  SchedulerState state_;
  OortStats oort_;
  std::size_t rrafl_probation_ = 0;
  int oort_cohort_ = 1;

  RoundContext context_;
  std::vector<RoundMetrics> history_;
  std::vector<RoundBidBook> books_;
  bool done_ = false;
};

RunResult run_simulation(const Scenario& scenario, PolicyKind policy, std::uint64_t seed,
                         SimulationOptions options = {});

/// Initial valuation of an owner under a run seed: private cost times one
/// plus a uniform markup.
Money initial_valuation(const DataOwnerProfile& owner, const BiddingConfig& bidding, std::uint64_t seed);

/// Fewest consecutive positive interactions that lift a fresh owner to the
/// reputation threshold.
std::size_t interactions_to_reputable(double threshold, double discount);

/// Mean GPS cohort size on seed 1, rounded, at least 1.
int default_oort_cohort(const Scenario& scenario);

}  // namespace aflsim
