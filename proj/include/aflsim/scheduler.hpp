#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "aflsim/market.hpp"
#include "aflsim/selection.hpp"

namespace aflsim {

/// Raised when an accounting step would overspend the round budget. This
/// indicates a bug, never a recoverable condition.
class BudgetViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

using ScoreFn = std::function<double(OwnerId)>;

/// Controller state carried between rounds.
struct SchedulerState {
  Money queue;          // regret backlog, always >= 0
  Money round_budget;   // budget available this round, rollover included
  int round = 1;
  double last_perf = 0.0;
  std::vector<Money> spent_hire_history;
  std::vector<Money> spent_exe_history;
  std::vector<Money> c_opt_history;
};

SchedulerState initial_scheduler_state(const FederationConfig& config, double initial_perf);

/// Counterfactual spend of filling the base budget with reputable bidders only.
Money compute_c_opt(const RoundBidBook& book, const ScoreFn& score, double threshold, Money base_budget);

/// True when the round's improvement fell short of its threshold.
inline bool regret_indicator(double improvement, double threshold) { return improvement < threshold; }

/// max(0, queue + c_opt * I - hire_spent)
Money next_queue(Money queue, Money c_opt, bool indicator, Money hire_spent);

SchedulerState update_queue(SchedulerState state, Money c_opt, Money hire_spent, double improvement,
                            double threshold);

/// Hiring budget while the queue is positive: queue + c_opt - V, floored at
/// zero and capped at the round budget.
Money hire_budget(Money queue, Money c_opt, double value_weight, Money round_budget);

/// Carries unspent budget into the next round and appends the spend history.
/// Throws BudgetViolation if hire + exe exceeds the current round budget.
SchedulerState rollover(SchedulerState state, Money hire_spent, Money exe_spent, Money next_base);

enum class Branch { lowest_bid, reputable, baseline };
std::string_view to_string(Branch branch);

/// What the controller decided for the coming round.
struct GpsPlan {
  Branch branch = Branch::lowest_bid;
  Money c_opt;
  Money cap;
  BidFilter filter;  // empty on the lowest-bid branch
};

/// Branch choice for a round: with an empty queue hire the cheapest bids
/// within min(base, remaining); otherwise hire reputable bidders within the
/// queue-driven hiring budget.
GpsPlan plan_gps_round(const SchedulerState& state, const RoundBidBook& book, const ScoreFn& score,
                       const FederationConfig& config);

// --- queue drift audit -----------------------------------------------------

struct QueueTransition {
  Money queue_before;
  Money queue_after;
  Money c_opt;
  Money hire_spent;
  bool indicator = false;
};

struct DriftCheck {
  double lhs = 0.0;  // Q(t+1)^2/2 - Q(t)^2/2
  double rhs = 0.0;  // expanded upper bound
  bool holds = true;
};

struct DriftReport {
  std::vector<DriftCheck> rounds;
  std::vector<double> lyapunov;  // L(t) = Q(t)^2 / 2, one entry per round start plus the final one
  double average_drift = 0.0;

  bool all_hold() const;
};

/// Checks, per round, that the one-step change of Q^2/2 stays below
/// Q (c_opt I - hire) + c_opt^2 I / 2 - c_opt I hire + hire^2 / 2.
/// The comparison is exact in integer micro-units.
DriftReport drift_bound_audit(std::span<const QueueTransition> history);

}  // namespace aflsim
