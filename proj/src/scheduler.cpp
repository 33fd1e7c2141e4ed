#include "aflsim/scheduler.hpp"

#include <string>

#include "aflsim/reputation.hpp"

namespace aflsim {

SchedulerState initial_scheduler_state(const FederationConfig& config, double initial_perf) {
  SchedulerState s;
  s.queue = Money::zero();
  s.round_budget = base_round_budget(config, 1);
  s.round = 1;
  s.last_perf = initial_perf;
  return s;
}

Money compute_c_opt(const RoundBidBook& book, const ScoreFn& score, double threshold, Money base_budget) {
  auto outcome = select_lowest_within_budget(
      book, base_budget, [&](OwnerId id) { return is_reputable(score(id), threshold); });
  return outcome.spend;
}

Money next_queue(Money queue, Money c_opt, bool indicator, Money hire_spent) {
  return max(Money::zero(), queue + (indicator ? c_opt : Money::zero()) - hire_spent);
}

SchedulerState update_queue(SchedulerState state, Money c_opt, Money hire_spent, double improvement,
                            double threshold) {
  state.queue = next_queue(state.queue, c_opt, regret_indicator(improvement, threshold), hire_spent);
  return state;
}

Money hire_budget(Money queue, Money c_opt, double value_weight, Money round_budget) {
  const Money raw = queue + c_opt - Money::from_real(value_weight);
  return min(max(Money::zero(), raw), round_budget);
}

SchedulerState rollover(SchedulerState state, Money hire_spent, Money exe_spent, Money next_base) {
  if (hire_spent + exe_spent > state.round_budget) {
    throw BudgetViolation("round " + std::to_string(state.round) + " spent " +
                          (hire_spent + exe_spent).to_string() + " of " + state.round_budget.to_string());
  }
  state.spent_hire_history.push_back(hire_spent);
  state.spent_exe_history.push_back(exe_spent);
  state.round_budget = next_base + (state.round_budget - hire_spent - exe_spent);
  ++state.round;
  return state;
}

std::string_view to_string(Branch branch) {
  switch (branch) {
    case Branch::lowest_bid:
      return "lowest_bid";
    case Branch::reputable:
      return "reputable";
    case Branch::baseline:
      return "baseline";
  }
  return "unknown";
}

GpsPlan plan_gps_round(const SchedulerState& state, const RoundBidBook& book, const ScoreFn& score,
                       const FederationConfig& config) {
  const Money base = base_round_budget(config, state.round);
  const double psi = config.reputation_threshold;

  GpsPlan plan;
  plan.c_opt = compute_c_opt(book, score, psi, base);
  if (state.queue <= Money::zero()) {
    plan.branch = Branch::lowest_bid;
    plan.cap = min(base, state.round_budget);
  } else {
    plan.branch = Branch::reputable;
    plan.cap = hire_budget(state.queue, plan.c_opt, config.value_weight, state.round_budget);
    plan.filter = [score, psi](OwnerId id) { return is_reputable(score(id), psi); };
  }
  return plan;
}

bool DriftReport::all_hold() const {
  for (const auto& r : rounds)
    if (!r.holds) return false;
  return true;
}

DriftReport drift_bound_audit(std::span<const QueueTransition> history) {
  using wide = __int128;
  constexpr double kScale2 = static_cast<double>(Money::kScale) * static_cast<double>(Money::kScale);

  DriftReport report;
  double drift_sum = 0.0;
  for (const auto& h : history) {
    const wide q = h.queue_before.micros();
    const wide q1 = h.queue_after.micros();
    const wide c = h.indicator ? h.c_opt.micros() : 0;  // c_opt * I
    const wide b = h.hire_spent.micros();

    // Both sides doubled to stay integral.
    const wide lhs2 = q1 * q1 - q * q;
    const wide rhs2 = 2 * q * (c - b) + c * c - 2 * c * b + b * b;

    DriftCheck check;
    check.lhs = static_cast<double>(lhs2) / 2.0 / kScale2;
    check.rhs = static_cast<double>(rhs2) / 2.0 / kScale2;
    check.holds = lhs2 <= rhs2;
    report.rounds.push_back(check);

    const double l = static_cast<double>(q * q) / 2.0 / kScale2;
    report.lyapunov.push_back(l);
    drift_sum += check.lhs;
  }
  if (!history.empty()) {
    const double q_end = history.back().queue_after.to_real();
    report.lyapunov.push_back(q_end * q_end / 2.0);
    report.average_drift = drift_sum / static_cast<double>(history.size());
  }
  return report;
}

}  // namespace aflsim
