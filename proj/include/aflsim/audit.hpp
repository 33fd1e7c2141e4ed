#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aflsim/simulation.hpp"

namespace aflsim {

// Executable checks for the mechanism's incentive and budget properties.

struct DeviationCounterexample {
  std::uint64_t seed = 0;
  int round = 0;
  OwnerId owner = 0;
  double multiplier = 1.0;
  Money truthful_bid;
  Money deviant_bid;
  Money truthful_utility;
  Money deviant_utility;

  std::string describe() const;
};

struct TruthfulnessAuditConfig {
  int probe_rounds = 20;   // spread evenly over the horizon
  int probe_agents = 10;   // spread evenly over the owner list
  std::vector<double> multipliers = {0.5, 0.75, 0.9, 1.0, 1.1, 1.5, 2.0};
  PaymentRule payment_rule = PaymentRule::pay_as_bid;
};

struct TruthfulnessReport {
  std::size_t probes = 0;   // (round, agent) pairs
  std::size_t replays = 0;  // individual deviation replays
  std::size_t negative_utility_deviations = 0;
  std::vector<DeviationCounterexample> violations;

  bool pass() const { return violations.empty(); }
};

/// Replays GPS rounds of one seeded run with a single agent's bid scaled by
/// each multiplier, everything else frozen, and flags any strictly more
/// profitable deviation. The run itself always uses pay-as-bid; the payment
/// rule in `config` only affects the replays.
TruthfulnessReport audit_truthfulness(const Scenario& scenario, std::uint64_t seed,
                                      const TruthfulnessAuditConfig& config = {});

/// Probe rounds / agent indices used by the audit.
std::vector<int> spread_indices(int count, int upto);

struct AuditFinding {
  bool pass = true;
  std::size_t checked = 0;
  std::string counterexample;  // first one found
};

AuditFinding audit_individual_rationality(const RunResult& run);

/// Per-round spend within the round budget and cumulative spend within the
/// total budget. Vacuous for policies without a budget.
AuditFinding audit_budget(const RunResult& run);

struct IrBudgetReport {
  AuditFinding ir;
  AuditFinding budget;

  bool pass() const { return ir.pass && budget.pass; }
};

IrBudgetReport audit_ir_and_budget(const RunResult& run);

/// Queue-positive rounds hired only reputable owners; queue-empty rounds
/// used the unfiltered lowest-bid branch.
AuditFinding audit_branches(const RunResult& run, double reputation_threshold);

std::vector<QueueTransition> queue_transitions(const RunResult& run);

}  // namespace aflsim
