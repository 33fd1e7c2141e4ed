#include "aflsim/audit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace aflsim {

std::string DeviationCounterexample::describe() const {
  std::ostringstream os;
  os << "seed " << seed << " round " << round << " owner " << owner << ": bid x" << multiplier << " ("
     << deviant_bid << " instead of " << truthful_bid << ") earns " << deviant_utility << " > truthful "
     << truthful_utility;
  return os.str();
}

std::vector<int> spread_indices(int count, int upto) {
  std::vector<int> out;
  if (count <= 0 || upto <= 0) return out;
  const int n = std::min(count, upto);
  for (int k = 0; k < n; ++k) out.push_back(static_cast<int>(static_cast<long long>(k) * upto / n));
  return out;
}

TruthfulnessReport audit_truthfulness(const Scenario& scenario, std::uint64_t seed,
                                      const TruthfulnessAuditConfig& config) {
  TruthfulnessReport report;
  Simulation sim(scenario, PolicyKind::gps_afl, seed);

  std::vector<int> rounds;
  for (int r : spread_indices(config.probe_rounds, scenario.federation.horizon)) rounds.push_back(r + 1);
  const auto agents = spread_indices(config.probe_agents, static_cast<int>(scenario.owners.size()));

  std::size_t next = 0;
  while (!sim.done() && next < rounds.size()) {
    const RoundMetrics& m = sim.step();
    if (m.round != rounds[next]) continue;
    ++next;

    const RoundContext& ctx = sim.last_context();
    const RoundBidBook truthful = replay_round(ctx, {}, config.payment_rule);
    for (int a : agents) {
      const auto& profile = scenario.owners[static_cast<std::size_t>(a)];
      const Money truthful_bid = *ctx.book.bid_of(profile.id);
      const Money truthful_u = owner_utility(truthful, profile);
      ++report.probes;
      for (double mult : config.multipliers) {
        const Money deviant_bid = Money::from_real(truthful_bid.to_real() * mult);
        const RoundBidBook replay = replay_round(ctx, {{profile.id, deviant_bid}}, config.payment_rule);
        const Money u = owner_utility(replay, profile);
        ++report.replays;
        if (u < Money::zero()) ++report.negative_utility_deviations;
        if (u > truthful_u) {
          report.violations.push_back(
              {seed, m.round, profile.id, mult, truthful_bid, deviant_bid, truthful_u, u});
        }
      }
    }
  }
  return report;
}

AuditFinding audit_individual_rationality(const RunResult& run) {
  AuditFinding f;
  for (const auto& m : run.per_round) {
    for (const auto& w : m.winners) {
      ++f.checked;
      if (f.pass && w.utility < Money::zero()) {
        f.pass = false;
        std::ostringstream os;
        os << "seed " << run.seed << " round " << m.round << ": owner " << w.owner << " paid " << w.payment
           << " with cost " << w.private_cost << " (utility " << w.utility << ")";
        f.counterexample = os.str();
      }
    }
  }
  return f;
}

AuditFinding audit_budget(const RunResult& run) {
  AuditFinding f;
  if (!run.budget_capped) return f;
  Money cumulative;
  for (const auto& m : run.per_round) {
    ++f.checked;
    const Money spend = m.c_hire + m.c_exe;
    cumulative += spend;
    if (!f.pass) continue;
    std::ostringstream os;
    if (!m.theta_t || spend > *m.theta_t) {
      os << "seed " << run.seed << " round " << m.round << ": spend " << spend << " exceeds round budget "
         << (m.theta_t ? m.theta_t->to_string() : std::string("(none)"));
    } else if (cumulative > run.total_budget) {
      os << "seed " << run.seed << " round " << m.round << ": cumulative spend " << cumulative
         << " exceeds total budget " << run.total_budget;
    } else {
      continue;
    }
    f.pass = false;
    f.counterexample = os.str();
  }
  return f;
}

IrBudgetReport audit_ir_and_budget(const RunResult& run) {
  return {audit_individual_rationality(run), audit_budget(run)};
}

AuditFinding audit_branches(const RunResult& run, double reputation_threshold) {
  AuditFinding f;
  if (run.policy != PolicyKind::gps_afl) return f;
  for (const auto& m : run.per_round) {
    ++f.checked;
    if (!f.pass) continue;
    std::ostringstream os;
    if (m.queue_before > Money::zero()) {
      if (m.branch != Branch::reputable) {
        os << "round " << m.round << ": Q=" << m.queue_before << " but branch " << to_string(m.branch);
      } else {
        for (const auto& w : m.winners)
          if (w.score < reputation_threshold) {
            os << "round " << m.round << ": owner " << w.owner << " hired with score " << w.score;
            break;
          }
      }
    } else if (m.branch != Branch::lowest_bid) {
      os << "round " << m.round << ": Q=0 but branch " << to_string(m.branch);
    }
    if (!os.str().empty()) {
      f.pass = false;
      f.counterexample = "seed " + std::to_string(run.seed) + " " + os.str();
    }
  }
  return f;
}

std::vector<QueueTransition> queue_transitions(const RunResult& run) {
  std::vector<QueueTransition> out;
  for (const auto& m : run.per_round) out.push_back({m.queue_before, m.queue, m.c_opt, m.c_hire, m.indicator});
  return out;
}

}  // namespace aflsim
