#pragma once

// Scripted scenarios shared by the integration tests and the acceptance gate.

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "aflsim/market.hpp"
#include "aflsim/scenario_io.hpp"
#include "aflsim/scheduler.hpp"
#include "aflsim/simulation.hpp"

namespace fixtures {

using namespace aflsim;

inline std::filesystem::path scenario_dir() { return AFLSIM_SCENARIO_DIR; }

inline Scenario default_scenario() { return load_scenario(scenario_dir() / "default.json"); }

inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("aflsim_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline DataOwnerProfile owner(OwnerId id, double cost, double quality) {
  DataOwnerProfile o;
  o.id = id;
  o.private_cost = Money::from_real(cost);
  o.latent_quality = quality;
  return o;
}

/// Small market with no energy cost, noise-free learning and a fixed markup.
inline Scenario tiny_scenario(std::vector<DataOwnerProfile> owners, double budget, int horizon) {
  Scenario s;
  s.owners = std::move(owners);
  s.federation.total_budget = Money::from_real(budget);
  s.federation.horizon = horizon;
  s.federation.reputation_discount = 0.9;
  s.federation.improvement_thresholds.assign(static_cast<std::size_t>(horizon), 0.0);
  s.oracle.initial_performance = 0.5;
  s.oracle.noise_sd = 0.0;
  s.bidding.initial_markup_min = 0.1;
  s.bidding.initial_markup_max = 0.1;
  return s;
}

/// Execution cost heavy enough that the per-round hard limit often blocks the
/// second-cheapest bid, so actual hiring falls short of the reputable-only
/// spend and the regret queue turns positive.
inline Scenario queue_positive_scenario() {
  Scenario s = tiny_scenario({owner(1, 1.0, 0.6), owner(2, 1.2, 0.6), owner(3, 1.5, 0.6), owner(4, 2.0, 0.6)}, 60.0, 20);
  s.federation.energy_weight = 1.0;
  s.federation.improvement_thresholds.assign(20, 0.02);
  s.oracle.gain = 0.05;
  return s;
}

/// Learning trace that improves for two rounds, degrades for three, then
/// improves again. Every hired owner therefore collects two good, three bad,
/// then only good feedback.
inline Scenario redemption_scenario(const std::filesystem::path& dir) {
  const auto trace = dir / "trace.csv";
  std::ofstream(trace) << "round,rate\n1,0.02\n3,-0.02\n6,0.02\n";
  Scenario s = tiny_scenario({owner(1, 1.0, 0.6), owner(2, 1.2, 0.6), owner(3, 5.0, 0.6)}, 40.0, 16);
  s.oracle.trace_file = trace.string();
  return s;
}

struct Redemption {
  int reputable_round = 0;    // first round after which owner 1 scored >= threshold
  int dropped_round = 0;      // first later round after which it fell below
  int redeemed_round = 0;     // first round after that which lifted it back
  bool filtered_when_dropped = false;   // a Q>0 plan excluded it while dropped
  bool admitted_when_redeemed = false;  // a Q>0 plan admitted it again
  std::vector<double> scores;           // owner 1 after each round

  bool demonstrated() const {
    return reputable_round > 0 && dropped_round > reputable_round && redeemed_round > dropped_round &&
           filtered_when_dropped && admitted_when_redeemed;
  }
};

/// Runs the redemption scenario under GPS and, after every round, asks the
/// controller what a queue-positive plan for that round's bids would admit.
inline Redemption run_redemption(const std::filesystem::path& dir) {
  const Scenario s = redemption_scenario(dir);
  const double psi = s.federation.reputation_threshold;
  Simulation sim(s, PolicyKind::gps_afl, 1);
  Redemption out;
  while (!sim.done()) {
    const RoundMetrics& m = sim.step();
    const double score = sim.reputation().score(1, m.round);
    out.scores.push_back(score);

    SchedulerState probe = sim.scheduler();
    probe.queue = Money::from_real(10.0);
    probe.round = m.round;
    const auto rep = [&](OwnerId id) { return sim.reputation().score(id, m.round); };
    const GpsPlan plan = plan_gps_round(probe, sim.last_context().book, rep, s.federation);
    const bool admitted = plan.branch == Branch::reputable && plan.filter && plan.filter(1);

    if (score >= psi) {
      if (out.reputable_round == 0) {
        out.reputable_round = m.round;
      } else if (out.dropped_round > 0 && out.redeemed_round == 0) {
        out.redeemed_round = m.round;
        out.admitted_when_redeemed = admitted;
      }
    } else if (out.reputable_round > 0 && out.dropped_round == 0) {
      out.dropped_round = m.round;
      out.filtered_when_dropped = plan.branch == Branch::reputable && !admitted;
    }
  }
  return out;
}

}  // namespace fixtures
