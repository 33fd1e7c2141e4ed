#pragma once

#include <cstdint>
#include <vector>

#include "aflsim/market.hpp"

namespace aflsim {

/// Knobs for synthesizing a marketplace. Costs rise with latent quality:
/// cost = cost_base + cost_slope * quality + uniform(-cost_jitter, cost_jitter).
struct ScenarioTemplate {
  int owners = 60;
  int horizon = 80;
  double total_budget = 400.0;
  double reputation_threshold = 0.7;
  double reputation_discount = 0.9;
  double value_weight = 1.0;
  int train_window = 1;

  double cost_base = 0.8;
  double cost_slope = 2.0;
  double cost_jitter = 0.2;

  OracleConfig oracle;
  BiddingConfig bidding;
};

/// The 60-owner, 80-round, budget-400 market.
ScenarioTemplate default_template();

/// Harder 20-owner variant with a three-step training window and a slower
/// learning curve.
ScenarioTemplate emnist_template();

/// Draws owners from `tmpl` and fills the improvement thresholds with
/// calibrate_improvement_thresholds.
Scenario generate_scenario(const ScenarioTemplate& tmpl, std::uint64_t seed);

/// Per-round improvement thresholds from uninformed training: every round a
/// cohort of owners is drawn uniformly at random (as many as the base budget
/// buys at the median private cost), and the realized improvement is
/// averaged over `seeds` runs of the surrogate.
std::vector<double> calibrate_improvement_thresholds(const Scenario& scenario, int seeds = 30);

/// Cohort size used by the calibration.
int calibration_cohort_size(const Scenario& scenario);

}  // namespace aflsim
