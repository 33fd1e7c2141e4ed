#include "aflsim/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "aflsim/random.hpp"
#include "aflsim/surrogate.hpp"

namespace aflsim {

// Learning-curve constants put a lowest-bid cohort of about four owners at a
// total utility near 5,100 over 80 rounds.
ScenarioTemplate default_template() {
  ScenarioTemplate t;
  t.oracle.gain = 0.1;
  t.oracle.saturation = 0.5;
  return t;
}

ScenarioTemplate emnist_template() {
  ScenarioTemplate t = default_template();
  t.owners = 20;
  t.train_window = 3;
  t.oracle.gain = 0.06;
  return t;
}

Scenario generate_scenario(const ScenarioTemplate& tmpl, std::uint64_t seed) {
  Scenario s;
  auto& f = s.federation;
  f.total_budget = Money::from_real(tmpl.total_budget);
  f.horizon = tmpl.horizon;
  f.value_weight = tmpl.value_weight;
  f.reputation_threshold = tmpl.reputation_threshold;
  f.reputation_discount = tmpl.reputation_discount;
  f.improvement_thresholds.assign(static_cast<std::size_t>(tmpl.horizon), 0.0);

  // Uplink SNR of 10 over a single 1 MHz sub-channel, 1 Mbit models, and an
  // energy price that makes one owner's execution cost about 0.01.
  f.comm_norm = 1.0;
  f.global_model_bits = 1'000'000;
  f.subchannel_count = 1;
  f.subchannel_bandwidth = 1e6;
  f.noise = 1e-9;
  f.cpu_freq = 1e9;
  f.cycles_per_update = 10;
  f.capacitance = 1e-28;
  f.train_window = tmpl.train_window;
  f.energy_weight = 0.0345;
  f.revenue_scale = 100.0;
  f.target_performance = 1.0;

  SplitMix64 gen(derive_seed(seed, {kStreamScenario}));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> jitter(-tmpl.cost_jitter, tmpl.cost_jitter);
  for (int i = 0; i < tmpl.owners; ++i) {
    DataOwnerProfile o;
    o.id = i + 1;
    o.latent_quality = unit(gen);
    o.private_cost = Money::from_real(std::max(0.05, tmpl.cost_base + tmpl.cost_slope * o.latent_quality + jitter(gen)));
    o.update_size_bits = 1'000'000;
    o.uplink_power = 0.2;
    o.channel_gain = 5e-8;
    s.owners.push_back(o);
  }
  s.oracle = tmpl.oracle;
  s.bidding = tmpl.bidding;
  f.improvement_thresholds = calibrate_improvement_thresholds(s);
  return s;
}

int calibration_cohort_size(const Scenario& scenario) {
  if (scenario.owners.empty()) return 0;
  std::vector<double> costs;
  for (const auto& o : scenario.owners) costs.push_back(o.private_cost.to_real());
  std::nth_element(costs.begin(), costs.begin() + static_cast<std::ptrdiff_t>(costs.size() / 2), costs.end());
  const double median = costs[costs.size() / 2];
  const double base = base_round_budget(scenario.federation).to_real();
  const int k = median > 0.0 ? static_cast<int>(std::floor(base / median)) : static_cast<int>(scenario.owners.size());
  return std::clamp(k, 1, static_cast<int>(scenario.owners.size()));
}

std::vector<double> calibrate_improvement_thresholds(const Scenario& scenario, int seeds) {
  const int horizon = scenario.federation.horizon;
  std::vector<double> mean(static_cast<std::size_t>(horizon), 0.0);
  if (seeds < 1 || scenario.owners.empty()) return mean;
  const auto k = static_cast<std::size_t>(calibration_cohort_size(scenario));

  std::vector<std::size_t> order(scenario.owners.size());
  for (int s = 1; s <= seeds; ++s) {
    PerformanceOracle oracle(scenario.oracle, static_cast<std::uint64_t>(s));
    for (int t = 1; t <= horizon; ++t) {
      SplitMix64 gen(derive_seed(static_cast<std::uint64_t>(s), {kStreamCohort, static_cast<std::uint64_t>(t)}));
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), gen);
      std::vector<double> qualities;
      for (std::size_t i = 0; i < k; ++i) qualities.push_back(scenario.owners[order[i]].latent_quality);
      const double before = oracle.current();
      mean[static_cast<std::size_t>(t - 1)] += oracle.advance_global(qualities, t) - before;
    }
  }
  for (auto& m : mean) m = std::max(0.0, m / seeds);
  return mean;
}

}  // namespace aflsim
