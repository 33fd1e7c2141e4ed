#include "aflsim/market.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>
#include <sstream>

namespace aflsim {

std::string Money::to_string() const {
  const bool negative = micros_ < 0;
  // Avoid overflow on INT64_MIN by working in unsigned magnitude.
  const std::uint64_t magnitude =
      negative ? static_cast<std::uint64_t>(-(micros_ + 1)) + 1 : static_cast<std::uint64_t>(micros_);
  const std::uint64_t whole = magnitude / kScale;
  const std::uint64_t frac = magnitude % kScale;
  std::string frac_str = std::to_string(frac);
  frac_str.insert(0, 6 - frac_str.size(), '0');
  return (negative ? "-" : "") + std::to_string(whole) + "." + frac_str;
}

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += "; ";
    out += p;
  }
  return out;
}

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

ScenarioError::ScenarioError(std::vector<std::string> violations)
    : std::runtime_error("invalid scenario: " + join(violations)), violations_(std::move(violations)) {}

std::vector<std::string> scenario_violations(const Scenario& scenario) {
  std::vector<std::string> errs;
  const auto& f = scenario.federation;

  if (f.total_budget <= Money::zero()) errs.emplace_back("total_budget must be > 0");
  if (f.horizon < 1) errs.emplace_back("horizon must be >= 1");
  if (!(f.reputation_threshold > 0.0 && f.reputation_threshold < 1.0))
    errs.emplace_back("reputation_threshold must lie in (0, 1)");
  if (!positive_finite(f.value_weight)) errs.emplace_back("value_weight must be > 0");
  if (!(f.reputation_discount > 0.0 && f.reputation_discount <= 1.0))
    errs.emplace_back("reputation_discount must lie in (0, 1]");
  if (f.horizon >= 1 && f.improvement_thresholds.size() != static_cast<std::size_t>(f.horizon)) {
    errs.push_back("improvement_thresholds has " + std::to_string(f.improvement_thresholds.size()) +
                   " entries, expected horizon = " + std::to_string(f.horizon));
  }
  for (std::size_t i = 0; i < f.improvement_thresholds.size(); ++i) {
    const double v = f.improvement_thresholds[i];
    if (!std::isfinite(v) || v < 0.0) errs.push_back("improvement_thresholds[" + std::to_string(i) + "] must be >= 0");
  }
  if (!(std::isfinite(f.energy_weight) && f.energy_weight >= 0.0)) errs.emplace_back("energy_weight must be >= 0");
  if (!(std::isfinite(f.comm_norm) && f.comm_norm >= 0.0)) errs.emplace_back("comm_norm must be >= 0");
  if (f.global_model_bits <= 0) errs.emplace_back("global_model_bits must be > 0");
  if (f.subchannel_count <= 0) errs.emplace_back("subchannel_count must be > 0");
  if (!positive_finite(f.subchannel_bandwidth)) errs.emplace_back("subchannel_bandwidth must be > 0");
  if (!positive_finite(f.noise)) errs.emplace_back("noise must be > 0");
  if (!positive_finite(f.cpu_freq)) errs.emplace_back("cpu_freq must be > 0");
  if (f.cycles_per_update <= 0) errs.emplace_back("cycles_per_update must be > 0");
  if (!(std::isfinite(f.capacitance) && f.capacitance >= 0.0)) errs.emplace_back("capacitance must be >= 0");
  if (f.train_window <= 0) errs.emplace_back("train_window must be > 0");
  if (!(std::isfinite(f.revenue_scale) && f.revenue_scale >= 0.0)) errs.emplace_back("revenue_scale must be >= 0");
  if (!(f.target_performance > 0.0 && f.target_performance <= 1.0))
    errs.emplace_back("target_performance must lie in (0, 1]");

  std::map<OwnerId, int> seen;
  for (const auto& o : scenario.owners) {
    const std::string who = "owner " + std::to_string(o.id);
    if (++seen[o.id] == 2) errs.push_back("duplicate owner id " + std::to_string(o.id));
    if (o.private_cost < Money::zero()) errs.push_back(who + ": private_cost must be >= 0");
    if (!(o.latent_quality >= 0.0 && o.latent_quality <= 1.0)) errs.push_back(who + ": latent_quality must lie in [0, 1]");
    if (o.update_size_bits <= 0) errs.push_back(who + ": update_size_bits must be > 0");
    if (!positive_finite(o.channel_gain)) errs.push_back(who + ": channel_gain must be > 0");
    if (!positive_finite(o.uplink_power)) errs.push_back(who + ": uplink_power must be > 0");
  }

  const auto& q = scenario.oracle;
  if (!(q.xi_max > 0.0 && q.xi_max <= 1.0)) errs.emplace_back("oracle.xi_max must lie in (0, 1]");
  if (!(q.initial_performance >= 0.0 && q.initial_performance <= q.xi_max))
    errs.emplace_back("oracle.initial_performance must lie in [0, xi_max]");
  if (!positive_finite(q.gain)) errs.emplace_back("oracle.gain must be > 0");
  if (!positive_finite(q.saturation)) errs.emplace_back("oracle.saturation must be > 0");
  if (!(std::isfinite(q.noise_sd) && q.noise_sd >= 0.0)) errs.emplace_back("oracle.noise_sd must be >= 0");

  const auto& b = scenario.bidding;
  if (!(b.adjust_rate >= 0.0 && b.adjust_rate <= 1.0)) errs.emplace_back("bidding.adjust_rate must lie in [0, 1]");
  if (!(b.initial_markup_min >= 0.0 && b.initial_markup_min <= b.initial_markup_max))
    errs.emplace_back("bidding markups must satisfy 0 <= initial_markup_min <= initial_markup_max");
  return errs;
}

const Scenario& validate_scenario(const Scenario& scenario) {
  auto errs = scenario_violations(scenario);
  if (!errs.empty()) throw ScenarioError(std::move(errs));
  return scenario;
}

Money base_round_budget(const FederationConfig& config) {
  return Money::from_micros(config.total_budget.micros() / config.horizon);
}

Money base_round_budget(const FederationConfig& config, int round) {
  const Money base = base_round_budget(config);
  if (round != config.horizon) return base;
  return base + Money::from_micros(config.total_budget.micros() % config.horizon);
}

std::optional<Money> RoundBidBook::bid_of(OwnerId owner) const {
  for (const auto& b : bids)
    if (b.owner == owner) return b.amount;
  return std::nullopt;
}

Money RoundBidBook::payment_to(OwnerId owner) const {
  for (const auto& p : payments)
    if (p.owner == owner) return p.amount;
  return Money::zero();
}

bool RoundBidBook::is_winner(OwnerId owner) const {
  return std::find(winners.begin(), winners.end(), owner) != winners.end();
}

}  // namespace aflsim
