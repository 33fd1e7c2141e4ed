#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "aflsim/money.hpp"

namespace aflsim {

using OwnerId = std::int64_t;

/// Raised for malformed scenarios; carries every violation found.
class ScenarioError : public std::runtime_error {
 public:
  explicit ScenarioError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

/// A prospective participant. Everything except `id` is private to the owner
/// or only observable by the federation through the energy model.
struct DataOwnerProfile {
  OwnerId id = 0;
  Money private_cost;
  double latent_quality = 0.0;
  std::int64_t update_size_bits = 1;
  double channel_gain = 1.0;
  double uplink_power = 1.0;

  bool operator==(const DataOwnerProfile&) const = default;
};

struct FederationConfig {
  Money total_budget;
  int horizon = 1;
  double value_weight = 1.0;
  double reputation_threshold = 0.7;
  double reputation_discount = 1.0;
  std::vector<double> improvement_thresholds;

  // Energy model. energy_weight is money per joule.
  double energy_weight = 0.0;
  double comm_norm = 1.0;
  std::int64_t global_model_bits = 1;
  int subchannel_count = 1;
  double subchannel_bandwidth = 1.0;
  double noise = 1.0;
  double cpu_freq = 1.0;
  std::int64_t cycles_per_update = 1;
  double capacitance = 0.0;
  int train_window = 1;

  double revenue_scale = 100.0;
  double target_performance = 1.0;

  bool operator==(const FederationConfig&) const = default;
};

/// Parameters of the surrogate learning-curve oracle.
struct OracleConfig {
  double initial_performance = 0.1;
  double xi_max = 0.99;
  double gain = 0.05;
  double saturation = 1.0;
  double noise_sd = 0.003;
  /// Optional CSV of (round, delta_xi_per_unit_quality); replaces the
  /// saturating curve when non-empty.
  std::string trace_file;

  bool operator==(const OracleConfig&) const = default;
};

/// Bidder behaviour: initial markup over private cost and the rate at which
/// losing bidders move toward the announced winning bid.
struct BiddingConfig {
  double adjust_rate = 0.3;
  double initial_markup_min = 0.1;
  double initial_markup_max = 0.5;

  bool operator==(const BiddingConfig&) const = default;
};

struct Scenario {
  FederationConfig federation;
  std::vector<DataOwnerProfile> owners;
  OracleConfig oracle;
  BiddingConfig bidding;

  bool operator==(const Scenario&) const = default;
};

/// Returns every invariant violation in the scenario; empty means valid.
std::vector<std::string> scenario_violations(const Scenario& scenario);

/// Throws ScenarioError listing every violation, otherwise returns the input.
const Scenario& validate_scenario(const Scenario& scenario);

/// Base per-round budget for round `round` (1-based). The total budget is
/// divided evenly, rounding down to the micro-unit; the remainder goes to the
/// final round so the base budgets sum to the total exactly.
Money base_round_budget(const FederationConfig& config, int round);

/// Base budget of a non-final round.
Money base_round_budget(const FederationConfig& config);

struct Bid {
  OwnerId owner = 0;
  Money amount;

  bool operator==(const Bid&) const = default;
};

struct Payment {
  OwnerId owner = 0;
  Money amount;

  bool operator==(const Payment&) const = default;
};

/// Bids, winners and settlement of one auction round.
struct RoundBidBook {
  int round = 0;
  std::vector<Bid> bids;
  std::vector<OwnerId> winners;
  std::vector<Payment> payments;
  std::optional<Money> winning_bid;
  bool settled = false;

  std::optional<Money> bid_of(OwnerId owner) const;
  Money payment_to(OwnerId owner) const;
  bool is_winner(OwnerId owner) const;
};

}  // namespace aflsim
