#pragma once

#include <map>
#include <span>
#include <stdexcept>

#include "aflsim/market.hpp"

namespace aflsim {

// Server-side energy and the execution cost it induces. Energies are joules;
// FederationConfig::energy_weight converts joules to money.

class UnreachableOwner : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct EnergyBreakdown {
  double comm_energy = 0.0;
  double cmp_energy = 0.0;
  double total = 0.0;
  Money exe_cost;
  std::map<OwnerId, double> per_owner_comm;
};

/// Uplink energy for one owner's update over an OFDMA channel with a fixed
/// upload window per sub-channel. Throws UnreachableOwner on a zero rate.
double per_owner_comm_energy(const DataOwnerProfile& owner, const FederationConfig& config, double window);
double per_owner_comm_energy(const DataOwnerProfile& owner, const FederationConfig& config);

double round_comm_energy(std::span<const DataOwnerProfile> selected, const FederationConfig& config);

/// Aggregation energy: sum of update_size * cycles * capacitance * freq^2.
double aggregation_energy(std::span<const DataOwnerProfile> selected, const FederationConfig& config);

/// exe_cost = energy_weight * (comm + aggregation), rounded half-even to the
/// micro-unit.
EnergyBreakdown execution_cost(std::span<const DataOwnerProfile> selected, const FederationConfig& config);

/// Upper bound on one owner's share of execution cost, rounded up. Summing
/// these over any set never undercuts execution_cost of that set.
Money owner_exe_overhead(const DataOwnerProfile& owner, const FederationConfig& config);

}  // namespace aflsim
