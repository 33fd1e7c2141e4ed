#include "aflsim/energy.hpp"

#include <cmath>
#include <string>

namespace aflsim {

double per_owner_comm_energy(const DataOwnerProfile& owner, const FederationConfig& config, double window) {
  const double snr = owner.uplink_power * owner.channel_gain / config.noise;
  const double rate_per_channel = window * config.subchannel_bandwidth * std::log2(1.0 + snr);
  const double denom = rate_per_channel * config.subchannel_count;
  if (!(denom > 0.0) || !std::isfinite(denom))
    throw UnreachableOwner("unreachable owner " + std::to_string(owner.id) + ": zero uplink rate");
  return config.comm_norm * static_cast<double>(config.global_model_bits) / denom;
}

double per_owner_comm_energy(const DataOwnerProfile& owner, const FederationConfig& config) {
  return per_owner_comm_energy(owner, config, config.train_window);
}

double round_comm_energy(std::span<const DataOwnerProfile> selected, const FederationConfig& config) {
  double total = 0.0;
  for (const auto& o : selected) total += per_owner_comm_energy(o, config);
  return total;
}

namespace {
double owner_cmp_energy(const DataOwnerProfile& owner, const FederationConfig& config) {
  return static_cast<double>(owner.update_size_bits) * static_cast<double>(config.cycles_per_update) *
         config.capacitance * config.cpu_freq * config.cpu_freq;
}
}  // namespace

double aggregation_energy(std::span<const DataOwnerProfile> selected, const FederationConfig& config) {
  double total = 0.0;
  for (const auto& o : selected) total += owner_cmp_energy(o, config);
  return total;
}

EnergyBreakdown execution_cost(std::span<const DataOwnerProfile> selected, const FederationConfig& config) {
  EnergyBreakdown e;
  for (const auto& o : selected) {
    const double com = per_owner_comm_energy(o, config);
    e.per_owner_comm[o.id] = com;
    e.comm_energy += com;
    e.cmp_energy += owner_cmp_energy(o, config);
  }
  e.total = e.comm_energy + e.cmp_energy;
  e.exe_cost = Money::from_real(config.energy_weight * e.total);
  return e;
}

Money owner_exe_overhead(const DataOwnerProfile& owner, const FederationConfig& config) {
  if (config.energy_weight == 0.0) return Money::zero();
  const double energy = per_owner_comm_energy(owner, config) + owner_cmp_energy(owner, config);
  // One extra micro-unit absorbs floating summation order differences.
  return Money::ceil_real(config.energy_weight * energy) + Money::from_micros(1);
}

}  // namespace aflsim
