#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>

#include "aflsim/market.hpp"

namespace aflsim {

/// Learning-curve surrogate standing in for real federated training.
///
/// The global performance moves toward `xi_max` by a fraction that saturates
/// in the cohort's total latent quality; a participant's local performance is
/// the same step taken with its own quality alone. Noise is drawn from
/// per-(round, owner) substreams of the run seed, so draws do not depend on
/// who else was selected or in which order.
class PerformanceOracle {
 public:
  PerformanceOracle(const OracleConfig& config, std::uint64_t seed);

  double current() const { return cur_; }
  const OracleConfig& config() const { return config_; }

  /// Local model performance of one participant trained from `cur`.
  double local_performance(OwnerId owner, double quality, double cur, int round) const;

  /// Aggregates the cohort and returns the new global performance.
  double advance_global(std::span<const double> qualities, int round);

  /// Deterministic (noise-free) parts, exposed for tests and calibration.
  double local_step(double quality, double cur, int round) const;
  double global_step(double total_quality, double cur, int round) const;

 private:
  double noise(std::uint64_t stream, int round, OwnerId owner) const;
  double clamp(double xi) const;
  double trace_rate(int round) const;

  OracleConfig config_;
  std::uint64_t seed_;
  double cur_;
  std::map<int, double> trace_;  // round -> delta xi per unit quality
};

/// Revenue yield of a model with performance `xi`.
double revenue(double xi, double revenue_scale);

/// Reads a (round, delta_xi_per_unit_quality) CSV; a header line is allowed.
std::map<int, double> load_learning_trace(const std::filesystem::path& path);

}  // namespace aflsim
