#include "aflsim/surrogate.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "aflsim/random.hpp"

namespace aflsim {

PerformanceOracle::PerformanceOracle(const OracleConfig& config, std::uint64_t seed)
    : config_(config), seed_(seed), cur_(config.initial_performance) {
  if (!config_.trace_file.empty()) trace_ = load_learning_trace(config_.trace_file);
}

double PerformanceOracle::clamp(double xi) const { return std::clamp(xi, 0.0, config_.xi_max); }

double PerformanceOracle::noise(std::uint64_t stream, int round, OwnerId owner) const {
  if (config_.noise_sd == 0.0) return 0.0;
  SplitMix64 gen(derive_seed(seed_, {stream, static_cast<std::uint64_t>(round), static_cast<std::uint64_t>(owner)}));
  std::normal_distribution<double> dist(0.0, config_.noise_sd);
  return dist(gen);
}

double PerformanceOracle::trace_rate(int round) const {
  if (trace_.empty()) return 0.0;
  auto it = trace_.upper_bound(round);
  if (it == trace_.begin()) return it->second;
  return std::prev(it)->second;
}

double PerformanceOracle::local_step(double quality, double cur, int round) const {
  if (!trace_.empty()) return trace_rate(round) * quality;
  return config_.gain * (config_.xi_max - cur) * quality;
}

double PerformanceOracle::global_step(double total_quality, double cur, int round) const {
  if (!trace_.empty()) return trace_rate(round) * total_quality;
  return config_.gain * (config_.xi_max - cur) * total_quality / (total_quality + config_.saturation);
}

double PerformanceOracle::local_performance(OwnerId owner, double quality, double cur, int round) const {
  return clamp(cur + local_step(quality, cur, round) + noise(kStreamLocalNoise, round, owner));
}

double PerformanceOracle::advance_global(std::span<const double> qualities, int round) {
  double total = 0.0;
  for (double q : qualities) total += q;
  cur_ = clamp(cur_ + global_step(total, cur_, round) + noise(kStreamGlobalNoise, round, 0));
  return cur_;
}

double revenue(double xi, double revenue_scale) { return revenue_scale * xi; }

std::map<int, double> load_learning_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read learning trace " + path.string());
  std::map<int, double> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    int round = 0;
    double rate = 0.0;
    if (!(ls >> round >> rate)) {
      if (out.empty()) continue;  // header
      throw std::runtime_error("malformed learning trace line: " + line);
    }
    out[round] = rate;
  }
  if (out.empty()) throw std::runtime_error("learning trace " + path.string() + " has no rows");
  return out;
}

}  // namespace aflsim
