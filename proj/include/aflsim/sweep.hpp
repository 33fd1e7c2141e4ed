#pragma once

#include <cstdint>
#include <vector>

#include "aflsim/simulation.hpp"

namespace aflsim {

/// Runs seeds [first, last] in parallel (OpenMP, one run per thread at a
/// time). Results are ordered by seed regardless of completion order.
std::vector<RunResult> run_seeds(const Scenario& scenario, PolicyKind policy, std::uint64_t first,
                                 std::uint64_t last, SimulationOptions options = {});

/// Serial reference for run_seeds.
std::vector<RunResult> run_seeds_serial(const Scenario& scenario, PolicyKind policy, std::uint64_t first,
                                        std::uint64_t last, SimulationOptions options = {});

}  // namespace aflsim
