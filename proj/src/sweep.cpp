#include "aflsim/sweep.hpp"

#include <exception>
#include <stdexcept>

namespace aflsim {

namespace {

SimulationOptions resolve(const Scenario& scenario, PolicyKind policy, SimulationOptions options) {
  if (policy == PolicyKind::oort_like && options.oort_cohort <= 0) options.oort_cohort = default_oort_cohort(scenario);
  return options;
}

void check_range(std::uint64_t first, std::uint64_t last) {
  if (last < first) throw std::invalid_argument("seed range is empty");
}

}  // namespace

std::vector<RunResult> run_seeds(const Scenario& scenario, PolicyKind policy, std::uint64_t first,
                                 std::uint64_t last, SimulationOptions options) {
  check_range(first, last);
  options = resolve(scenario, policy, options);
  const auto count = static_cast<std::int64_t>(last - first + 1);
  std::vector<RunResult> results(static_cast<std::size_t>(count));
  std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      results[static_cast<std::size_t>(i)] =
          run_simulation(scenario, policy, first + static_cast<std::uint64_t>(i), options);
    } catch (...) {
#pragma omp critical(aflsim_sweep_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

std::vector<RunResult> run_seeds_serial(const Scenario& scenario, PolicyKind policy, std::uint64_t first,
                                        std::uint64_t last, SimulationOptions options) {
  check_range(first, last);
  options = resolve(scenario, policy, options);
  std::vector<RunResult> results;
  for (std::uint64_t s = first; s <= last; ++s) results.push_back(run_simulation(scenario, policy, s, options));
  return results;
}

}  // namespace aflsim
