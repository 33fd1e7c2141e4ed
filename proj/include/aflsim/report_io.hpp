#pragma once

#include <filesystem>
#include <ostream>
#include <span>
#include <string>

#include "aflsim/simulation.hpp"

namespace aflsim {

/// Header of metrics.csv.
inline constexpr const char* kMetricsHeader =
    "seed,policy,round,xi,revenue,c_hire,c_exe,utility,Q,theta_t,c_opt,n_selected,branch";

void write_metrics_csv(std::ostream& os, std::span<const RunResult> runs);
void write_reputation_csv(std::ostream& os, const Scenario& scenario, std::span<const RunResult> runs);
std::string result_json(const RunResult& run, int indent = 2);
std::string results_json(std::span<const RunResult> runs, int indent = 2);

/// One JSON object per round with the full bid book and its settlement.
void write_trace_jsonl(std::ostream& os, const RunResult& run, const std::vector<RoundBidBook>& books);

/// Writes metrics.csv, reputation.csv and result.json (or results.json for
/// several runs) into `dir`, creating it if needed.
void write_run_outputs(const std::filesystem::path& dir, const Scenario& scenario, std::span<const RunResult> runs);

}  // namespace aflsim
