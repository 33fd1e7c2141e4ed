#include "aflsim/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace aflsim {

using nlohmann::json;

namespace {

std::string fixed(double x, int digits = 10) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

// Six-decimal doubles; Money::from_real recovers the exact amount.
double money_json(Money m) { return m.to_real(); }

json round_json(const RoundMetrics& m) {
  json winners = json::array();
  for (const auto& w : m.winners) {
    winners.push_back({{"owner", w.owner},
                       {"bid", money_json(w.bid)},
                       {"payment", money_json(w.payment)},
                       {"private_cost", money_json(w.private_cost)},
                       {"utility", money_json(w.utility)},
                       {"score", w.score},
                       {"local_perf", w.local_perf},
                       {"positive_feedback", w.positive_feedback}});
  }
  return {{"round", m.round},
          {"xi", m.xi},
          {"revenue", money_json(m.revenue)},
          {"c_hire", money_json(m.c_hire)},
          {"c_exe", money_json(m.c_exe)},
          {"utility", money_json(m.utility)},
          {"Q_before", money_json(m.queue_before)},
          {"Q", money_json(m.queue)},
          {"theta_t", m.theta_t ? json(money_json(*m.theta_t)) : json(nullptr)},
          {"c_opt", money_json(m.c_opt)},
          {"n_selected", m.n_selected()},
          {"branch", to_string(m.branch)},
          {"improvement", m.improvement},
          {"indicator", m.indicator},
          {"winners", winners}};
}

json run_json(const RunResult& r) {
  json rounds = json::array();
  for (const auto& m : r.per_round) rounds.push_back(round_json(m));
  return {{"seed", r.seed},
          {"policy", to_string(r.policy)},
          {"total_budget", money_json(r.total_budget)},
          {"budget_capped", r.budget_capped},
          {"total_utility", money_json(r.total_utility)},
          {"total_cost", money_json(r.total_cost)},
          {"final_perf", r.final_perf},
          {"rounds_executed", r.rounds_executed},
          {"per_round", rounds}};
}

}  // namespace

void write_metrics_csv(std::ostream& os, std::span<const RunResult> runs) {
  os << kMetricsHeader << '\n';
  for (const auto& r : runs) {
    for (const auto& m : r.per_round) {
      os << r.seed << ',' << to_string(r.policy) << ',' << m.round << ',' << fixed(m.xi) << ',' << m.revenue << ','
         << m.c_hire << ',' << m.c_exe << ',' << m.utility << ',' << m.queue << ','
         << (m.theta_t ? m.theta_t->to_string() : std::string()) << ',' << m.c_opt << ',' << m.n_selected() << ','
         << to_string(m.branch) << '\n';
    }
  }
}

void write_reputation_csv(std::ostream& os, const Scenario& scenario, std::span<const RunResult> runs) {
  os << "seed,policy,round,owner,score\n";
  for (const auto& r : runs)
    for (const auto& m : r.per_round)
      for (std::size_t i = 0; i < m.reputation.size(); ++i)
        os << r.seed << ',' << to_string(r.policy) << ',' << m.round << ',' << scenario.owners[i].id << ','
           << fixed(m.reputation[i]) << '\n';
}

std::string result_json(const RunResult& run, int indent) { return run_json(run).dump(indent); }

std::string results_json(std::span<const RunResult> runs, int indent) {
  json all = json::array();
  for (const auto& r : runs) all.push_back(run_json(r));
  return all.dump(indent);
}

void write_trace_jsonl(std::ostream& os, const RunResult& run, const std::vector<RoundBidBook>& books) {
  for (const auto& b : books) {
    json bids = json::array();
    for (const auto& bid : b.bids) bids.push_back({{"owner", bid.owner}, {"amount", money_json(bid.amount)}});
    json payments = json::array();
    for (const auto& p : b.payments) payments.push_back({{"owner", p.owner}, {"amount", money_json(p.amount)}});
    json line = {{"seed", run.seed},
                 {"policy", to_string(run.policy)},
                 {"round", b.round},
                 {"bids", bids},
                 {"winners", b.winners},
                 {"payments", payments},
                 {"winning_bid", b.winning_bid ? json(money_json(*b.winning_bid)) : json(nullptr)}};
    os << line.dump() << '\n';
  }
}

void write_run_outputs(const std::filesystem::path& dir, const Scenario& scenario, std::span<const RunResult> runs) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream f(dir / name);
    if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
    return f;
  };
  {
    auto f = open("metrics.csv");
    write_metrics_csv(f, runs);
  }
  {
    auto f = open("reputation.csv");
    write_reputation_csv(f, scenario, runs);
  }
  if (runs.size() == 1) {
    auto f = open("result.json");
    f << result_json(runs.front()) << '\n';
  } else {
    auto f = open("results.json");
    f << results_json(runs) << '\n';
  }
}

}  // namespace aflsim
