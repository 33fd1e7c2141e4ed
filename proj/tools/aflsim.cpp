// aflsim: command-line driver for the gradual-recruitment AFL simulator.
//
// Exit codes: 0 success / audit PASS, 1 audit FAIL, 2 usage or config error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "aflsim/audit.hpp"
#include "aflsim/bench.hpp"
#include "aflsim/calibrate.hpp"
#include "aflsim/report_io.hpp"
#include "aflsim/scenario_io.hpp"
#include "aflsim/scheduler.hpp"
#include "aflsim/sweep.hpp"

namespace {

using namespace aflsim;

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SeedRange {
  std::uint64_t first = 1;
  std::uint64_t last = 1;
};

SeedRange parse_seeds(const std::string& seeds, std::uint64_t seed) {
  if (seeds.empty()) return {seed, seed};
  const auto dots = seeds.find("..");
  if (dots == std::string::npos) throw UsageError("--seeds expects A..B, got " + seeds);
  try {
    SeedRange r{std::stoull(seeds.substr(0, dots)), std::stoull(seeds.substr(dots + 2))};
    if (r.last < r.first) throw UsageError("--seeds range is empty: " + seeds);
    return r;
  } catch (const std::logic_error&) {
    throw UsageError("--seeds expects A..B, got " + seeds);
  }
}

PolicyKind policy_from(const std::string& name) {
  auto p = parse_policy(name);
  if (!p) throw UsageError("unknown policy " + name + " (expected gps|greedy|rrafl|oort)");
  return *p;
}

struct Common {
  std::string scenario;
  std::string policy = "gps";
  std::uint64_t seed = 1;
  std::string seeds;
  std::string out;
  bool trace = false;
  int oort_k = 0;
  double greedy_percentile = 15.0;

  SimulationOptions options() const {
    SimulationOptions o;
    o.oort_cohort = oort_k;
    o.greedy_percentile = greedy_percentile;
    return o;
  }
};

void add_common(CLI::App* cmd, Common& c, bool with_policy = true) {
  cmd->add_option("--scenario", c.scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  if (with_policy) {
    cmd->add_option("--policy", c.policy, "gps | greedy | rrafl | oort");
    cmd->add_option("--oort-k", c.oort_k, "OORT cohort size (0: GPS calibration run)");
    cmd->add_option("--greedy-percentile", c.greedy_percentile, "Greedy bid percentile");
  }
  cmd->add_option("--seed", c.seed, "Run seed");
  cmd->add_option("--seeds", c.seeds, "Seed range A..B (overrides --seed)");
}

int cmd_run(const Common& c) {
  const Scenario scenario = load_scenario(c.scenario);
  const PolicyKind policy = policy_from(c.policy);
  const SeedRange range = parse_seeds(c.seeds, c.seed);
  if (c.out.empty()) throw UsageError("run requires --out");

  std::vector<RunResult> runs;
  if (c.trace) {
    std::filesystem::create_directories(c.out);
    std::ofstream trace(std::filesystem::path(c.out) / "trace.jsonl");
    SimulationOptions opt = c.options();
    opt.keep_books = true;
    if (policy == PolicyKind::oort_like && opt.oort_cohort <= 0) opt.oort_cohort = default_oort_cohort(scenario);
    for (std::uint64_t s = range.first; s <= range.last; ++s) {
      Simulation sim(scenario, policy, s, opt);
      runs.push_back(sim.run());
      write_trace_jsonl(trace, runs.back(), sim.books());
    }
  } else {
    runs = run_seeds(scenario, policy, range.first, range.last, c.options());
  }
  write_run_outputs(c.out, scenario, runs);

  for (const auto& r : runs) {
    std::cout << "seed " << r.seed << " policy " << to_string(r.policy) << " rounds " << r.rounds_executed
              << " total_utility " << r.total_utility << " total_cost " << r.total_cost << " final_perf "
              << r.final_perf << '\n';
  }
  return kExitOk;
}

int cmd_audit_truthfulness(const Common& c, const TruthfulnessAuditConfig& cfg) {
  const Scenario scenario = load_scenario(c.scenario);
  const SeedRange range = parse_seeds(c.seeds, c.seed);
  bool pass = true;
  for (std::uint64_t s = range.first; s <= range.last; ++s) {
    const TruthfulnessReport rep = audit_truthfulness(scenario, s, cfg);
    std::cout << "seed " << s << ": " << rep.probes << " probes, " << rep.replays << " replays, "
              << rep.violations.size() << " profitable deviations, " << rep.negative_utility_deviations
              << " deviations with negative utility -> " << (rep.pass() ? "PASS" : "FAIL") << '\n';
    for (std::size_t i = 0; i < rep.violations.size() && i < 5; ++i)
      std::cout << "  " << rep.violations[i].describe() << '\n';
    pass = pass && rep.pass();
  }
  std::cout << (pass ? "PASS" : "FAIL") << '\n';
  return pass ? kExitOk : kExitFail;
}

int cmd_audit_runs(const Common& c, bool ir) {
  const Scenario scenario = load_scenario(c.scenario);
  const SeedRange range = parse_seeds(c.seeds, c.seed);
  const auto runs = run_seeds(scenario, policy_from(c.policy), range.first, range.last, c.options());
  bool pass = true;
  std::size_t checked = 0;
  for (const auto& r : runs) {
    const AuditFinding f = ir ? audit_individual_rationality(r) : audit_budget(r);
    checked += f.checked;
    if (!f.pass) {
      if (pass) std::cout << "counterexample: " << f.counterexample << '\n';
      pass = false;
    }
  }
  std::cout << (ir ? "individual rationality" : "budget feasibility") << ": " << runs.size() << " runs, " << checked
            << (ir ? " winner records" : " rounds") << " -> " << (pass ? "PASS" : "FAIL") << '\n';
  return pass ? kExitOk : kExitFail;
}

int cmd_bench(const std::vector<std::size_t>& sizes, int reps, const std::string& kernel) {
  SelectionKernel k = SelectionKernel::partition;
  if (kernel == "sort")
    k = SelectionKernel::full_sort;
  else if (kernel != "partition")
    throw UsageError("--kernel expects partition|sort");
  const BenchReport rep = bench_selection(sizes, reps, 1, k);
  for (const auto& p : rep.points) std::cout << "N=" << p.n << " median_seconds=" << p.median_seconds << '\n';
  std::cout << "slope=" << rep.slope << '\n';
  return kExitOk;
}

int cmd_calibrate(const Common& c, int calib_seeds) {
  Scenario scenario = load_scenario(c.scenario);
  scenario.federation.improvement_thresholds = calibrate_improvement_thresholds(scenario, calib_seeds);
  if (c.out.empty()) {
    std::cout << dump_scenario(scenario) << '\n';
  } else {
    save_scenario(scenario, c.out);
    std::cout << "wrote " << c.out << " (cohort size " << calibration_cohort_size(scenario) << ", " << calib_seeds
              << " seeds)\n";
  }
  return kExitOk;
}

int cmd_generate(const std::string& tmpl, std::uint64_t seed, const std::string& out) {
  ScenarioTemplate t;
  if (tmpl == "default")
    t = default_template();
  else if (tmpl == "emnist")
    t = emnist_template();
  else
    throw UsageError("--template expects default|emnist");
  const Scenario s = generate_scenario(t, seed);
  if (out.empty())
    std::cout << dump_scenario(s) << '\n';
  else
    save_scenario(s, out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"aflsim: gradual participant recruitment for auction-based federated learning"};
  app.require_subcommand(1);

  Common run_opts;
  auto* run = app.add_subcommand("run", "Run one or more seeded replications");
  add_common(run, run_opts);
  run->add_option("--out", run_opts.out, "Output directory")->required();
  run->add_flag("--trace", run_opts.trace, "Also write per-round bid books to trace.jsonl");

  auto* audit = app.add_subcommand("audit", "Property audits");
  audit->require_subcommand(1);
  Common truth_opts;
  TruthfulnessAuditConfig truth_cfg;
  bool mutate_payment = false;
  auto* truth = audit->add_subcommand("truthfulness", "Deviation-grid replay of GPS rounds");
  add_common(truth, truth_opts, false);
  truth->add_option("--rounds", truth_cfg.probe_rounds, "Probe rounds per seed");
  truth->add_option("--agents", truth_cfg.probe_agents, "Probe agents per round");
  truth->add_flag("--mutate-payment", mutate_payment, "Replay with every winner paid the winning bid");
  Common ir_opts, budget_opts;
  auto* ir = audit->add_subcommand("ir", "Individual rationality over seeded runs");
  add_common(ir, ir_opts);
  auto* budget = audit->add_subcommand("budget", "Budget feasibility over seeded runs");
  add_common(budget, budget_opts);

  std::vector<std::size_t> sizes = {1000, 10000, 100000, 1000000};
  int reps = 15;
  std::string kernel = "partition";
  auto* bench = app.add_subcommand("bench", "Time the selection step and fit its log-log slope");
  bench->add_option("--sizes", sizes, "Book sizes");
  bench->add_option("--reps", reps, "Repetitions per size");
  bench->add_option("--kernel", kernel, "partition | sort");

  Common calib_opts;
  int calib_seeds = 30;
  auto* calib = app.add_subcommand("calibrate-lambda", "Recompute improvement thresholds for a scenario");
  add_common(calib, calib_opts, false);
  calib->add_option("--calib-seeds", calib_seeds, "Calibration replications");
  calib->add_option("--out", calib_opts.out, "Write the updated scenario here (default: stdout)");

  std::string tmpl = "default", gen_out;
  std::uint64_t gen_seed = 2024;
  auto* gen = app.add_subcommand("generate", "Synthesize a scenario file");
  gen->add_option("--template", tmpl, "default | emnist");
  gen->add_option("--seed", gen_seed, "Scenario seed");
  gen->add_option("--out", gen_out, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run) return cmd_run(run_opts);
    if (*truth) {
      if (mutate_payment) truth_cfg.payment_rule = PaymentRule::uniform_winning_bid;
      return cmd_audit_truthfulness(truth_opts, truth_cfg);
    }
    if (*ir) return cmd_audit_runs(ir_opts, true);
    if (*budget) return cmd_audit_runs(budget_opts, false);
    if (*bench) return cmd_bench(sizes, reps, kernel);
    if (*calib) return cmd_calibrate(calib_opts, calib_seeds);
    if (*gen) return cmd_generate(tmpl, gen_seed, gen_out);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ScenarioError& e) {
    std::cerr << e.what() << '\n';
    return kExitUsage;
  } catch (const BudgetViolation& e) {
    std::cerr << "budget violation: " << e.what() << '\n';
    return kExitFail;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
