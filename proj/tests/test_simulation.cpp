#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "aflsim/audit.hpp"
#include "aflsim/report_io.hpp"
#include "aflsim/sweep.hpp"
#include "fixtures.hpp"

using namespace aflsim;
using fixtures::owner;
using fixtures::tiny_scenario;

namespace {

std::string metrics_of(const std::vector<RunResult>& runs) {
  std::ostringstream os;
  write_metrics_csv(os, runs);
  return os.str();
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

bool same_run(const RunResult& a, const RunResult& b) {
  if (a.seed != b.seed || a.total_cost != b.total_cost || a.total_utility != b.total_utility ||
      a.rounds_executed != b.rounds_executed || a.per_round.size() != b.per_round.size())
    return false;
  for (std::size_t i = 0; i < a.per_round.size(); ++i) {
    const auto& x = a.per_round[i];
    const auto& y = b.per_round[i];
    if (x.xi != y.xi || x.c_hire != y.c_hire || x.c_exe != y.c_exe || x.queue != y.queue ||
        x.winners.size() != y.winners.size())
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("identical inputs give byte-identical metrics") {
  const Scenario s = fixtures::default_scenario();
  for (PolicyKind p : {PolicyKind::gps_afl, PolicyKind::greedy_percentile, PolicyKind::rrafl_like,
                       PolicyKind::oort_like}) {
    CAPTURE(to_string(p));
    const std::vector<RunResult> a{run_simulation(s, p, 7)};
    const std::vector<RunResult> b{run_simulation(s, p, 7)};
    CHECK(metrics_of(a) == metrics_of(b));
  }
  const std::vector<RunResult> c{run_simulation(s, PolicyKind::gps_afl, 8)};
  CHECK(metrics_of(c) != metrics_of({run_simulation(s, PolicyKind::gps_afl, 7)}));
}

TEST_CASE("parallel seed sweep matches the serial reference") {
  const Scenario s = fixtures::default_scenario();
  for (PolicyKind p : {PolicyKind::gps_afl, PolicyKind::rrafl_like, PolicyKind::oort_like}) {
    const auto par = run_seeds(s, p, 3, 18);
    const auto ser = run_seeds_serial(s, p, 3, 18);
    REQUIRE(par.size() == 16);
    REQUIRE(ser.size() == 16);
    for (std::size_t i = 0; i < par.size(); ++i) {
      CHECK(par[i].seed == 3 + i);
      CHECK(same_run(par[i], ser[i]));
    }
    CHECK(metrics_of(par) == metrics_of(ser));
  }
}

TEST_CASE("seeded runs stay within budget, pay rationally and satisfy the drift bound") {
  const Scenario s = fixtures::default_scenario();
  for (const RunResult& r : run_seeds(s, PolicyKind::gps_afl, 1, 20)) {
    CAPTURE(r.seed);
    const IrBudgetReport rep = audit_ir_and_budget(r);
    CHECK_MESSAGE(rep.ir.pass, rep.ir.counterexample);
    CHECK_MESSAGE(rep.budget.pass, rep.budget.counterexample);
    CHECK(rep.budget.checked == 80);
    CHECK(audit_branches(r, 0.7).pass);
    const auto transitions = queue_transitions(r);
    CHECK(drift_bound_audit(transitions).all_hold());

    // Independent recount of the spend from the winner records.
    Money total;
    for (const auto& m : r.per_round) {
      Money paid;
      for (const auto& w : m.winners) {
        paid += w.payment;
        CHECK(w.payment == w.bid);
        CHECK(w.utility == w.payment - w.private_cost);
      }
      CHECK(paid == m.c_hire);
      CHECK(m.utility == m.revenue - m.c_hire - m.c_exe);
      total += m.c_hire + m.c_exe;
    }
    CHECK(total == r.total_cost);
    CHECK(total <= s.federation.total_budget);
  }
}

TEST_CASE("round budget follows the rollover recursion in every run") {
  const Scenario s = fixtures::default_scenario();
  const RunResult r = run_simulation(s, PolicyKind::gps_afl, 4);
  Money theta = base_round_budget(s.federation, 1);
  for (const auto& m : r.per_round) {
    REQUIRE(m.theta_t);
    CHECK(*m.theta_t == theta);
    if (m.round < s.federation.horizon)
      theta = base_round_budget(s.federation, m.round + 1) + theta - m.c_hire - m.c_exe;
  }
}

TEST_CASE("baseline policies respect their own budget conventions") {
  const Scenario s = fixtures::default_scenario();
  const RunResult rr = run_simulation(s, PolicyKind::rrafl_like, 2);
  CHECK(rr.budget_capped);
  CHECK(audit_budget(rr).pass);
  for (const auto& m : rr.per_round) CHECK(m.c_hire + m.c_exe <= base_round_budget(s.federation, m.round));

  const RunResult greedy = run_simulation(s, PolicyKind::greedy_percentile, 2);
  CHECK_FALSE(greedy.budget_capped);
  CHECK(audit_budget(greedy).checked == 0);
  for (const auto& m : greedy.per_round) CHECK_FALSE(m.theta_t.has_value());
  CHECK(audit_individual_rationality(greedy).pass);
}

TEST_CASE("winning prices never rise when bidders adjust toward the announced price") {
  // Four competing owners, a budget that admits about one bid per round.
  Scenario s = tiny_scenario({owner(1, 1.0, 0.5), owner(2, 1.05, 0.5), owner(3, 1.1, 0.5), owner(4, 1.3, 0.5)},
                             30.0, 20);
  s.bidding.initial_markup_min = 0.2;
  s.bidding.initial_markup_max = 0.9;
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    Simulation sim(s, PolicyKind::gps_afl, seed);
    const RunResult r = sim.run();
    std::optional<Money> last;
    for (const auto& m : r.per_round) {
      if (m.winners.empty()) continue;
      Money top;
      for (const auto& w : m.winners) top = max(top, w.bid);
      if (last) CHECK(top <= *last);
      last = top;
    }
    for (const auto& a : sim.agents()) CHECK(a.valuation >= a.profile.private_cost);
  }
}

TEST_CASE("run stops early once the target performance is reached") {
  Scenario s = tiny_scenario({owner(1, 1.0, 0.8), owner(2, 1.1, 0.8)}, 40.0, 20);
  s.oracle.gain = 0.5;
  s.oracle.saturation = 0.1;
  s.federation.target_performance = 0.8;
  const RunResult r = run_simulation(s, PolicyKind::gps_afl, 1);
  CHECK(r.rounds_executed < 20);
  CHECK(r.per_round.size() == static_cast<std::size_t>(r.rounds_executed));
  CHECK(r.final_perf >= 0.8);
  CHECK(r.per_round.back().xi >= 0.8);
  CHECK(r.per_round[r.per_round.size() - 2].xi < 0.8);
}

TEST_CASE("an owner that falls below the threshold is readmitted after good feedback") {
  const fixtures::Redemption out = fixtures::run_redemption(fixtures::scratch_dir("redemption_unit"));
  CHECK(out.reputable_round == 2);
  CHECK(out.dropped_round == 3);
  CHECK(out.redeemed_round == 11);
  CHECK(out.filtered_when_dropped);
  CHECK(out.admitted_when_redeemed);
  CHECK(out.demonstrated());
  for (std::size_t i = 6; i < out.scores.size(); ++i) CHECK(out.scores[i] > out.scores[i - 1]);
}

TEST_CASE("optimal expenditure tracks reputation in the redemption scenario") {
  const Scenario s = fixtures::redemption_scenario(fixtures::scratch_dir("redemption_copt"));
  const RunResult r = run_simulation(s, PolicyKind::gps_afl, 1);
  // Scores used by round t are the ones after round t-1.
  const Money both = Money::from_real(1.1) + Money::from_real(1.32);
  CHECK(r.per_round[0].c_opt == Money::zero());
  CHECK(r.per_round[1].c_opt == Money::zero());
  CHECK(r.per_round[2].c_opt == both);
  CHECK(r.per_round[3].c_opt == Money::zero());
  CHECK(r.per_round[11].c_opt == both);
  for (const auto& m : r.per_round) {
    CHECK(m.branch == Branch::lowest_bid);
    CHECK(m.winners.size() == 2);
  }
}

TEST_CASE("queue-positive rounds hire only reputable owners") {
  const Scenario s = fixtures::queue_positive_scenario();
  int positive = 0;
  for (const RunResult& r : run_seeds(s, PolicyKind::gps_afl, 1, 20)) {
    CAPTURE(r.seed);
    const AuditFinding f = audit_branches(r, 0.7);
    CHECK_MESSAGE(f.pass, f.counterexample);
    CHECK(audit_budget(r).pass);
    CHECK(audit_individual_rationality(r).pass);
    const auto transitions = queue_transitions(r);
    CHECK(drift_bound_audit(transitions).all_hold());
    for (const auto& m : r.per_round) {
      if (m.queue_before <= Money::zero()) continue;
      ++positive;
      CHECK(m.branch == Branch::reputable);
      CHECK(m.cap == hire_budget(m.queue_before, m.c_opt, s.federation.value_weight, *m.theta_t));
      for (const auto& w : m.winners) CHECK(w.score >= 0.7);
    }
  }
  CHECK(positive > 0);
}

TEST_CASE("truthfulness audit passes pay-as-bid and catches a uniform price rule") {
  const Scenario s = fixtures::default_scenario();
  TruthfulnessAuditConfig cfg;
  cfg.probe_rounds = 10;
  cfg.probe_agents = 10;
  const TruthfulnessReport ok = audit_truthfulness(s, 1, cfg);
  CHECK(ok.probes == 100);
  CHECK(ok.replays == 700);
  CHECK(ok.pass());

  bool detected = false;
  cfg.payment_rule = PaymentRule::uniform_winning_bid;
  for (std::uint64_t seed = 1; seed <= 5 && !detected; ++seed) detected = !audit_truthfulness(s, seed, cfg).pass();
  CHECK(detected);
}

TEST_CASE("replaying a round with no overrides reproduces its settlement") {
  const Scenario s = fixtures::default_scenario();
  Simulation sim(s, PolicyKind::gps_afl, 3, {.keep_books = true});
  for (int i = 0; i < 15; ++i) {
    sim.step();
    const RoundBidBook replay = replay_round(sim.last_context(), {});
    const RoundBidBook& actual = sim.books().back();
    CHECK(replay.winners == actual.winners);
    CHECK(replay.payments == actual.payments);
    CHECK(replay.winning_bid == actual.winning_bid);
  }
}

TEST_CASE("rationality audit flags a winner paid below cost") {
  RunResult r = run_simulation(fixtures::default_scenario(), PolicyKind::gps_afl, 1);
  REQUIRE(audit_individual_rationality(r).pass);
  auto& w = r.per_round[5].winners.front();
  w.private_cost = w.payment + Money::from_micros(1);
  w.utility = w.payment - w.private_cost;
  const AuditFinding f = audit_individual_rationality(r);
  CHECK_FALSE(f.pass);
  CHECK(f.counterexample.find("round 6") != std::string::npos);
}

TEST_CASE("budget audit flags an overspent round and an overspent total") {
  const RunResult clean = run_simulation(fixtures::default_scenario(), PolicyKind::gps_afl, 1);
  RunResult r = clean;
  r.per_round[10].c_exe = *r.per_round[10].theta_t;
  CHECK_FALSE(audit_budget(r).pass);
  r = clean;
  r.total_budget = clean.total_cost - Money::from_micros(1);
  CHECK_FALSE(audit_budget(r).pass);
}

TEST_CASE("a run that hires nobody passes the audits vacuously") {
  Scenario s = tiny_scenario({owner(1, 50.0, 0.5), owner(2, 60.0, 0.5)}, 10.0, 5);
  const RunResult r = run_simulation(s, PolicyKind::gps_afl, 1);
  for (const auto& m : r.per_round) {
    CHECK(m.winners.empty());
    CHECK(m.c_hire == Money::zero());
  }
  CHECK(r.total_cost == Money::zero());
  const IrBudgetReport rep = audit_ir_and_budget(r);
  CHECK(rep.pass());
  CHECK(rep.ir.checked == 0);
}

TEST_CASE("larger drift-plus-penalty weight never raises hiring spend") {
  Scenario s = fixtures::default_scenario();
  Money prev = Money::max();
  for (double v : {0.01, 0.1, 1.0, 10.0, 100.0}) {
    s.federation.value_weight = v;
    Money hire;
    for (const auto& r : run_seeds(s, PolicyKind::gps_afl, 1, 10))
      for (const auto& m : r.per_round) hire += m.c_hire;
    CHECK(hire <= prev);
    prev = hire;
  }
}

TEST_CASE("report writers emit the documented layout") {
  const Scenario s = fixtures::default_scenario();
  const std::vector<RunResult> runs{run_simulation(s, PolicyKind::gps_afl, 1),
                                    run_simulation(s, PolicyKind::greedy_percentile, 1)};
  const auto dir = fixtures::scratch_dir("reports");
  write_run_outputs(dir, s, runs);

  std::istringstream csv(slurp(dir / "metrics.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == kMetricsHeader);
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 12);
    if (line.find(",greedy,") != std::string::npos) CHECK(line.find(",,") != std::string::npos);
  }
  CHECK(rows == 160);
  CHECK(std::filesystem::exists(dir / "reputation.csv"));
  CHECK(std::filesystem::exists(dir / "results.json"));

  const auto single = fixtures::scratch_dir("reports_single");
  write_run_outputs(single, s, std::vector<RunResult>{runs.front()});
  CHECK(std::filesystem::exists(single / "result.json"));
  CHECK(slurp(single / "result.json").find("\"total_utility\"") != std::string::npos);

  std::ostringstream trace;
  Simulation sim(s, PolicyKind::gps_afl, 1, {.keep_books = true});
  const RunResult traced = sim.run();
  write_trace_jsonl(trace, traced, sim.books());
  const std::string t = trace.str();
  CHECK(std::count(t.begin(), t.end(), '\n') == 80);
}
