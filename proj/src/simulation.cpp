#include "aflsim/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "aflsim/energy.hpp"
#include "aflsim/random.hpp"

namespace aflsim {

Money initial_valuation(const DataOwnerProfile& owner, const BiddingConfig& bidding, std::uint64_t seed) {
  SplitMix64 gen(derive_seed(seed, {kStreamMarkup, static_cast<std::uint64_t>(owner.id)}));
  std::uniform_real_distribution<double> markup(bidding.initial_markup_min, bidding.initial_markup_max);
  const double m = bidding.initial_markup_min == bidding.initial_markup_max ? bidding.initial_markup_min : markup(gen);
  return max(owner.private_cost, Money::from_real(owner.private_cost.to_real() * (1.0 + m)));
}

std::size_t interactions_to_reputable(double threshold, double discount) {
  ReputationLedger probe(discount);
  std::size_t k = 0;
  while (probe.score(0, static_cast<int>(k)) < threshold && k < 10'000) {
    ++k;
    probe.record(0, static_cast<int>(k), Feedback::good());
  }
  return k;
}

RoundBidBook replay_round(const RoundContext& ctx, const std::vector<Bid>& overrides, PaymentRule rule) {
  RoundBidBook book = ctx.book;
  for (const auto& o : overrides)
    for (auto& b : book.bids)
      if (b.owner == o.owner) b.amount = o.amount;

  std::unordered_map<OwnerId, char> eligible;
  for (std::size_t i = 0; i < book.bids.size(); ++i) eligible[book.bids[i].owner] = ctx.eligible[i];

  BudgetRequest req;
  req.cap = ctx.cap;
  req.hard_limit = ctx.hard_limit;
  req.overheads = ctx.overheads;
  req.filter = [&](OwnerId id) { return eligible.at(id) != 0; };
  const SelectionOutcome outcome = select_lowest_within_budget(book, req);
  return settle(std::move(book), outcome, rule);
}

Simulation::Simulation(const Scenario& scenario, PolicyKind policy, std::uint64_t seed, SimulationOptions options)
    : scenario_(validate_scenario(scenario)),
      policy_(policy),
      seed_(seed),
      options_(options),
      ledger_(scenario.federation.reputation_discount),
      oracle_(scenario.oracle, seed),
      state_(initial_scheduler_state(scenario.federation, scenario.oracle.initial_performance)) {
  const auto& fed = scenario_.federation;
  for (std::size_t i = 0; i < scenario_.owners.size(); ++i) {
    const auto& o = scenario_.owners[i];
    agents_.push_back({o, initial_valuation(o, scenario_.bidding, seed), scenario_.bidding.adjust_rate, std::nullopt});
    index_[o.id] = i;
    overhead_by_owner_.push_back(owner_exe_overhead(o, fed));
  }
  rrafl_probation_ = interactions_to_reputable(fed.reputation_threshold, fed.reputation_discount);
  if (policy_ == PolicyKind::oort_like)
    oort_cohort_ = options_.oort_cohort > 0 ? options_.oort_cohort : default_oort_cohort(scenario_);
}

double Simulation::score_of(OwnerId owner, int now) const { return ledger_.score(owner, now); }

SelectionOutcome Simulation::select(const RoundBidBook& book, const std::vector<Money>& overheads,
                                    RoundMetrics& m) {
  const auto& fed = scenario_.federation;
  const int now = book.round - 1;
  const ScoreFn score = [this, now](OwnerId id) { return score_of(id, now); };
  const Money base = base_round_budget(fed, book.round);

  context_ = RoundContext{};
  context_.book = book;
  context_.overheads = overheads;

  switch (policy_) {
    case PolicyKind::gps_afl: {
      GpsPlan plan = plan_gps_round(state_, book, score, fed);
      m.branch = plan.branch;
      m.c_opt = plan.c_opt;
      m.cap = plan.cap;
      m.theta_t = state_.round_budget;
      BudgetRequest req{plan.cap, state_.round_budget, overheads, plan.filter};
      context_.cap = req.cap;
      context_.hard_limit = req.hard_limit;
      context_.branch = plan.branch;
      for (const auto& b : book.bids) context_.eligible.push_back(!plan.filter || plan.filter(b.owner));
      return select_lowest_within_budget(book, req);
    }
    case PolicyKind::rrafl_like: {
      m.c_opt = compute_c_opt(book, score, fed.reputation_threshold, base);
      m.cap = base;
      m.theta_t = base;
      RrAflOptions opt;
      opt.overheads = overheads;
      opt.provisional = [this](OwnerId id) { return ledger_.interactions(id) < rrafl_probation_; };
      context_.cap = base;
      context_.hard_limit = base;
      for (const auto& b : book.bids)
        context_.eligible.push_back(is_reputable(score(b.owner), fed.reputation_threshold) || opt.provisional(b.owner));
      return rrafl_select(book, score, fed.reputation_threshold, base, opt);
    }
    case PolicyKind::greedy_percentile:
      m.c_opt = compute_c_opt(book, score, fed.reputation_threshold, base);
      m.cap = Money::max();
      return greedy_select(book, options_.greedy_percentile);
    case PolicyKind::oort_like:
      m.c_opt = compute_c_opt(book, score, fed.reputation_threshold, base);
      m.cap = Money::max();
      return oort_select(book, oort_, book.round, oort_cohort_);
  }
  throw std::logic_error("unhandled policy");
}

const RoundMetrics& Simulation::step() {
  if (done_) throw std::logic_error("simulation already finished");
  const auto& fed = scenario_.federation;
  const int t = state_.round;

  RoundMetrics m;
  m.round = t;
  m.queue_before = state_.queue;

  RoundBidBook book = collect_bids(agents_, t);
  std::vector<Money> overheads;
  overheads.reserve(book.bids.size());
  for (const auto& b : book.bids) overheads.push_back(overhead_by_owner_[index_.at(b.owner)]);

  const SelectionOutcome outcome = select(book, overheads, m);
  const RoundBidBook settled = settle(std::move(book), outcome, options_.payment_rule);

  // Training and aggregation on the surrogate.
  const double prev = oracle_.current();
  std::vector<DataOwnerProfile> cohort;
  std::vector<double> qualities;
  for (OwnerId w : settled.winners) {
    const auto& agent = agents_[index_.at(w)];
    cohort.push_back(agent.profile);
    qualities.push_back(agent.profile.latent_quality);

    WinnerRecord r;
    r.owner = w;
    r.bid = *settled.bid_of(w);
    r.payment = settled.payment_to(w);
    r.private_cost = agent.profile.private_cost;
    r.utility = owner_utility(settled, agent.profile);
    r.score = score_of(w, t - 1);
    r.local_perf = oracle_.local_performance(w, agent.profile.latent_quality, prev, t);
    const Feedback fb = feedback_from_performance(r.local_perf, prev);
    r.positive_feedback = fb.positive;
    ledger_.record(w, t, fb);
    if (policy_ == PolicyKind::oort_like) oort_.record(w, r.local_perf - prev);
    m.c_hire += r.payment;
    m.winners.push_back(r);
  }
  const double xi = oracle_.advance_global(qualities, t);

  m.xi = xi;
  m.c_exe = execution_cost(cohort, fed).exe_cost;
  m.revenue = Money::from_real(revenue(xi, fed.revenue_scale));
  m.utility = m.revenue - m.c_exe - m.c_hire;
  m.improvement = xi - prev;
  m.indicator = regret_indicator(m.improvement, fed.improvement_thresholds[static_cast<std::size_t>(t - 1)]);

  if (m.theta_t && m.c_hire + m.c_exe > *m.theta_t) {
    throw BudgetViolation("round " + std::to_string(t) + " overspent: " + (m.c_hire + m.c_exe).to_string() +
                          " > " + m.theta_t->to_string());
  }

  if (policy_ == PolicyKind::gps_afl) {
    state_ = update_queue(std::move(state_), m.c_opt, m.c_hire, m.improvement,
                          fed.improvement_thresholds[static_cast<std::size_t>(t - 1)]);
    m.queue = state_.queue;
  }
  state_.c_opt_history.push_back(m.c_opt);
  state_.last_perf = xi;
  if (policy_ == PolicyKind::gps_afl) {
    const Money next_base = t < fed.horizon ? base_round_budget(fed, t + 1) : Money::zero();
    state_ = rollover(std::move(state_), m.c_hire, m.c_exe, next_base);
  } else {
    state_.spent_hire_history.push_back(m.c_hire);
    state_.spent_exe_history.push_back(m.c_exe);
    ++state_.round;
  }

  update_agents_after_announcement(agents_, settled);
  if (options_.keep_books) books_.push_back(settled);

  m.reputation.reserve(agents_.size());
  for (const auto& a : agents_) m.reputation.push_back(score_of(a.profile.id, t));

  if (xi >= fed.target_performance || state_.round > fed.horizon) done_ = true;
  history_.push_back(std::move(m));
  return history_.back();
}

RunResult Simulation::run() {
  while (!done_) step();
  RunResult r;
  r.seed = seed_;
  r.policy = policy_;
  r.total_budget = scenario_.federation.total_budget;
  r.budget_capped = policy_ == PolicyKind::gps_afl || policy_ == PolicyKind::rrafl_like;
  for (const auto& m : history_) {
    r.total_utility += m.utility;
    r.total_cost += m.c_hire + m.c_exe;
  }
  r.final_perf = oracle_.current();
  r.rounds_executed = static_cast<int>(history_.size());
  r.per_round = history_;
  return r;
}

RunResult run_simulation(const Scenario& scenario, PolicyKind policy, std::uint64_t seed, SimulationOptions options) {
  return Simulation(scenario, policy, seed, options).run();
}

int default_oort_cohort(const Scenario& scenario) {
  const RunResult gps = run_simulation(scenario, PolicyKind::gps_afl, 1);
  if (gps.per_round.empty()) return 1;
  double total = 0.0;
  for (const auto& m : gps.per_round) total += static_cast<double>(m.n_selected());
  return std::max(1, static_cast<int>(std::lround(total / static_cast<double>(gps.per_round.size()))));
}

}  // namespace aflsim
