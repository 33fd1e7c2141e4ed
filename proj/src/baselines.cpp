#include "aflsim/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "aflsim/reputation.hpp"

namespace aflsim {

std::string_view to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::gps_afl:
      return "gps";
    case PolicyKind::greedy_percentile:
      return "greedy";
    case PolicyKind::rrafl_like:
      return "rrafl";
    case PolicyKind::oort_like:
      return "oort";
  }
  return "unknown";
}

std::optional<PolicyKind> parse_policy(std::string_view name) {
  if (name == "gps" || name == "gps_afl") return PolicyKind::gps_afl;
  if (name == "greedy" || name == "greedy_percentile") return PolicyKind::greedy_percentile;
  if (name == "rrafl" || name == "rrafl_like") return PolicyKind::rrafl_like;
  if (name == "oort" || name == "oort_like") return PolicyKind::oort_like;
  return std::nullopt;
}

namespace {

// Builds an outcome from chosen bid indices; winners ordered by (bid, id).
SelectionOutcome outcome_from(const RoundBidBook& book, std::vector<std::size_t> chosen) {
  std::sort(chosen.begin(), chosen.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = book.bids[a];
    const auto& y = book.bids[b];
    return x.amount != y.amount ? x.amount < y.amount : x.owner < y.owner;
  });
  SelectionOutcome out;
  std::vector<char> won(book.bids.size(), 0);
  for (auto i : chosen) {
    out.winners.push_back(book.bids[i].owner);
    out.spend += book.bids[i].amount;
    won[i] = 1;
  }
  for (std::size_t i = 0; i < book.bids.size(); ++i)
    if (!won[i]) out.rejected.push_back({book.bids[i].owner, RejectReason::over_cap});
  return out;
}

}  // namespace

Money nearest_rank_percentile(std::span<const Money> values, double percentile) {
  if (values.empty()) throw std::invalid_argument("percentile of an empty set");
  std::vector<Money> v(values.begin(), values.end());
  const double exact = percentile / 100.0 * static_cast<double>(v.size());
  // Guard against 0.15 * 20 evaluating to 3.0000000000000004.
  auto rank = static_cast<std::size_t>(std::ceil(exact - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, v.size());
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(rank - 1), v.end());
  return v[rank - 1];
}

SelectionOutcome greedy_select(const RoundBidBook& book, double percentile) {
  if (book.bids.empty()) return {};
  std::vector<Money> amounts;
  amounts.reserve(book.bids.size());
  for (const auto& b : book.bids) amounts.push_back(b.amount);
  const Money threshold = nearest_rank_percentile(amounts, percentile);

  std::vector<std::size_t> chosen;
  for (std::size_t i = 0; i < book.bids.size(); ++i)
    if (book.bids[i].amount <= threshold) chosen.push_back(i);
  return outcome_from(book, std::move(chosen));
}

SelectionOutcome rrafl_select(const RoundBidBook& book, const ScoreFn& score, double threshold, Money budget,
                              const RrAflOptions& options) {
  BudgetRequest req;
  req.cap = budget;
  req.hard_limit = budget;
  req.overheads = options.overheads;
  req.filter = [&](OwnerId id) {
    return is_reputable(score(id), threshold) || (options.provisional && options.provisional(id));
  };
  return select_lowest_within_budget(book, req);
}

void OortStats::record(OwnerId owner, double observed_improvement) {
  auto& e = entries_[owner];
  e.sum += observed_improvement;
  ++e.count;
}

double OortStats::mean(OwnerId owner) const {
  auto it = entries_.find(owner);
  return it == entries_.end() || it->second.count == 0 ? 0.0 : it->second.sum / it->second.count;
}

int OortStats::selections(OwnerId owner) const {
  auto it = entries_.find(owner);
  return it == entries_.end() ? 0 : it->second.count;
}

double oort_utility(const OortStats& stats, OwnerId owner, int round) {
  const double t = std::max(1, round);
  return stats.mean(owner) + std::sqrt(2.0 * std::log(t) / std::max(1, stats.selections(owner)));
}

SelectionOutcome oort_select(const RoundBidBook& book, const OortStats& stats, int round, int cohort_size) {
  if (cohort_size < 1) throw std::invalid_argument("cohort size must be >= 1");
  std::vector<double> util(book.bids.size());
  for (std::size_t i = 0; i < book.bids.size(); ++i) util[i] = oort_utility(stats, book.bids[i].owner, round);

  std::vector<std::size_t> idx(book.bids.size());
  std::iota(idx.begin(), idx.end(), 0);
  const auto better = [&](std::size_t a, std::size_t b) {
    return util[a] != util[b] ? util[a] > util[b] : book.bids[a].owner < book.bids[b].owner;
  };
  const auto k = std::min<std::size_t>(static_cast<std::size_t>(cohort_size), idx.size());
  std::nth_element(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(), better);
  idx.resize(k);
  return outcome_from(book, std::move(idx));
}

}  // namespace aflsim
