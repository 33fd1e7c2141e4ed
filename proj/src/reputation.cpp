#include "aflsim/reputation.hpp"

#include <cmath>
#include <string>

namespace aflsim {

Feedback feedback_from_performance(double local_perf, double prev_global_perf) {
  return Feedback{local_perf >= prev_global_perf};
}

bool is_reputable(double score, double threshold) { return score >= threshold; }

ReputationLedger::ReputationLedger(double discount) : discount_(discount) {
  if (!(discount > 0.0 && discount <= 1.0)) throw ReputationError("discount must lie in (0, 1]");
}

void ReputationLedger::record(OwnerId owner, int round, Feedback feedback) {
  auto& h = history_[owner];
  if (!h.empty() && round <= h.back().round) {
    throw ReputationError("out-of-order feedback for owner " + std::to_string(owner) + ": round " +
                          std::to_string(round) + " after " + std::to_string(h.back().round));
  }
  h.push_back({round, feedback});
}

double ReputationLedger::score(OwnerId owner, int now) const {
  auto it = history_.find(owner);
  if (it == history_.end() || it->second.empty()) return 0.5;
  const auto& h = it->second;
  if (now < h.back().round) throw ReputationError("score queried before the last recorded round");

  // Walk newest to oldest so the weight is a running product.
  double pos = 0.0, neg = 0.0, weight = std::pow(discount_, now - h.back().round);
  int prev_round = h.back().round;
  for (auto r = h.rbegin(); r != h.rend(); ++r) {
    weight *= std::pow(discount_, prev_round - r->round);
    prev_round = r->round;
    pos += weight * r->feedback.alpha();
    neg += weight * r->feedback.beta();
  }
  return (pos + 1.0) / (pos + neg + 2.0);
}

const std::vector<ReputationLedger::Record>& ReputationLedger::history(OwnerId owner) const {
  static const std::vector<Record> empty;
  auto it = history_.find(owner);
  return it == history_.end() ? empty : it->second;
}

}  // namespace aflsim
