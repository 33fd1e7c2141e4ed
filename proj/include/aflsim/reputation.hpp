#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "aflsim/market.hpp"

namespace aflsim {

/// One interaction outcome: exactly one of the two flags is set.
struct Feedback {
  bool positive = true;

  int alpha() const { return positive ? 1 : 0; }
  int beta() const { return positive ? 0 : 1; }

  static Feedback good() { return {true}; }
  static Feedback bad() { return {false}; }

  bool operator==(const Feedback&) const = default;
};

/// Positive iff the participant's local model is at least as good as the
/// previous global model.
Feedback feedback_from_performance(double local_perf, double prev_global_perf);

/// Inclusive threshold test.
bool is_reputable(double score, double threshold);

class ReputationError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Discounted Beta reputation over per-owner feedback histories.
///
/// score(n, t) = (A + 1) / (A + B + 2), where A and B are the positive and
/// negative feedback counts weighted by discount^(t - round).
class ReputationLedger {
 public:
  struct Record {
    int round = 0;
    Feedback feedback;
  };

  explicit ReputationLedger(double discount = 1.0);

  double discount() const { return discount_; }

  /// Appends a record; rounds must be strictly increasing per owner.
  void record(OwnerId owner, int round, Feedback feedback);

  /// Unknown owners score 0.5. `now` must not precede the owner's last record.
  double score(OwnerId owner, int now) const;

  const std::vector<Record>& history(OwnerId owner) const;
  std::size_t interactions(OwnerId owner) const { return history(owner).size(); }

 private:
  double discount_;
  std::map<OwnerId, std::vector<Record>> history_;
};

}  // namespace aflsim
