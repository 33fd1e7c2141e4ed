#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>

namespace aflsim {

/// Fixed-point currency amount, counted in micro-units (1e-6).
///
/// All budget arithmetic in the simulator goes through this type so that
/// feasibility checks are exact integer comparisons.
class Money {
 public:
  static constexpr std::int64_t kScale = 1'000'000;

  constexpr Money() = default;

  static constexpr Money from_micros(std::int64_t micros) { return Money(micros); }

  /// Converts a real amount, rounding half to even at the micro-unit.
  static Money from_real(double amount) {
    return Money(static_cast<std::int64_t>(std::nearbyint(amount * static_cast<double>(kScale))));
  }

  /// Converts a real amount, rounding up to the next micro-unit.
  static Money ceil_real(double amount) {
    return Money(static_cast<std::int64_t>(std::ceil(amount * static_cast<double>(kScale))));
  }

  static constexpr Money zero() { return Money(0); }
  static constexpr Money max() { return Money(std::numeric_limits<std::int64_t>::max()); }

  constexpr std::int64_t micros() const { return micros_; }
  double to_real() const { return static_cast<double>(micros_) / static_cast<double>(kScale); }

  /// Exact decimal rendering with six fractional digits, e.g. "-1.250000".
  std::string to_string() const;

  constexpr Money& operator+=(Money other) {
    micros_ += other.micros_;
    return *this;
  }
  constexpr Money& operator-=(Money other) {
    micros_ -= other.micros_;
    return *this;
  }

  friend constexpr Money operator+(Money a, Money b) { return Money(a.micros_ + b.micros_); }
  friend constexpr Money operator-(Money a, Money b) { return Money(a.micros_ - b.micros_); }
  friend constexpr Money operator-(Money a) { return Money(-a.micros_); }
  friend constexpr Money operator*(Money a, std::int64_t k) { return Money(a.micros_ * k); }
  friend constexpr Money operator*(std::int64_t k, Money a) { return Money(a.micros_ * k); }

  friend constexpr auto operator<=>(Money, Money) = default;

  friend std::ostream& operator<<(std::ostream& os, Money m) { return os << m.to_string(); }

 private:
  constexpr explicit Money(std::int64_t micros) : micros_(micros) {}

  std::int64_t micros_ = 0;
};

inline Money min(Money a, Money b) { return a < b ? a : b; }
inline Money max(Money a, Money b) { return a < b ? b : a; }

namespace money_literals {
constexpr Money operator""_mu(unsigned long long micros) {
  return Money::from_micros(static_cast<std::int64_t>(micros));
}
}  // namespace money_literals

}  // namespace aflsim
