#pragma once

// Exact rational arithmetic.
//
// Per-document percentiles are small ratios (100 * k / 2n) and stay in a
// 64-bit fast path. Batch sums over groups of different sizes have
// denominators that grow with the lcm of the group sizes; those values spill
// to an arbitrary-precision representation instead of overflowing.

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>

namespace pctrank {

struct RationalAccess;

class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t value);  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t numerator, std::int64_t denominator);

  // Parses "12", "-3", "87.5", "0.125". No exponents, no thousands separators.
  static Rational parse_decimal(std::string_view text);

  // Throw std::overflow_error when the reduced part does not fit in 64 bits.
  std::int64_t numerator() const;
  std::int64_t denominator() const;

  double to_double() const;

  // Fixed-point rendering with exactly `digits` decimals, rounding half away
  // from zero. Rational(175, 2).to_fixed(6) == "87.500000".
  std::string to_fixed(int digits) const;

  // Shortest exact decimal when the denominator has only factors 2 and 5,
  // otherwise "n/d".
  std::string to_string() const;

  std::int64_t floor() const;
  // Nearest integer, halves rounded away from zero.
  std::int64_t round_half_away() const;

  Rational abs() const;
  bool is_zero() const { return !big_ && num_ == 0; }
  int sign() const;

  Rational operator-() const;
  Rational& operator+=(const Rational& rhs);
  Rational& operator-=(const Rational& rhs);
  Rational& operator*=(const Rational& rhs);
  Rational& operator/=(const Rational& rhs);

  friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
  friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
  friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
  friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }

  friend bool operator==(const Rational& a, const Rational& b);
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

  struct Big;

 private:
  friend struct RationalAccess;

  explicit Rational(std::shared_ptr<const Big> big) : big_(std::move(big)) {}

  // Reduced, den_ > 0. Meaningful only while big_ is null.
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  std::shared_ptr<const Big> big_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace pctrank
