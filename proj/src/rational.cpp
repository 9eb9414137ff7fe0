#include "pctrank/rational.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

namespace pctrank {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

struct Rational::Big {
  cpp_rational value;
};

namespace {

__extension__ typedef __int128 Wide;
__extension__ typedef unsigned __int128 UWide;

constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();
constexpr std::int64_t kMin = std::numeric_limits<std::int64_t>::min();

bool fits(const cpp_int& v) { return v <= kMax && v >= kMin; }

std::int64_t to_int64(const cpp_int& v) {
  if (!fits(v)) throw std::overflow_error("rational part does not fit in 64 bits");
  return v.convert_to<std::int64_t>();
}

Wide wide_gcd(Wide a, Wide b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Wide t = a % b;
    a = b;
    b = t;
  }
  return a;
}

cpp_int to_big(Wide v) {
  const bool negative = v < 0;
  // Magnitude via unsigned to survive the most negative value.
  UWide m = negative ? static_cast<UWide>(-(v + 1)) + 1 : static_cast<UWide>(v);
  cpp_int out = static_cast<std::uint64_t>(m >> 64);
  out <<= 64;
  out += static_cast<std::uint64_t>(m);
  return negative ? cpp_int(-out) : out;
}

cpp_int pow10(int digits) {
  cpp_int p = 1;
  for (int i = 0; i < digits; ++i) p *= 10;
  return p;
}

// round(num / den) with halves away from zero; den > 0.
cpp_int divide_round_half_away(const cpp_int& num, const cpp_int& den) {
  cpp_int magnitude = boost::multiprecision::abs(num);
  cpp_int q = magnitude / den;
  cpp_int r = magnitude % den;
  if (2 * r >= den) ++q;
  return num < 0 ? cpp_int(-q) : q;
}

}  // namespace

// Helpers with access to the representation.
struct RationalAccess {
  static cpp_rational big(const Rational& r) {
    if (r.big_) return r.big_->value;
    return cpp_rational(cpp_int(r.num_), cpp_int(r.den_));
  }

  static Rational make(cpp_rational v) {
    const cpp_int& num = boost::multiprecision::numerator(v);
    const cpp_int& den = boost::multiprecision::denominator(v);
    if (fits(num) && fits(den)) {
      Rational out;
      out.num_ = num.convert_to<std::int64_t>();
      out.den_ = den.convert_to<std::int64_t>();
      return out;
    }
    return Rational(std::make_shared<const Rational::Big>(Rational::Big{std::move(v)}));
  }

  // num / den with den != 0, reduced; spills when it does not fit.
  static Rational make(Wide num, Wide den) {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const Wide g = wide_gcd(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    if (num >= kMin && num <= kMax && den <= kMax) {
      Rational out;
      out.num_ = static_cast<std::int64_t>(num);
      out.den_ = static_cast<std::int64_t>(den);
      return out;
    }
    return make(cpp_rational(to_big(num), to_big(den)));
  }

  template <typename SmallOp, typename BigOp>
  static Rational combine(const Rational& a, const Rational& b, SmallOp small, BigOp big_op) {
    if (!a.big_ && !b.big_) {
      Wide num = 0;
      Wide den = 1;
      if (small(a.num_, a.den_, b.num_, b.den_, num, den)) return make(num, den);
    }
    return make(big_op(big(a), big(b)));
  }

  static int compare(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
      const Wide lhs = static_cast<Wide>(a.num_) * b.den_;
      const Wide rhs = static_cast<Wide>(b.num_) * a.den_;
      return (lhs > rhs) - (lhs < rhs);
    }
    return big(a).compare(big(b));
  }
};

namespace {

// 64-bit operands keep every 128-bit intermediate below 2^127.
bool add_small(Wide an, Wide ad, Wide bn, Wide bd, Wide& num, Wide& den) {
  num = an * bd + bn * ad;
  den = ad * bd;
  return true;
}

bool sub_small(Wide an, Wide ad, Wide bn, Wide bd, Wide& num, Wide& den) {
  num = an * bd - bn * ad;
  den = ad * bd;
  return true;
}

bool mul_small(Wide an, Wide ad, Wide bn, Wide bd, Wide& num, Wide& den) {
  num = an * bn;
  den = ad * bd;
  return true;
}

bool div_small(Wide an, Wide ad, Wide bn, Wide bd, Wide& num, Wide& den) {
  num = an * bd;
  den = ad * bn;
  return true;
}

}  // namespace

Rational::Rational(std::int64_t value) : num_(value) {}

Rational::Rational(std::int64_t numerator, std::int64_t denominator) {
  if (denominator == 0) throw std::domain_error("rational with zero denominator");
  *this = RationalAccess::make(numerator, denominator);
}

Rational Rational::parse_decimal(std::string_view text) {
  auto fail = [&]() {
    return std::invalid_argument("not a decimal number: '" + std::string(text) + "'");
  };
  if (text.empty()) throw fail();
  bool negative = false;
  std::size_t pos = 0;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    pos = 1;
  }
  cpp_int num = 0;
  cpp_int den = 1;
  bool any_digit = false;
  bool seen_point = false;
  for (; pos < text.size(); ++pos) {
    char ch = text[pos];
    if (ch == '.') {
      if (seen_point) throw fail();
      seen_point = true;
      continue;
    }
    if (ch < '0' || ch > '9') throw fail();
    any_digit = true;
    num = num * 10 + (ch - '0');
    if (seen_point) den *= 10;
  }
  if (!any_digit) throw fail();
  if (negative) num = -num;
  return RationalAccess::make(cpp_rational(num, den));
}

std::int64_t Rational::numerator() const {
  return big_ ? to_int64(boost::multiprecision::numerator(big_->value)) : num_;
}

std::int64_t Rational::denominator() const {
  return big_ ? to_int64(boost::multiprecision::denominator(big_->value)) : den_;
}

int Rational::sign() const {
  if (big_) return big_->value.sign();
  return (num_ > 0) - (num_ < 0);
}

double Rational::to_double() const {
  if (big_) return big_->value.convert_to<double>();
  return static_cast<double>(num_) / static_cast<double>(den_);
}

std::string Rational::to_fixed(int digits) const {
  if (digits < 0 || digits > 18) throw std::invalid_argument("to_fixed: digits out of range");
  bool negative = false;
  std::string out;
  if (!big_) {
    // |num_| * 10^18 < 2^123, so the small case stays in 128 bits.
    Wide scale = 1;
    for (int i = 0; i < digits; ++i) scale *= 10;
    Wide magnitude = static_cast<Wide>(num_) * scale;
    negative = magnitude < 0;
    if (negative) magnitude = -magnitude;
    Wide q = magnitude / den_;
    if (2 * (magnitude % den_) >= den_) ++q;
    negative = negative && q != 0;
    do {
      out.push_back(static_cast<char>('0' + static_cast<int>(q % 10)));
      q /= 10;
    } while (q != 0);
    std::reverse(out.begin(), out.end());
  } else {
    const cpp_rational& v = big_->value;
    const cpp_int scaled = divide_round_half_away(
        boost::multiprecision::numerator(v) * pow10(digits), boost::multiprecision::denominator(v));
    negative = scaled < 0;
    out = cpp_int(boost::multiprecision::abs(scaled)).str();
  }
  if (digits > 0) {
    if (out.size() <= static_cast<std::size_t>(digits)) {
      out.insert(0, static_cast<std::size_t>(digits) + 1 - out.size(), '0');
    }
    out.insert(out.size() - static_cast<std::size_t>(digits), ".");
  }
  if (negative) out.insert(out.begin(), '-');
  return out;
}

std::string Rational::to_string() const {
  const cpp_rational v = RationalAccess::big(*this);
  const cpp_int& num = boost::multiprecision::numerator(v);
  const cpp_int& den = boost::multiprecision::denominator(v);
  cpp_int d = den;
  int twos = 0;
  int fives = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++twos;
  }
  while (d % 5 == 0) {
    d /= 5;
    ++fives;
  }
  const int digits = std::max(twos, fives);
  if (d != 1 || digits > 18) return num.str() + "/" + den.str();
  return to_fixed(digits);
}

std::int64_t Rational::floor() const {
  const cpp_rational v = RationalAccess::big(*this);
  const cpp_int& num = boost::multiprecision::numerator(v);
  const cpp_int& den = boost::multiprecision::denominator(v);
  cpp_int q = num / den;
  if (num % den != 0 && num < 0) --q;
  return to_int64(q);
}

std::int64_t Rational::round_half_away() const {
  const cpp_rational v = RationalAccess::big(*this);
  return to_int64(divide_round_half_away(boost::multiprecision::numerator(v),
                                         boost::multiprecision::denominator(v)));
}

Rational Rational::abs() const { return sign() < 0 ? -*this : *this; }

Rational Rational::operator-() const {
  if (!big_ && num_ != kMin) {
    Rational out;
    out.num_ = -num_;
    out.den_ = den_;
    return out;
  }
  return RationalAccess::make(cpp_rational(-RationalAccess::big(*this)));
}

Rational& Rational::operator+=(const Rational& rhs) {
  *this = RationalAccess::combine(*this, rhs, add_small,
                                  [](const cpp_rational& a, const cpp_rational& b) {
                                    return cpp_rational(a + b);
                                  });
  return *this;
}

Rational& Rational::operator-=(const Rational& rhs) {
  *this = RationalAccess::combine(*this, rhs, sub_small,
                                  [](const cpp_rational& a, const cpp_rational& b) {
                                    return cpp_rational(a - b);
                                  });
  return *this;
}

Rational& Rational::operator*=(const Rational& rhs) {
  *this = RationalAccess::combine(*this, rhs, mul_small,
                                  [](const cpp_rational& a, const cpp_rational& b) {
                                    return cpp_rational(a * b);
                                  });
  return *this;
}

Rational& Rational::operator/=(const Rational& rhs) {
  if (rhs.is_zero()) throw std::domain_error("rational division by zero");
  *this = RationalAccess::combine(*this, rhs, div_small,
                                  [](const cpp_rational& a, const cpp_rational& b) {
                                    return cpp_rational(a / b);
                                  });
  return *this;
}

bool operator==(const Rational& a, const Rational& b) { return RationalAccess::compare(a, b) == 0; }

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const int c = RationalAccess::compare(a, b);
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

}  // namespace pctrank
