#pragma once

// Exact rational numbers on 128-bit integers.
//
// Every value that the library compares exactly (grid points, ratios of
// differences, line parameters, tolerances) goes through this type.  All
// operations check for overflow and throw rather than wrap.

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sumlab {

using i128 = __int128;
using u128 = unsigned __int128;

class OverflowError : public std::overflow_error {
public:
  using std::overflow_error::overflow_error;
};

i128 checked_mul(i128 a, i128 b);
i128 checked_add(i128 a, i128 b);
i128 checked_sub(i128 a, i128 b);
i128 gcd128(i128 a, i128 b);

// floor(a / b) for b > 0.
i128 floor_div(i128 a, i128 b);

std::string to_string(i128 v);

class Rational {
public:
  constexpr Rational() = default;
  Rational(i128 num, i128 den = 1);  // NOLINT(google-explicit-constructor)

  static Rational dyadic(i128 num, int exponent) { return Rational(num, i128{1} << exponent); }
  static Rational parse(std::string_view text);

  i128 num() const { return num_; }
  i128 den() const { return den_; }

  double to_double() const;
  std::string str() const;

  // floor(value * 2^level)
  i128 floor_scaled(int level) const;
  bool is_dyadic() const { return (den_ & (den_ - 1)) == 0; }

  Rational operator-() const { return Rational(-num_, den_, Normalized{}); }
  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

private:
  struct Normalized {};
  constexpr Rational(i128 num, i128 den, Normalized) : num_(num), den_(den) {}

  i128 num_ = 0;
  i128 den_ = 1;
};

Rational abs(const Rational& r);

}  // namespace sumlab
