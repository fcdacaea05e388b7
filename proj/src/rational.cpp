#include "sumlab/rational.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdint>

namespace sumlab {

i128 checked_mul(i128 a, i128 b) {
  i128 r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("128-bit multiplication overflow");
  return r;
}

i128 checked_add(i128 a, i128 b) {
  i128 r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("128-bit addition overflow");
  return r;
}

i128 checked_sub(i128 a, i128 b) {
  i128 r;
  if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("128-bit subtraction overflow");
  return r;
}

namespace {

int ctz128(u128 v) {
  const auto lo = static_cast<std::uint64_t>(v);
  return lo != 0 ? std::countr_zero(lo) : 64 + std::countr_zero(static_cast<std::uint64_t>(v >> 64));
}

bool is_pow2(i128 v) { return v > 0 && (v & (v - 1)) == 0; }

}  // namespace

// Binary gcd; denominators here are mostly powers of two.
i128 gcd128(i128 a, i128 b) {
  u128 x = a < 0 ? -static_cast<u128>(a) : static_cast<u128>(a);
  u128 y = b < 0 ? -static_cast<u128>(b) : static_cast<u128>(b);
  if (x == 0) return static_cast<i128>(y);
  if (y == 0) return static_cast<i128>(x);
  const int shift = std::min(ctz128(x), ctz128(y));
  x >>= ctz128(x);
  do {
    y >>= ctz128(y);
    if (x > y) std::swap(x, y);
    y -= x;
  } while (y != 0);
  return static_cast<i128>(x << shift);
}

i128 floor_div(i128 a, i128 b) {
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::string to_string(i128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  u128 u = neg ? -static_cast<u128>(v) : static_cast<u128>(v);
  std::string s;
  while (u != 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

Rational::Rational(i128 num, i128 den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    num = checked_sub(0, num);
    den = checked_sub(0, den);
  }
  if (is_pow2(den)) {
    const int shift = num == 0 ? ctz128(static_cast<u128>(den)) : std::min(ctz128(static_cast<u128>(num)), ctz128(static_cast<u128>(den)));
    num_ = num >> shift;
    den_ = den >> shift;
    return;
  }
  i128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  num_ = num;
  den_ = den;
}

namespace {

i128 parse_int(std::string_view s) {
  if (s.empty()) throw std::invalid_argument("empty integer");
  bool neg = false;
  std::size_t pos = 0;
  if (s[0] == '-' || s[0] == '+') {
    neg = s[0] == '-';
    pos = 1;
  }
  if (pos == s.size()) throw std::invalid_argument("malformed integer '" + std::string(s) + "'");
  i128 v = 0;
  for (; pos < s.size(); ++pos) {
    char c = s[pos];
    if (c < '0' || c > '9') throw std::invalid_argument("malformed integer '" + std::string(s) + "'");
    v = checked_add(checked_mul(v, 10), c - '0');
  }
  return neg ? -v : v;
}

}  // namespace

Rational Rational::parse(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
}

double Rational::to_double() const {
  return static_cast<double>(static_cast<long double>(num_) / static_cast<long double>(den_));
}

std::string Rational::str() const {
  if (den_ == 1) return to_string(num_);
  return to_string(num_) + "/" + to_string(den_);
}

i128 Rational::floor_scaled(int level) const {
  if (level < 0 || level > 100) throw std::invalid_argument("floor_scaled level out of range");
  return floor_div(checked_mul(num_, i128{1} << level), den_);
}

Rational operator+(const Rational& a, const Rational& b) {
  if (a.den_ == b.den_) return Rational(checked_add(a.num_, b.num_), a.den_);
  i128 g = gcd128(a.den_, b.den_);
  i128 da = a.den_ / g;
  return Rational(checked_add(checked_mul(a.num_, b.den_ / g), checked_mul(b.num_, da)),
                  checked_mul(da, b.den_));
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  i128 g1 = gcd128(a.num_, b.den_);
  i128 g2 = gcd128(b.num_, a.den_);
  if (g1 == 0) g1 = 1;
  if (g2 == 0) g2 = 1;
  return Rational(checked_mul(a.num_ / g1, b.num_ / g2), checked_mul(a.den_ / g2, b.den_ / g1));
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw std::domain_error("rational division by zero");
  return a * Rational(b.den_, b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  if (a.den_ == b.den_) return a.num_ <=> b.num_;
  return checked_mul(a.num_, b.den_) <=> checked_mul(b.num_, a.den_);
}

Rational abs(const Rational& r) { return r.num() < 0 ? -r : r; }

}  // namespace sumlab
