#include "rational.hpp"

#include <algorithm>

#include "error.hpp"

namespace kloostlab {

namespace {

i128 abs128(i128 v) { return v < 0 ? -v : v; }

i128 gcd128(i128 a, i128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    const i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

i128 parse_int128(std::string_view text) {
  require(!text.empty(), ErrorCode::kParse, "empty integer");
  bool negative = false;
  std::size_t i = 0;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    i = 1;
  }
  require(i < text.size(), ErrorCode::kParse, "missing digits");
  i128 value = 0;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    require(c >= '0' && c <= '9', ErrorCode::kParse, "non-digit in integer");
    if (__builtin_mul_overflow(value, i128{10}, &value) ||
        __builtin_add_overflow(value, i128{c - '0'}, &value)) {
      fail(ErrorCode::kParse, "integer out of range");
    }
  }
  return negative ? -value : value;
}

i128 checked_mul(i128 a, i128 b) {
  i128 r;
  if (__builtin_mul_overflow(a, b, &r)) fail(ErrorCode::kDomain, "rational overflow");
  return r;
}

i128 checked_add(i128 a, i128 b) {
  i128 r;
  if (__builtin_add_overflow(a, b, &r)) fail(ErrorCode::kDomain, "rational overflow");
  return r;
}

}  // namespace

Rational::Rational(i128 num, i128 den) {
  require(den != 0, ErrorCode::kDomain, "zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const i128 g = gcd128(num, den);
  num_ = num / g;
  den_ = den / g;
}

double Rational::to_double() const {
  return static_cast<double>(static_cast<long double>(num_) / static_cast<long double>(den_));
}

std::string Rational::to_string() const {
  if (den_ == 1) return int128_to_string(num_);
  return int128_to_string(num_) + "/" + int128_to_string(den_);
}

Rational Rational::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int128(text));
  return Rational(parse_int128(text.substr(0, slash)), parse_int128(text.substr(slash + 1)));
}

Rational operator+(const Rational& x, const Rational& y) {
  const i128 g = gcd128(x.den_, y.den_);
  const i128 yd = y.den_ / g;
  return Rational(checked_add(checked_mul(x.num_, yd), checked_mul(y.num_, x.den_ / g)),
                  checked_mul(x.den_, yd));
}

Rational operator-(const Rational& x, const Rational& y) { return x + (-y); }

bool operator<(const Rational& x, const Rational& y) {
  return checked_mul(x.num_, y.den_) < checked_mul(y.num_, x.den_);
}

std::string int128_to_string(i128 v) {
  if (v == 0) return "0";
  const bool negative = v < 0;
  unsigned __int128 u = negative ? static_cast<unsigned __int128>(-(v + 1)) + 1
                                 : static_cast<unsigned __int128>(v);
  std::string digits;
  while (u > 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (negative) digits.push_back('-');
  std::reverse(digits.begin(), digits.end());
  return digits;
}

}  // namespace kloostlab
