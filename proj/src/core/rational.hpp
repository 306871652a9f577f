#pragma once

#include <string>
#include <string_view>

#include "arith.hpp"

namespace kloostlab {

// Exact rational with 128-bit numerator and denominator, always reduced,
// denominator positive.
class Rational {
 public:
  Rational() = default;
  Rational(i128 num) : num_(num), den_(1) {}  // NOLINT(google-explicit-constructor)
  Rational(i128 num, i128 den);

  i128 num() const { return num_; }
  i128 den() const { return den_; }
  double to_double() const;
  // "num/den", or just "num" when the denominator is 1.
  std::string to_string() const;
  static Rational parse(std::string_view text);

  Rational abs() const { return num_ < 0 ? Rational(-num_, den_) : *this; }

  friend Rational operator+(const Rational& x, const Rational& y);
  friend Rational operator-(const Rational& x, const Rational& y);
  friend Rational operator-(const Rational& x) { return Rational(-x.num_, x.den_); }
  friend bool operator==(const Rational&, const Rational&) = default;
  friend bool operator<(const Rational& x, const Rational& y);

 private:
  i128 num_ = 0;
  i128 den_ = 1;
};

std::string int128_to_string(i128 v);

}  // namespace kloostlab
