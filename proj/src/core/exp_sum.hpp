#pragma once

// Primitives shared by every exponential sum: complex values with a rounding
// error bound, pairwise accumulation, and e_q(r) = exp(2 pi i r / q).

#include <array>
#include <complex>
#include <cstdint>
#include <limits>
#include <memory>
#include <vector>

#include "arith.hpp"

namespace kloostlab {

using cplx = std::complex<double>;

inline constexpr double kEps = std::numeric_limits<double>::epsilon();
// Absolute error of one evaluated root of unity.
inline constexpr double kRootErr = 4 * kEps;

// Half-open interval [offset, offset + length).
struct IntegerInterval {
  i64 offset = 0;
  u64 length = 0;

  i64 begin() const { return offset; }
  i64 end() const { return offset + static_cast<i64>(length); }
  bool empty() const { return length == 0; }
  bool contains(i64 n) const { return n >= begin() && n < end(); }
};

// Intersection of two intervals; empty intervals keep the left offset.
IntegerInterval intersect(const IntegerInterval& a, const IntegerInterval& b);

struct SumValue {
  double re = 0;
  double im = 0;
  double err = 0;  // absolute bound on accumulated rounding error

  SumValue() = default;
  SumValue(double re_, double im_, double err_) : re(re_), im(im_), err(err_) {}
  static SumValue exact(double v) { return {v, 0, 0}; }

  cplx value() const { return {re, im}; }
  double abs() const { return std::hypot(re, im); }
};

SumValue operator*(const SumValue& x, const SumValue& y);
SumValue operator+(const SumValue& x, const SumValue& y);
SumValue operator-(const SumValue& x, const SumValue& y);
// Multiplication by an exact unit-modulus factor known up to kRootErr.
SumValue rotate(const SumValue& x, cplx root);
SumValue scale(const SumValue& x, double factor);

// Distance |x - y| together with the err both sides carry.
struct Deviation {
  double distance;
  double tolerance;
};
Deviation deviation(const SumValue& x, const SumValue& y);

// Streaming pairwise summation: a binary counter of partial sums, so the
// rounding error grows with log2 of the term count.
class SumAccumulator {
 public:
  void add(cplx term, double magnitude, double term_err) {
    ++terms_;
    abs_sum_ += magnitude;
    err_sum_ += term_err;
    push(term);
  }
  void add_root(cplx root) { add(root, 1.0, kRootErr); }
  void add(const SumValue& v) { add(v.value(), v.abs(), v.err); }

  SumValue result() const;
  std::uint64_t count() const { return terms_; }

 private:
  void push(cplx term) {
    std::uint64_t n = filled_;
    unsigned level = 0;
    while (n & 1) {
      term += partial_[level];
      n >>= 1;
      ++level;
    }
    partial_[level] = term;
    ++filled_;
  }

  std::array<cplx, 64> partial_{};
  std::uint64_t filled_ = 0;
  std::uint64_t terms_ = 0;
  double abs_sum_ = 0;
  double err_sum_ = 0;
};

// e_q(r) for r in [0, q), evaluated in extended precision.
cplx unit_root(u64 r, u64 q);

// Cached table of e_q(r); shared read-only between threads.
class UnitRoots {
 public:
  explicit UnitRoots(u64 q);

  cplx operator()(u64 r) const { return table_ ? (*table_)[r] : unit_root(r, q_); }
  u64 modulus() const { return q_; }

 private:
  u64 q_;
  std::shared_ptr<const std::vector<cplx>> table_;
};

}  // namespace kloostlab
