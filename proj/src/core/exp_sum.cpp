#include "exp_sum.hpp"

#include <bit>
#include <cmath>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace kloostlab {

namespace {

constexpr u64 kMaxCachedModulus = u64{1} << 16;
constexpr std::size_t kCacheBudget = std::size_t{1} << 23;  // complex entries

struct RootCache {
  std::shared_mutex mutex;
  std::unordered_map<u64, std::shared_ptr<const std::vector<cplx>>> tables;
  std::size_t entries = 0;
};

RootCache& root_cache() {
  static RootCache cache;
  return cache;
}

std::shared_ptr<const std::vector<cplx>> cached_roots(u64 q) {
  if (q > kMaxCachedModulus) return nullptr;
  RootCache& cache = root_cache();
  {
    std::shared_lock lock(cache.mutex);
    auto it = cache.tables.find(q);
    if (it != cache.tables.end()) return it->second;
    if (cache.entries + q > kCacheBudget) return nullptr;
  }
  auto table = std::make_shared<std::vector<cplx>>(q);
  for (u64 r = 0; r < q; ++r) (*table)[r] = unit_root(r, q);
  std::unique_lock lock(cache.mutex);
  auto [it, inserted] = cache.tables.emplace(q, std::move(table));
  if (inserted) cache.entries += q;
  return it->second;
}

cplx mul(cplx x, cplx y) {
  return {x.real() * y.real() - x.imag() * y.imag(), x.real() * y.imag() + x.imag() * y.real()};
}

}  // namespace

IntegerInterval intersect(const IntegerInterval& a, const IntegerInterval& b) {
  const i64 lo = std::max(a.begin(), b.begin());
  const i64 hi = std::min(a.end(), b.end());
  if (hi <= lo) return {a.offset, 0};
  return {lo, static_cast<u64>(hi - lo)};
}

SumValue operator*(const SumValue& x, const SumValue& y) {
  const cplx v = mul(x.value(), y.value());
  const double ax = x.abs(), ay = y.abs();
  const double err = ax * y.err + ay * x.err + x.err * y.err + 4 * kEps * ax * ay;
  return {v.real(), v.imag(), err};
}

SumValue operator+(const SumValue& x, const SumValue& y) {
  const double re = x.re + y.re, im = x.im + y.im;
  return {re, im, x.err + y.err + 2 * kEps * std::hypot(re, im)};
}

SumValue operator-(const SumValue& x, const SumValue& y) {
  return x + SumValue{-y.re, -y.im, y.err};
}

SumValue rotate(const SumValue& x, cplx root) {
  const cplx v = mul(x.value(), root);
  const double ax = x.abs();
  return {v.real(), v.imag(), x.err + ax * (kRootErr + 4 * kEps)};
}

SumValue scale(const SumValue& x, double factor) {
  const double a = std::abs(factor);
  return {x.re * factor, x.im * factor, x.err * a + 2 * kEps * a * x.abs()};
}

Deviation deviation(const SumValue& x, const SumValue& y) {
  const double d = std::hypot(x.re - y.re, x.im - y.im);
  return {d, x.err + y.err + 4 * kEps * (x.abs() + y.abs())};
}

SumValue SumAccumulator::result() const {
  cplx total = 0;
  for (unsigned level = 0; level < 64; ++level) {
    if (filled_ >> level & 1) total += partial_[level];
  }
  const unsigned depth = terms_ > 1 ? std::bit_width(terms_ - 1) : 0;
  const double rounding = 2.0 * (depth + 1) * kEps * abs_sum_;
  return {total.real(), total.imag(), err_sum_ + rounding};
}

cplx unit_root(u64 r, u64 q) {
  // Phase reduced into (-1/2, 1/2] turns before scaling by 2 pi.
  long double turns;
  if (r > q / 2) {
    turns = -static_cast<long double>(q - r) / static_cast<long double>(q);
  } else {
    turns = static_cast<long double>(r) / static_cast<long double>(q);
  }
  constexpr long double kTwoPi = 6.283185307179586476925286766559005768L;
  const long double theta = kTwoPi * turns;
  return {static_cast<double>(std::cos(theta)), static_cast<double>(std::sin(theta))};
}

UnitRoots::UnitRoots(u64 q) : q_(q), table_(cached_roots(q)) {}

}  // namespace kloostlab
