#pragma once

// Exact integer and multiplicative-function primitives.

#include <cstdint>
#include <span>
#include <vector>

namespace kloostlab {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

inline constexpr u64 kMaxFactorable = u64{1} << 62;

struct PrimePower {
  u64 prime;
  unsigned exponent;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// A positive integer together with its prime factorization, primes ascending.
class FactoredInteger {
 public:
  FactoredInteger() = default;
  // Validates the invariants; throws DomainError if they do not hold.
  FactoredInteger(u64 value, std::vector<PrimePower> factors);

  u64 value() const { return value_; }
  const std::vector<PrimePower>& factors() const { return factors_; }
  bool squarefree() const;
  std::size_t omega() const { return factors_.size(); }
  std::vector<u64> primes() const;
  // Largest prime factor, 1 for value 1.
  u64 largest_prime() const;

 private:
  u64 value_ = 1;
  std::vector<PrimePower> factors_;
};

struct SmoothnessSpec {
  u64 bound = 1;  // primes <= bound allowed
};

struct MultiplicativeProfile {
  int mu;
  u64 phi;
  u64 tau_l;
};

u64 gcd(u64 a, u64 b);
// Reduces any signed integer into [0, q).
u64 reduce_mod(i64 a, u64 q);
u64 mulmod(u64 a, u64 b, u64 m);
u64 powmod(u64 base, u64 exp, u64 m);
bool is_prime(u64 n);

// b in [1, q) with a*b = 1 mod q. Throws NotInvertible / DomainError.
u64 inv_mod(i64 a, u64 q);
// Unsigned variant for residues already in [0, q).
u64 inv_mod_u(u64 a, u64 q);

// Unique r in [0, q1*q2) with r = r1 mod q1, r = r2 mod q2.
u64 crt_pair(i64 r1, u64 q1, i64 r2, u64 q2);

FactoredInteger factorize(u64 n);

MultiplicativeProfile multiplicative_profile(const FactoredInteger& n, unsigned l);

double nearest_int_distance(double x);

// Squarefree integers in [lo, hi] whose prime factors are all <= spec.bound.
std::vector<FactoredInteger> smooth_squarefree_moduli(u64 lo, u64 hi, SmoothnessSpec spec);

// Primes <= limit by the sieve of Eratosthenes.
std::vector<u64> primes_up_to(u64 limit);

// Product of the distinct primes dividing n.
u64 radical(const FactoredInteger& n);
// All positive divisors, ascending.
std::vector<u64> divisors(const FactoredInteger& n);

}  // namespace kloostlab
