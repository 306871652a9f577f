#include "arith.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "error.hpp"

namespace kloostlab {

namespace {

constexpr u64 kTrialLimit = 1'000'000;

const std::vector<u64>& trial_primes() {
  static const std::vector<u64> primes = primes_up_to(kTrialLimit);
  return primes;
}

u64 isqrt(u64 n) {
  u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

bool miller_rabin_witness(u64 n, u64 a, u64 d, unsigned s) {
  u64 x = powmod(a % n, d, n);
  if (x == 1 || x == n - 1) return false;
  for (unsigned r = 1; r < s; ++r) {
    x = mulmod(x, x, n);
    if (x == n - 1) return false;
  }
  return true;
}

// Brent's variant of Pollard rho; n is odd composite.
u64 pollard_rho(u64 n) {
  for (u64 c = 1;; ++c) {
    u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
    u64 r = 1;
    constexpr u64 m = 128;
    auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
    do {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      u64 k = 0;
      do {
        ys = y;
        for (u64 i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void split_cofactor(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  u64 d = pollard_rho(n);
  split_cofactor(d, out);
  split_cofactor(n / d, out);
}

}  // namespace

FactoredInteger::FactoredInteger(u64 value, std::vector<PrimePower> factors)
    : value_(value), factors_(std::move(factors)) {
  require(value_ >= 1, ErrorCode::kDomain, "factored integer must be positive");
  u128 product = 1;
  u64 previous = 1;
  for (const auto& [p, e] : factors_) {
    require(e >= 1 && p > previous, ErrorCode::kDomain,
            "factors must have increasing primes and positive exponents");
    previous = p;
    for (unsigned i = 0; i < e; ++i) {
      product *= p;
      require(product <= value_, ErrorCode::kDomain, "factor product exceeds value");
    }
  }
  require(product == value_, ErrorCode::kDomain, "factor product does not match value");
}

bool FactoredInteger::squarefree() const {
  return std::all_of(factors_.begin(), factors_.end(),
                     [](const PrimePower& f) { return f.exponent == 1; });
}

std::vector<u64> FactoredInteger::primes() const {
  std::vector<u64> out;
  out.reserve(factors_.size());
  for (const auto& f : factors_) out.push_back(f.prime);
  return out;
}

u64 FactoredInteger::largest_prime() const {
  return factors_.empty() ? 1 : factors_.back().prime;
}

u64 gcd(u64 a, u64 b) { return std::gcd(a, b); }

u64 reduce_mod(i64 a, u64 q) {
  if (a >= 0) return static_cast<u64>(a) % q;
  // -(a+1) avoids overflow at INT64_MIN.
  u64 neg = static_cast<u64>(-(a + 1)) % q;
  return q - 1 - neg;
}

u64 mulmod(u64 a, u64 b, u64 m) {
  if ((a | b) < (u64{1} << 32)) return (a * b) % m;
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

u64 powmod(u64 base, u64 exp, u64 m) {
  if (m == 1) return 0;
  u64 result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  static constexpr std::array<u64, 12> kBases{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (u64 p : kBases) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : kBases) {
    if (miller_rabin_witness(n, a, d, s)) return false;
  }
  return true;
}

u64 inv_mod_u(u64 a, u64 q) {
  require(q >= 2, ErrorCode::kDomain, "modulus must be at least 2");
  i128 old_r = a % q, r = q;
  i128 old_s = 1, s = 0;
  while (r != 0) {
    i128 quotient = old_r / r;
    i128 tmp = old_r - quotient * r;
    old_r = r;
    r = tmp;
    tmp = old_s - quotient * s;
    old_s = s;
    s = tmp;
  }
  if (old_r != 1) fail(ErrorCode::kNotInvertible, "residue shares a factor with the modulus");
  i128 result = old_s % static_cast<i128>(q);
  if (result < 0) result += q;
  return static_cast<u64>(result);
}

u64 inv_mod(i64 a, u64 q) {
  require(q >= 2, ErrorCode::kDomain, "modulus must be at least 2");
  return inv_mod_u(reduce_mod(a, q), q);
}

u64 crt_pair(i64 r1, u64 q1, i64 r2, u64 q2) {
  require(q1 >= 1 && q2 >= 1, ErrorCode::kDomain, "moduli must be positive");
  if (gcd(q1, q2) != 1) fail(ErrorCode::kNotCoprime, "CRT moduli are not coprime");
  const u128 modulus = static_cast<u128>(q1) * q2;
  require(modulus <= ~u64{0}, ErrorCode::kDomain, "CRT modulus overflows 64 bits");
  const u64 a1 = reduce_mod(r1, q1);
  const u64 a2 = reduce_mod(r2, q2);
  if (q2 == 1) return a1;
  if (q1 == 1) return a2;
  // r = a1 + q1 * t, with t = (a2 - a1) * q1^{-1} mod q2.
  const u64 inv = inv_mod_u(q1 % q2, q2);
  const u64 diff = (a2 + q2 - a1 % q2) % q2;
  const u64 t = mulmod(diff, inv, q2);
  return static_cast<u64>(a1 + static_cast<u128>(q1) * t);
}

FactoredInteger factorize(u64 n) {
  require(n >= 1, ErrorCode::kDomain, "cannot factorize 0");
  require(n <= kMaxFactorable, ErrorCode::kDomain, "value exceeds 2^62");
  std::vector<PrimePower> factors;
  u64 rest = n;
  for (u64 p : trial_primes()) {
    if (p * p > rest) break;
    if (rest % p != 0) continue;
    unsigned e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    factors.push_back({p, e});
  }
  if (rest > 1) {
    std::vector<u64> large;
    if (rest < kTrialLimit * kTrialLimit) {
      large.push_back(rest);  // no factor below 10^6 and below 10^12: prime
    } else {
      split_cofactor(rest, large);
    }
    std::sort(large.begin(), large.end());
    for (u64 p : large) {
      if (!factors.empty() && factors.back().prime == p) {
        ++factors.back().exponent;
      } else {
        factors.push_back({p, 1});
      }
    }
  }
  return FactoredInteger(n, std::move(factors));
}

MultiplicativeProfile multiplicative_profile(const FactoredInteger& n, unsigned l) {
  require(l >= 2, ErrorCode::kDomain, "tau_l needs l >= 2");
  MultiplicativeProfile out{1, 1, 1};
  for (const auto& [p, e] : n.factors()) {
    out.mu = (e == 1) ? -out.mu : 0;
    u64 pe_minus_1 = 1;
    for (unsigned i = 1; i < e; ++i) pe_minus_1 *= p;
    out.phi *= pe_minus_1 * (p - 1);
    // Ordered l-tuples of exponents summing to e: C(e + l - 1, l - 1).
    u128 binom = 1;
    for (unsigned i = 1; i <= e; ++i) binom = binom * (l - 1 + i) / i;
    out.tau_l *= static_cast<u64>(binom);
  }
  return out;
}

double nearest_int_distance(double x) {
  const double frac = x - std::floor(x);
  return std::min(frac, 1.0 - frac);
}

std::vector<u64> primes_up_to(u64 limit) {
  std::vector<u64> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(limit + 1, false);
  for (u64 i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

std::vector<FactoredInteger> smooth_squarefree_moduli(u64 lo, u64 hi, SmoothnessSpec spec) {
  require(spec.bound >= 1, ErrorCode::kDomain, "smoothness bound must be >= 1");
  require(lo >= 1, ErrorCode::kDomain, "range must start at 1 or above");
  require(lo <= hi, ErrorCode::kDomain, "inverted range");
  require(hi <= (u64{1} << 40), ErrorCode::kDomain, "range end exceeds 2^40");
  require(hi - lo < 100'000'000, ErrorCode::kDomain, "range span exceeds 10^8");

  const u64 root = isqrt(hi);
  const std::vector<u64> sieve_primes = primes_up_to(std::min(spec.bound, root));

  // No integer <= 2^40 has more than 11 distinct prime factors.
  constexpr std::size_t kMaxPrimes = 12;
  constexpr u64 kChunk = u64{1} << 16;
  std::vector<u64> rem(kChunk);
  std::vector<std::uint8_t> ok(kChunk), count(kChunk);
  std::vector<std::array<u64, kMaxPrimes>> found(kChunk);

  std::vector<FactoredInteger> out;
  for (u64 start = lo; start <= hi; start += kChunk) {
    const u64 len = std::min(kChunk, hi - start + 1);
    for (u64 i = 0; i < len; ++i) {
      rem[i] = start + i;
      ok[i] = 1;
      count[i] = 0;
    }
    for (u64 p : sieve_primes) {
      u64 first = (start + p - 1) / p * p;
      for (u64 m = first; m < start + len; m += p) {
        const u64 i = m - start;
        if (!ok[i]) continue;
        rem[i] /= p;
        if (rem[i] % p == 0) {
          ok[i] = 0;
          continue;
        }
        found[i][count[i]++] = p;
      }
    }
    for (u64 i = 0; i < len; ++i) {
      if (!ok[i]) continue;
      if (rem[i] > 1) {
        // All primes <= sqrt(hi) were removed when bound >= sqrt(hi), so the
        // cofactor is a single prime; otherwise it holds a prime above bound.
        if (spec.bound < root || rem[i] > spec.bound) continue;
        found[i][count[i]++] = rem[i];
      }
      std::vector<PrimePower> factors;
      factors.reserve(count[i]);
      for (std::size_t k = 0; k < count[i]; ++k) factors.push_back({found[i][k], 1});
      out.emplace_back(start + i, std::move(factors));
    }
    if (hi - start < kChunk) break;
  }
  return out;
}

u64 radical(const FactoredInteger& n) {
  u64 r = 1;
  for (const auto& f : n.factors()) r *= f.prime;
  return r;
}

std::vector<u64> divisors(const FactoredInteger& n) {
  std::vector<u64> out{1};
  for (const auto& [p, e] : n.factors()) {
    const std::size_t base = out.size();
    u64 pk = 1;
    for (unsigned k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace kloostlab
