#include "divisor_ap.hpp"

#include <cmath>

#include "error.hpp"

namespace kloostlab {

namespace {

constexpr u64 kMaxCoprimeTable = 4'000'000;

u64 isqrt(u64 n) {
  u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

void check_query(const ApQuery& query) {
  require(query.x >= 1, ErrorCode::kDomain, "x must be positive");
  require(query.q >= 1, ErrorCode::kDomain, "q must be positive");
}

// #{1 <= v <= limit : u v = a mod q}, with a reduced mod q.
u64 count_partners(u64 u, u64 limit, u64 a, u64 q) {
  const u64 g = gcd(u, q);
  if (a % g != 0) return 0;
  const u64 m = q / g;
  if (m == 1) return limit;
  const u64 r = mulmod((a / g) % m, inv_mod_u((u / g) % m, m), m);
  if (r == 0) return limit / m;
  if (r > limit) return 0;
  return (limit - r) / m + 1;
}

// #{1 <= v <= limit : (v, q) = 1}.
class CoprimeCounter {
 public:
  explicit CoprimeCounter(const FactoredInteger& q) : q_(q.value()) {
    const auto profile = multiplicative_profile(q, 2);
    phi_ = profile.phi;
    if (q_ <= kMaxCoprimeTable) {
      std::vector<std::uint8_t> hit(q_ + 1, 0);
      for (u64 p : q.primes()) {
        for (u64 m = p; m <= q_; m += p) hit[m] = 1;
      }
      prefix_.assign(q_ + 1, 0);
      for (u64 v = 1; v <= q_; ++v) prefix_[v] = prefix_[v - 1] + (hit[v] ? 0 : 1);
    } else {
      // Signed squarefree divisors of the radical for inclusion-exclusion.
      signed_divisors_.push_back({1, 1});
      for (u64 p : q.primes()) {
        const std::size_t n = signed_divisors_.size();
        for (std::size_t i = 0; i < n; ++i) {
          signed_divisors_.push_back({signed_divisors_[i].first * p, -signed_divisors_[i].second});
        }
      }
    }
  }

  u64 operator()(u64 limit) const {
    if (!prefix_.empty()) return (limit / q_) * phi_ + prefix_[limit % q_];
    i64 total = 0;
    for (const auto& [d, sign] : signed_divisors_) total += sign * static_cast<i64>(limit / d);
    return static_cast<u64>(total);
  }

 private:
  u64 q_;
  u64 phi_ = 1;
  std::vector<std::uint32_t> prefix_;
  std::vector<std::pair<u64, int>> signed_divisors_;
};

}  // namespace

DivisorTable::DivisorTable(u64 limit) : limit_(limit), tau_(limit + 1, 0) {
  require(limit >= 1, ErrorCode::kDomain, "table limit must be positive");
  require(limit <= kMaxSieveX, ErrorCode::kDomain, "sieve limit exceeds 10^8");
  // Linear sieve: each composite is reached once from its smallest prime.
  std::vector<std::uint8_t> min_exp(limit + 1, 0);
  std::vector<std::uint32_t> primes;
  tau_[1] = 1;
  for (u64 n = 2; n <= limit; ++n) {
    if (tau_[n] == 0) {
      tau_[n] = 2;
      min_exp[n] = 1;
      primes.push_back(static_cast<std::uint32_t>(n));
    }
    for (std::uint32_t p : primes) {
      const u64 m = n * p;
      if (m > limit) break;
      if (n % p == 0) {
        min_exp[m] = static_cast<std::uint8_t>(min_exp[n] + 1);
        tau_[m] = static_cast<std::uint16_t>(tau_[n] / (min_exp[n] + 1) * (min_exp[n] + 2));
        break;
      }
      min_exp[m] = 1;
      tau_[m] = static_cast<std::uint16_t>(tau_[n] * 2);
    }
  }
}

u64 DivisorTable::progression_sum(u64 x, u64 q, i64 a) const {
  require(x >= 1 && q >= 1, ErrorCode::kDomain, "x and q must be positive");
  require(x <= limit_, ErrorCode::kDomain, "x beyond the table limit");
  u64 start = reduce_mod(a, q);
  if (start == 0) start = q;
  u64 total = 0;
  for (u64 n = start; n <= x; n += q) total += tau_[n];
  return total;
}

u64 DivisorTable::coprime_sum(u64 x, u64 q) const {
  require(x <= limit_, ErrorCode::kDomain, "x beyond the table limit");
  u64 total = 0;
  for (u64 n = 1; n <= x; ++n) {
    if (gcd(n, q) == 1) total += tau_[n];
  }
  return total;
}

u64 divisor_sum_ap(const ApQuery& query, DivisorMethod method) {
  check_query(query);
  if (method == DivisorMethod::kSieve) {
    require(query.x <= kMaxSieveX, ErrorCode::kDomain, "sieve method is capped at x = 10^8");
    return DivisorTable(query.x).progression_sum(query.x, query.q, query.a);
  }
  require(query.x <= kMaxHyperbolaX, ErrorCode::kDomain, "hyperbola method is capped at x = 10^9");
  const u64 a = reduce_mod(query.a, query.q);
  const u64 s = isqrt(query.x);
  // Pairs with u <= s or v <= s, minus the square counted twice.
  u64 both = 0, square = 0;
  for (u64 u = 1; u <= s; ++u) {
    both += count_partners(u, query.x / u, a, query.q);
    square += count_partners(u, s, a, query.q);
  }
  return 2 * both - square;
}

u64 divisor_sum_ap(const ApQuery& query, const DivisorTable& table) {
  check_query(query);
  return table.progression_sum(query.x, query.q, query.a);
}

u64 coprime_divisor_sum(u64 x, const FactoredInteger& q) {
  if (x == 0) return 0;
  require(x <= kMaxHyperbolaX, ErrorCode::kDomain, "hyperbola method is capped at x = 10^9");
  const CoprimeCounter phi_count(q);
  const u64 s = isqrt(x);
  u64 both = 0;
  for (u64 u = 1; u <= s; ++u) {
    if (gcd(u, q.value()) == 1) both += phi_count(x / u);
  }
  const u64 small = phi_count(s);
  return 2 * both - small * small;
}

MainTerm divisor_main_term(u64 x, const FactoredInteger& q) {
  const u64 phi = multiplicative_profile(q, 2).phi;
  const Rational exact(static_cast<i128>(coprime_divisor_sum(x, q)), static_cast<i128>(phi));
  return {exact, exact.to_double()};
}

MainTerm divisor_main_term(u64 x, u64 q) {
  require(q >= 1, ErrorCode::kDomain, "q must be positive");
  return divisor_main_term(x, factorize(q));
}

ErrorTerm error_term(u64 progression_sum, const MainTerm& main) {
  const Rational exact = Rational(static_cast<i128>(progression_sum)) - main.exact;
  return {exact, exact.to_double()};
}

ErrorTerm error_term(const ApQuery& query, DivisorMethod method) {
  check_query(query);
  if (gcd(reduce_mod(query.a, query.q), query.q) != 1) {
    fail(ErrorCode::kNotCoprime, "E(x, q, a) needs (a, q) = 1");
  }
  return error_term(divisor_sum_ap(query, method), divisor_main_term(query.x, query.q));
}

}  // namespace kloostlab
