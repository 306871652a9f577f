#pragma once

// The divisor function in arithmetic progressions:
//   D(x, q, a) = sum_{n <= x, n = a mod q} tau(n)
//   D(x, q)    = (1 / phi(q)) sum_{n <= x, (n, q) = 1} tau(n)
//   E(x, q, a) = D(x, q, a) - D(x, q)

#include <cstdint>
#include <vector>

#include "arith.hpp"
#include "rational.hpp"

namespace kloostlab {

inline constexpr u64 kMaxHyperbolaX = 1'000'000'000;
inline constexpr u64 kMaxSieveX = 100'000'000;

enum class DivisorMethod {
  kHyperbola,  // lattice count of uv <= x, uv = a mod q, O(sqrt x)
  kSieve,      // tabulate tau(n) for n <= x and walk the progression
};

struct ApQuery {
  u64 x = 1;
  u64 q = 1;
  i64 a = 0;
};

// tau(n) for 1 <= n <= limit by a linear sieve. Read-only after
// construction, so one table can serve many threads.
class DivisorTable {
 public:
  explicit DivisorTable(u64 limit);

  u64 limit() const { return limit_; }
  unsigned tau(u64 n) const { return tau_[n]; }
  // Sum of tau(n) over 1 <= n <= x, n = a mod q.
  u64 progression_sum(u64 x, u64 q, i64 a) const;
  // Sum of tau(n) over 1 <= n <= x with (n, q) = 1.
  u64 coprime_sum(u64 x, u64 q) const;

 private:
  u64 limit_;
  std::vector<std::uint16_t> tau_;
};

u64 divisor_sum_ap(const ApQuery& query, DivisorMethod method = DivisorMethod::kHyperbola);
u64 divisor_sum_ap(const ApQuery& query, const DivisorTable& table);

// Sum of tau(n) over n <= x coprime to q, by the hyperbola method.
u64 coprime_divisor_sum(u64 x, const FactoredInteger& q);

struct MainTerm {
  Rational exact;
  double value;
};
MainTerm divisor_main_term(u64 x, u64 q);
MainTerm divisor_main_term(u64 x, const FactoredInteger& q);

struct ErrorTerm {
  Rational exact;
  double value;
};
ErrorTerm error_term(const ApQuery& query, DivisorMethod method = DivisorMethod::kHyperbola);
// E from an already computed D(x, q, a) and D(x, q).
ErrorTerm error_term(u64 progression_sum, const MainTerm& main);

}  // namespace kloostlab
