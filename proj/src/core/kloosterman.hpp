#pragma once

// Complete and incomplete Kloosterman sums
//   S(a, b; q) = sum over n mod q, (n, q) = 1, of e_q(a n^{-1} + b n).

#include <memory>
#include <vector>

#include "exp_sum.hpp"
#include "modulus_split.hpp"

namespace kloostlab {

enum class KloostermanMethod {
  kCrt,     // split q into prime powers and multiply the twisted factors
  kDirect,  // sum over every unit n mod q
};

SumValue complete_kloosterman(i64 a, i64 b, u64 q,
                              KloostermanMethod method = KloostermanMethod::kCrt);

// S(a q1^{-1}, b q1^{-1}; q0) * S(a q0^{-1}, b q0^{-1}; q1) for a two-part split.
SumValue kloosterman_crt(i64 a, i64 b, const ModulusSplit& split);

// Sum over n in I with (n, q) = 1 of e_q(a n^{-1}); needs (a, q) = 1, |I| <= q.
SumValue incomplete_kloosterman(i64 a, u64 q, const IntegerInterval& interval);

// S(a, 1; p) / sqrt(p), real and within [-2, 2] for p prime, p not dividing a.
double normalized_kl(i64 a, u64 p);

// S(a, b; q) for every b in [0, q), evaluated term by term. O(q^2).
std::vector<SumValue> kloosterman_row(i64 a, u64 q);

// S(c, 1; p) for every c in [0, p); cached for small primes and shared
// between threads.
std::shared_ptr<const std::vector<SumValue>> prime_kloosterman_table(u64 p);

}  // namespace kloostlab
