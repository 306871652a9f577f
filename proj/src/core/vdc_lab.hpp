#pragma once

// Completion and differencing machinery for short Kloosterman sums: interval
// Fourier transforms, block maxima S(r), sums of shifted products of complete
// Kloosterman sums, the differenced sums T(h_1, ..., h_l), and exhaustive
// checkers for the lemmas they satisfy.

#include <cstdint>
#include <span>
#include <vector>

#include "exp_sum.hpp"
#include "kloosterman.hpp"
#include "modulus_split.hpp"

namespace kloostlab {

// f(k) = sum over n in I of e_q(-n k).
SumValue interval_fourier(const IntegerInterval& interval, u64 q, i64 k);

// S(a, m; q) for every m in [0, q), through the CRT route.
std::vector<SumValue> kloosterman_table(i64 a, u64 q);

struct CompletionResult {
  SumValue direct;     // the incomplete sum itself
  SumValue completed;  // (1/q) sum_k f(k) S(a, k; q)
  double deviation;
  double tolerance;    // combined err of both sides
};
CompletionResult completion_check(i64 a, u64 q, const IntegerInterval& interval);

// max over 0 <= L <= K of |sum_{(r-1)K < k <= (r-1)K + L} e_q(-M k) S(a, k; q)|.
double partial_sum_max(i64 a, u64 q, i64 offset_m, u64 block_k, u64 r);

// sum_{k mod p} e_p(-k b) prod_i S(a, k + s_i; p) for a prime p not dividing a.
SumValue shifted_product_complete_sum(i64 a, std::span<const i64> shifts, i64 b, u64 p);

// The same sum to a squarefree modulus, as the product of its prime factors.
SumValue shifted_product_sum_squarefree(i64 a, std::span<const i64> shifts, i64 b,
                                        const FactoredInteger& q);
// Reference route: every k mod q with directly summed Kloosterman factors.
SumValue shifted_product_sum_direct(i64 a, std::span<const i64> shifts, i64 b, u64 q);
// The same sum from a precomputed row of S(a, m; q), m in [0, q).
SumValue shifted_product_sum_row(const std::vector<SumValue>& row, std::span<const i64> shifts,
                                 i64 b);

// The 2^l shifts sum_{i in I} q_i h_i over subsets I of {1..l}, indexed by
// bitmask.
std::vector<i64> subset_shift_offsets(const ModulusSplit& split, const ShiftVector& shifts);

// T(h_1..h_l) = sum_{k in J} prod_{I} S(a', k + sum_{i in I} q_i h_i; q_0).
SumValue t_eval(i64 a_prime, const ModulusSplit& split, const ShiftVector& shifts,
                const IntegerInterval& interval);

// True when every value among the 2^l subset sums of h (mod p) occurs an even
// number of times.
bool subset_sums_all_even(std::span<const u64> h, u64 p);

// All h in (F_p^*)^l whose subset sums have only even multiplicities.
std::vector<std::vector<u64>> vanishing_lemma_check(u64 p, unsigned l);

struct OneDiffRatio {
  double lhs;       // |T|^2
  double rhs_core;  // q1^{j+1} (K q0^j + sum_h |inner(h)|)
  double ratio;     // lhs / rhs_core, 0 when rhs_core = 0
};

// a' = a (q1^{-1})^2 mod q0.
u64 onediff_twist(i64 a, u64 q0, u64 q1);

// The differenced window J(h) = {k in J : k + q1 h in J}.
IntegerInterval onediff_window(const IntegerInterval& interval, u64 q1, i64 h);

// sum_{k in J(h)} prod_i S(a', k + s_i; q0) S(a', k + q1 h + s_i; q0).
SumValue onediff_inner(i64 a_prime, u64 q0, u64 q1, i64 h, const IntegerInterval& interval,
                       std::span<const i64> shifts);

// One van der Corput differencing step evaluated with constant 1 and no
// q^eps factor. J is taken as given; its length plays the role of K.
OneDiffRatio onediff_ratio(i64 a, u64 q0, u64 q1, i64 offset_m, const IntegerInterval& interval,
                           std::span<const i64> shifts);

}  // namespace kloostlab
