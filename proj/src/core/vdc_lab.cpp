#include "vdc_lab.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"

namespace kloostlab {

namespace {

SumValue root_value(const UnitRoots& roots, u64 r) {
  const cplx z = roots(r);
  return {z.real(), z.imag(), kRootErr};
}

u64 to_residue(i64 v, u64 q) { return reduce_mod(v, q); }

void require_table_modulus(u64 q) {
  require(q >= 1, ErrorCode::kDomain, "modulus must be positive");
  require(q <= (u64{1} << 31), ErrorCode::kDomain, "modulus too large for a full table");
}

// prod_i table[(k + s_i) mod q] with each shift pre-reduced.
SumValue shifted_product(const std::vector<SumValue>& table, u64 k, std::span<const u64> shifts,
                         u64 q) {
  SumValue product = SumValue::exact(1);
  for (u64 s : shifts) {
    u64 idx = k + s;
    if (idx >= q) idx -= q;
    product = product * table[idx];
  }
  return product;
}

std::vector<u64> reduce_all(std::span<const i64> values, u64 q) {
  std::vector<u64> out;
  out.reserve(values.size());
  for (i64 v : values) out.push_back(to_residue(v, q));
  return out;
}

SumValue twisted_shifted_sum(const std::vector<SumValue>& table, std::span<const u64> shifts,
                             u64 b, u64 q) {
  const UnitRoots roots(q);
  SumAccumulator acc;
  u64 phase = 0;  // -k b mod q
  const u64 step = (q - b % q) % q;
  for (u64 k = 0; k < q; ++k) {
    acc.add(root_value(roots, phase) * shifted_product(table, k, shifts, q));
    phase += step;
    if (phase >= q) phase -= q;
  }
  return acc.result();
}

}  // namespace

SumValue interval_fourier(const IntegerInterval& interval, u64 q, i64 k) {
  require(q >= 1, ErrorCode::kDomain, "modulus must be positive");
  const u64 kr = to_residue(k, q);
  if (kr == 0) return SumValue::exact(static_cast<double>(interval.length));
  const UnitRoots roots(q);
  const u64 step = q - kr;  // -k mod q
  u64 phase = mulmod(to_residue(interval.offset, q), step, q);
  SumAccumulator acc;
  for (u64 i = 0; i < interval.length; ++i) {
    acc.add_root(roots(phase));
    phase += step;
    if (phase >= q) phase -= q;
  }
  return acc.result();
}

std::vector<SumValue> kloosterman_table(i64 a, u64 q) {
  require_table_modulus(q);
  std::vector<SumValue> table(q);
  for (u64 m = 0; m < q; ++m) table[m] = complete_kloosterman(a, static_cast<i64>(m), q);
  return table;
}

CompletionResult completion_check(i64 a, u64 q, const IntegerInterval& interval) {
  const SumValue direct = incomplete_kloosterman(a, q, interval);
  const std::vector<SumValue> table = kloosterman_table(a, q);
  SumAccumulator acc;
  for (u64 k = 0; k < q; ++k) {
    acc.add(interval_fourier(interval, q, static_cast<i64>(k)) * table[k]);
  }
  const SumValue completed = scale(acc.result(), 1.0 / static_cast<double>(q));
  const Deviation d = deviation(direct, completed);
  return {direct, completed, d.distance, d.tolerance};
}

double partial_sum_max(i64 a, u64 q, i64 offset_m, u64 block_k, u64 r) {
  require(q >= 1, ErrorCode::kDomain, "modulus must be positive");
  require(block_k >= 1, ErrorCode::kDomain, "block length K must be positive");
  require(r >= 1, ErrorCode::kDomain, "block index r starts at 1");
  if (gcd(to_residue(a, q), q) != 1) fail(ErrorCode::kNotCoprime, "a must be coprime to q");
  const UnitRoots roots(q);
  const u64 m_neg = q - to_residue(offset_m, q);  // -M mod q (q when M = 0 mod q)
  const u64 first = (r - 1) * block_k + 1;
  SumAccumulator acc;
  double best = 0;
  for (u64 k = first; k < first + block_k; ++k) {
    const u64 phase = mulmod(m_neg % q, k % q, q);
    acc.add(root_value(roots, phase) * complete_kloosterman(a, static_cast<i64>(k % q), q));
    best = std::max(best, acc.result().abs());
  }
  return best;
}

SumValue shifted_product_complete_sum(i64 a, std::span<const i64> shifts, i64 b, u64 p) {
  require(is_prime(p), ErrorCode::kDomain, "modulus must be prime");
  require(to_residue(a, p) != 0, ErrorCode::kDomain, "p divides a");
  require_table_modulus(p);
  const std::vector<SumValue> table = kloosterman_table(a, p);
  return twisted_shifted_sum(table, reduce_all(shifts, p), to_residue(b, p), p);
}

SumValue shifted_product_sum_squarefree(i64 a, std::span<const i64> shifts, i64 b,
                                        const FactoredInteger& q) {
  if (!q.squarefree()) fail(ErrorCode::kNotSquarefree, "modulus must be squarefree");
  if (gcd(to_residue(a, q.value()), q.value()) != 1) {
    fail(ErrorCode::kNotCoprime, "a must be coprime to q");
  }
  SumValue product = SumValue::exact(1);
  for (u64 p : q.primes()) {
    // Factor at p: a -> a m^{-2}, b -> b m^{-1} with m = q / p.
    const u64 m = q.value() / p;
    const u64 mbar = m == 1 ? 1 : inv_mod_u(m % p, p);
    const u64 ap = mulmod(mulmod(to_residue(a, p), mbar, p), mbar, p);
    const u64 bp = mulmod(to_residue(b, p), mbar, p);
    product = product * shifted_product_complete_sum(static_cast<i64>(ap), shifts,
                                                     static_cast<i64>(bp), p);
  }
  return product;
}

SumValue shifted_product_sum_direct(i64 a, std::span<const i64> shifts, i64 b, u64 q) {
  require_table_modulus(q);
  if (gcd(to_residue(a, q), q) != 1) fail(ErrorCode::kNotCoprime, "a must be coprime to q");
  if (q == 1) return SumValue::exact(1);
  // kloosterman_row sums every S(a, m; q) term by term, without CRT.
  return shifted_product_sum_row(kloosterman_row(a, q), shifts, b);
}

SumValue shifted_product_sum_row(const std::vector<SumValue>& row, std::span<const i64> shifts,
                                 i64 b) {
  const u64 q = row.size();
  require(q >= 1, ErrorCode::kDomain, "empty Kloosterman row");
  if (q == 1) return SumValue::exact(1);
  return twisted_shifted_sum(row, reduce_all(shifts, q), to_residue(b, q), q);
}

std::vector<i64> subset_shift_offsets(const ModulusSplit& split, const ShiftVector& shifts) {
  const std::size_t l = split.l();
  require(shifts.h.size() == l, ErrorCode::kDomain, "shift vector length must equal l");
  require(l <= 20, ErrorCode::kDomain, "too many differencing steps");
  std::vector<i64> offsets(std::size_t{1} << l, 0);
  for (std::size_t mask = 1; mask < offsets.size(); ++mask) {
    const std::size_t low = static_cast<std::size_t>(__builtin_ctzll(mask));
    offsets[mask] = offsets[mask & (mask - 1)] +
                    static_cast<i64>(split.part(low + 1)) * shifts.h[low];
  }
  return offsets;
}

SumValue t_eval(i64 a_prime, const ModulusSplit& split, const ShiftVector& shifts,
                const IntegerInterval& interval) {
  const std::vector<i64> offsets = subset_shift_offsets(split, shifts);
  const u64 q0 = split.part(0);
  if (gcd(to_residue(a_prime, q0), q0) != 1) {
    fail(ErrorCode::kNotCoprime, "a' must be coprime to q0");
  }
  if (interval.empty()) return SumValue::exact(0);
  const std::vector<SumValue> table = kloosterman_table(a_prime, q0);
  const std::vector<u64> reduced = reduce_all(offsets, q0);
  SumAccumulator acc;
  for (i64 k = interval.begin(); k < interval.end(); ++k) {
    acc.add(shifted_product(table, to_residue(k, q0), reduced, q0));
  }
  return acc.result();
}

bool subset_sums_all_even(std::span<const u64> h, u64 p) {
  std::vector<u64> sums{0};
  for (u64 v : h) {
    const std::size_t n = sums.size();
    for (std::size_t i = 0; i < n; ++i) sums.push_back((sums[i] + v % p) % p);
  }
  std::sort(sums.begin(), sums.end());
  for (std::size_t i = 0; i < sums.size();) {
    std::size_t j = i;
    while (j < sums.size() && sums[j] == sums[i]) ++j;
    if ((j - i) % 2 != 0) return false;
    i = j;
  }
  return true;
}

std::vector<std::vector<u64>> vanishing_lemma_check(u64 p, unsigned l) {
  require(p >= 3, ErrorCode::kDomain, "the vanishing lemma needs p >= 3");
  require(is_prime(p), ErrorCode::kDomain, "p must be prime");
  require(l >= 1, ErrorCode::kDomain, "l must be positive");
  u128 space = 1;
  for (unsigned i = 0; i < l; ++i) {
    space *= p;
    require(space <= 10'000'000, ErrorCode::kDomain, "p^l exceeds 10^7");
  }
  std::vector<std::vector<u64>> counterexamples;
  std::vector<u64> h(l, 1);
  while (true) {
    if (subset_sums_all_even(h, p)) counterexamples.push_back(h);
    std::size_t i = 0;
    while (i < l && h[i] == p - 1) h[i++] = 1;
    if (i == l) break;
    ++h[i];
  }
  return counterexamples;
}

u64 onediff_twist(i64 a, u64 q0, u64 q1) {
  require(q0 >= 1 && q1 >= 1, ErrorCode::kDomain, "moduli must be positive");
  if (q0 == 1) return 0;
  const u64 inv = inv_mod_u(q1 % q0, q0);
  return mulmod(mulmod(to_residue(a, q0), inv, q0), inv, q0);
}

IntegerInterval onediff_window(const IntegerInterval& interval, u64 q1, i64 h) {
  const i64 shift = static_cast<i64>(q1) * h;
  return intersect(interval, IntegerInterval{interval.offset - shift, interval.length});
}

SumValue onediff_inner(i64 a_prime, u64 q0, u64 q1, i64 h, const IntegerInterval& interval,
                       std::span<const i64> shifts) {
  if (gcd(to_residue(a_prime, q0), q0) != 1) {
    fail(ErrorCode::kNotCoprime, "a' must be coprime to q0");
  }
  const IntegerInterval window = onediff_window(interval, q1, h);
  if (window.empty()) return SumValue::exact(0);
  const std::vector<SumValue> table = kloosterman_table(a_prime, q0);
  std::vector<i64> doubled(shifts.begin(), shifts.end());
  for (i64 s : shifts) doubled.push_back(s + static_cast<i64>(q1) * h);
  const std::vector<u64> reduced = reduce_all(doubled, q0);
  SumAccumulator acc;
  for (i64 k = window.begin(); k < window.end(); ++k) {
    acc.add(shifted_product(table, to_residue(k, q0), reduced, q0));
  }
  return acc.result();
}

OneDiffRatio onediff_ratio(i64 a, u64 q0, u64 q1, i64 offset_m, const IntegerInterval& interval,
                           std::span<const i64> shifts) {
  const ModulusSplit split({q0, q1});
  const u64 q = split.modulus();
  if (gcd(to_residue(a, q), q) != 1) fail(ErrorCode::kNotCoprime, "a must be coprime to q");
  require(!shifts.empty(), ErrorCode::kDomain, "need at least one Kloosterman factor");
  if (interval.empty()) return {0, 0, 0};
  const u64 big_k = interval.length;
  require(q1 <= big_k, ErrorCode::kDomain, "differencing needs q1 <= K");

  const UnitRoots roots(q);
  const std::vector<SumValue> table = kloosterman_table(a, q);
  const std::vector<u64> reduced = reduce_all(shifts, q);
  const u64 m_neg = (q - to_residue(offset_m, q)) % q;
  SumAccumulator t_acc;
  for (i64 k = interval.begin(); k < interval.end(); ++k) {
    const u64 kr = to_residue(k, q);
    t_acc.add(root_value(roots, mulmod(m_neg, kr, q)) * shifted_product(table, kr, reduced, q));
  }
  const double t_abs = t_acc.result().abs();

  const i64 a_prime = static_cast<i64>(onediff_twist(a, q0, q1));
  const i64 h_max = static_cast<i64>(big_k / q1);
  double inner_total = 0;
  for (i64 h = -h_max; h <= h_max; ++h) {
    if (h == 0) continue;
    inner_total += onediff_inner(a_prime, q0, q1, h, interval, shifts).abs();
  }
  const double j = static_cast<double>(shifts.size());
  const double rhs = std::pow(static_cast<double>(q1), j + 1) *
                     (static_cast<double>(big_k) * std::pow(static_cast<double>(q0), j) +
                      inner_total);
  const double lhs = t_abs * t_abs;
  return {lhs, rhs, rhs > 0 ? lhs / rhs : 0.0};
}

}  // namespace kloostlab
