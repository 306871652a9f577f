#include "kloosterman.hpp"

#include <cmath>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include "error.hpp"

namespace kloostlab {

namespace {

constexpr u64 kMaxTabledPrime = 4096;

struct TableCache {
  std::shared_mutex mutex;
  std::unordered_map<u64, std::shared_ptr<const std::vector<SumValue>>> tables;
};

TableCache& table_cache() {
  static TableCache cache;
  return cache;
}

// Units mod q and their inverses, indexed by residue (0 for non-units).
struct UnitMap {
  std::vector<std::uint8_t> is_unit;
  std::vector<u64> inverse;
};

UnitMap unit_map(u64 q) {
  UnitMap m{std::vector<std::uint8_t>(q, 0), std::vector<u64>(q, 0)};
  if (q == 1) {
    m.is_unit[0] = 1;
    return m;
  }
  if (is_prime(q)) {
    m.inverse[1] = 1;
    m.is_unit[1] = 1;
    for (u64 n = 2; n < q; ++n) {
      m.inverse[n] = (q - (q / n) * m.inverse[q % n] % q) % q;
      m.is_unit[n] = 1;
    }
    return m;
  }
  for (u64 n = 1; n < q; ++n) {
    if (gcd(n, q) != 1) continue;
    m.is_unit[n] = 1;
    m.inverse[n] = inv_mod_u(n, q);
  }
  return m;
}

SumValue direct_sum(u64 a, u64 b, u64 q) {
  if (q == 1) return SumValue::exact(1);
  const UnitRoots roots(q);
  SumAccumulator acc;
  for (u64 n = 1; n < q; ++n) {
    if (gcd(n, q) != 1) continue;
    const u64 phase = (mulmod(a, inv_mod_u(n, q), q) + mulmod(b, n, q)) % q;
    acc.add_root(roots(phase));
  }
  return acc.result();
}

// S(a, b; p) with a, b already reduced mod the prime p.
SumValue prime_sum(u64 a, u64 b, u64 p) {
  if (a == 0 && b == 0) return SumValue::exact(static_cast<double>(p - 1));
  if (a == 0 || b == 0) return SumValue::exact(-1.0);  // Ramanujan sum c_p(c), p not dividing c
  if (p <= kMaxTabledPrime) {
    // S(a, b; p) = S(ab, 1; p) via n -> n b^{-1}.
    return (*prime_kloosterman_table(p))[mulmod(a, b, p)];
  }
  return direct_sum(a, b, p);
}

}  // namespace

SumValue complete_kloosterman(i64 a, i64 b, u64 q, KloostermanMethod method) {
  require(q >= 1, ErrorCode::kDomain, "modulus must be positive");
  const u64 ar = reduce_mod(a, q), br = reduce_mod(b, q);
  if (method == KloostermanMethod::kDirect || q == 1) return direct_sum(ar, br, q);

  const FactoredInteger fq = factorize(q);
  SumValue product = SumValue::exact(1);
  for (const auto& [p, e] : fq.factors()) {
    u64 pe = 1;
    for (unsigned i = 0; i < e; ++i) pe *= p;
    const u64 cofactor = q / pe;
    const u64 cbar = pe == q ? 1 : inv_mod_u(cofactor % pe, pe);
    const u64 ap = mulmod(ar % pe, cbar, pe);
    const u64 bp = mulmod(br % pe, cbar, pe);
    product = product * (e == 1 ? prime_sum(ap, bp, p) : direct_sum(ap, bp, pe));
  }
  return product;
}

SumValue kloosterman_crt(i64 a, i64 b, const ModulusSplit& split) {
  require(split.parts().size() == 2, ErrorCode::kDomain, "expected a two-part split");
  const u64 q0 = split.part(0), q1 = split.part(1);
  SumValue first = SumValue::exact(1), second = SumValue::exact(1);
  if (q0 > 1) {
    const u64 inv1 = inv_mod_u(q1 % q0, q0);
    const i64 s = static_cast<i64>(inv1);
    first = complete_kloosterman(static_cast<i64>(mulmod(reduce_mod(a, q0), s, q0)),
                                 static_cast<i64>(mulmod(reduce_mod(b, q0), s, q0)), q0);
  }
  if (q1 > 1) {
    const u64 inv0 = inv_mod_u(q0 % q1, q1);
    const i64 s = static_cast<i64>(inv0);
    second = complete_kloosterman(static_cast<i64>(mulmod(reduce_mod(a, q1), s, q1)),
                                  static_cast<i64>(mulmod(reduce_mod(b, q1), s, q1)), q1);
  }
  return first * second;
}

SumValue incomplete_kloosterman(i64 a, u64 q, const IntegerInterval& interval) {
  require(q >= 1, ErrorCode::kDomain, "modulus must be positive");
  require(interval.length <= q, ErrorCode::kDomain, "interval longer than the modulus");
  const u64 ar = reduce_mod(a, q);
  if (gcd(ar, q) != 1) fail(ErrorCode::kNotCoprime, "a must be coprime to q");
  if (q == 1) return SumValue::exact(static_cast<double>(interval.length));
  const UnitRoots roots(q);
  SumAccumulator acc;
  for (i64 n = interval.begin(); n < interval.end(); ++n) {
    const u64 nr = reduce_mod(n, q);
    if (gcd(nr, q) != 1) continue;
    acc.add_root(roots(mulmod(ar, inv_mod_u(nr, q), q)));
  }
  return acc.result();
}

double normalized_kl(i64 a, u64 p) {
  require(is_prime(p), ErrorCode::kDomain, "normalized Kloosterman sum needs a prime modulus");
  require(reduce_mod(a, p) != 0, ErrorCode::kDomain, "p divides a");
  return complete_kloosterman(a, 1, p).re / std::sqrt(static_cast<double>(p));
}

std::vector<SumValue> kloosterman_row(i64 a, u64 q) {
  require(q >= 1, ErrorCode::kDomain, "modulus must be positive");
  require(q <= (u64{1} << 31), ErrorCode::kDomain, "row modulus too large");
  if (q == 1) return {SumValue::exact(1)};
  const u64 ar = reduce_mod(a, q);
  const UnitMap units = unit_map(q);
  std::vector<u64> phase(q, 0);
  for (u64 n = 1; n < q; ++n) {
    if (units.is_unit[n]) phase[n] = mulmod(ar, units.inverse[n], q);
  }
  const UnitRoots roots(q);
  std::vector<SumValue> row(q);
  for (u64 b = 0; b < q; ++b) {
    SumAccumulator acc;
    u64 bn = 0;  // b * n mod q
    for (u64 n = 0; n < q; ++n, bn = (bn + b >= q ? bn + b - q : bn + b)) {
      if (!units.is_unit[n]) continue;
      u64 idx = phase[n] + bn;
      if (idx >= q) idx -= q;
      acc.add_root(roots(idx));
    }
    row[b] = acc.result();
  }
  return row;
}

std::shared_ptr<const std::vector<SumValue>> prime_kloosterman_table(u64 p) {
  require(is_prime(p), ErrorCode::kDomain, "table modulus must be prime");
  TableCache& cache = table_cache();
  {
    std::shared_lock lock(cache.mutex);
    auto it = cache.tables.find(p);
    if (it != cache.tables.end()) return it->second;
  }
  // S(c, 1; p) = S(1, c; p) by n -> n^{-1}.
  auto table = std::make_shared<const std::vector<SumValue>>(kloosterman_row(1, p));
  if (p > kMaxTabledPrime) return table;
  std::unique_lock lock(cache.mutex);
  auto [it, inserted] = cache.tables.emplace(p, std::move(table));
  return it->second;
}

}  // namespace kloostlab
