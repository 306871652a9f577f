#include "doctest.h"

#include <cmath>
#include <random>

#include "arith.hpp"
#include "kloosterman.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace kloostlab;
using testing::code_of;
using testing::within;

TEST_CASE("hand-computed complete sums") {
  // Ramanujan sums c_q(a) and a prime-modulus value
  CHECK(complete_kloosterman(1, 0, 6).re == doctest::Approx(1));
  CHECK(complete_kloosterman(1, 1, 3).re == doctest::Approx(-1));
  CHECK(complete_kloosterman(6, 0, 15).re == doctest::Approx(-2));
  CHECK(complete_kloosterman(0, 0, 12).re == doctest::Approx(4));
  CHECK(complete_kloosterman(5, 7, 1).re == 1);
  CHECK(code_of([] { complete_kloosterman(1, 1, 0); }) == ErrorCode::kDomain);
}

TEST_CASE("CRT route matches the definition for every small modulus") {
  std::mt19937_64 rng(3);
  for (u64 q = 1; q <= 60; ++q) {
    for (int trial = 0; trial < 6; ++trial) {
      const i64 a = static_cast<i64>(rng() % (3 * q)) - static_cast<i64>(q);
      for (u64 b = 0; b < q; b += 1 + q / 12) {
        const auto want = oracle::kloosterman(a, static_cast<i64>(b), q);
        const auto crt = complete_kloosterman(a, static_cast<i64>(b), q);
        const auto direct = complete_kloosterman(a, static_cast<i64>(b), q, KloostermanMethod::kDirect);
        if (!within(crt, want) || !within(direct, want)) {
          FAIL("S(" << a << ", " << b << "; " << q << ") = " << crt.re << " want " << want.real());
        }
      }
    }
  }
}

TEST_CASE("complete sums are real, symmetric and periodic") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 400; ++trial) {
    const u64 q = 1 + rng() % 2000;
    const i64 a = static_cast<i64>(rng() % q), b = static_cast<i64>(rng() % q);
    const auto s = complete_kloosterman(a, b, q);
    CHECK(std::abs(s.im) <= s.err + 1e-9);
    const auto t = complete_kloosterman(b, a, q);
    CHECK(std::abs(s.re - t.re) <= s.err + t.err + 1e-9);
    const auto shifted = complete_kloosterman(a + static_cast<i64>(q), b - 3 * static_cast<i64>(q), q);
    CHECK(std::abs(s.re - shifted.re) <= s.err + shifted.err + 1e-9);
    // S(a c, b c^{-1}; q) = S(a, b; q) for a unit c
    const u64 c = 1 + rng() % q;
    if (gcd(c, q) == 1 && q > 1) {
      const i64 ac = static_cast<i64>(mulmod(reduce_mod(a, q), c, q));
      const i64 bc = static_cast<i64>(mulmod(reduce_mod(b, q), inv_mod_u(c, q), q));
      const auto u = complete_kloosterman(ac, bc, q);
      CHECK(std::abs(s.re - u.re) <= s.err + u.err + 1e-9);
    }
  }
}

TEST_CASE("Weil bound at primes") {
  for (u64 p : primes_up_to(700)) {
    for (u64 a = 1; a < p; a += 1 + p / 17) {
      for (u64 b = 1; b < p; b += 1 + p / 13) {
        const auto s = complete_kloosterman(static_cast<i64>(a), static_cast<i64>(b), p);
        CHECK(s.abs() <= 2 * std::sqrt(static_cast<double>(p)) + s.err);
      }
    }
  }
}

TEST_CASE("twisted multiplicativity") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 300; ++trial) {
    const u64 q0 = 1 + rng() % 80, q1 = 1 + rng() % 80;
    if (gcd(q0, q1) != 1 || !oracle::squarefree(q0 * q1)) continue;
    const ModulusSplit split({q0, q1});
    const i64 a = static_cast<i64>(rng() % 1000), b = static_cast<i64>(rng() % 1000);
    const auto product = kloosterman_crt(a, b, split);
    const auto direct = complete_kloosterman(a, b, q0 * q1, KloostermanMethod::kDirect);
    const auto dev = deviation(product, direct);
    CHECK(dev.distance <= dev.tolerance);
  }
  CHECK(code_of([] { kloosterman_crt(1, 1, ModulusSplit({3, 5, 7})); }) == ErrorCode::kDomain);
}

TEST_CASE("ModulusSplit validation") {
  CHECK(code_of([] { ModulusSplit({6, 4}); }) == ErrorCode::kNotCoprime);
  CHECK(code_of([] { ModulusSplit({4, 3}); }) == ErrorCode::kNotSquarefree);
  CHECK(code_of([] { ModulusSplit(std::vector<u64>{}); }) == ErrorCode::kDomain);
  const ModulusSplit s({5, 1, 3});
  CHECK(s.modulus() == 15);
  CHECK(s.l() == 2);
}

TEST_CASE("incomplete sums") {
  CHECK(incomplete_kloosterman(1, 6, {4, 4}).re == doctest::Approx(1));
  CHECK(incomplete_kloosterman(1, 7, {3, 0}).abs() == 0);
  CHECK(code_of([] { incomplete_kloosterman(2, 6, {0, 3}); }) == ErrorCode::kNotCoprime);
  CHECK(code_of([] { incomplete_kloosterman(1, 6, {0, 7}); }) == ErrorCode::kDomain);
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 400; ++trial) {
    const u64 q = 2 + rng() % 300;
    const u64 a = 1 + rng() % q;
    if (gcd(a, q) != 1) continue;
    const IntegerInterval interval{static_cast<i64>(rng() % (4 * q)) - 2 * static_cast<i64>(q), rng() % (q + 1)};
    const auto got = incomplete_kloosterman(static_cast<i64>(a), q, interval);
    CHECK(within(got, oracle::incomplete_kloosterman(static_cast<i64>(a), q, interval.offset, interval.length)));
    // a full period is the complete sum with b = 0
    const auto full = incomplete_kloosterman(static_cast<i64>(a), q, {interval.offset, q});
    const auto complete = complete_kloosterman(static_cast<i64>(a), 0, q);
    CHECK(deviation(full, complete).distance <= deviation(full, complete).tolerance);
  }
}

TEST_CASE("normalized sums at primes") {
  CHECK(normalized_kl(1, 3) == doctest::Approx(-1 / std::sqrt(3.0)));
  CHECK(code_of([] { normalized_kl(1, 9); }) == ErrorCode::kDomain);
  CHECK(code_of([] { normalized_kl(7, 7); }) == ErrorCode::kDomain);
  for (u64 p : primes_up_to(400)) {
    for (u64 a = 1; a < p; a += 1 + p / 9) {
      const double v = normalized_kl(static_cast<i64>(a), p);
      CHECK(std::abs(v) <= 2 + 1e-12);
      CHECK(v * std::sqrt(static_cast<double>(p)) ==
            doctest::Approx(static_cast<double>(oracle::kloosterman(static_cast<i64>(a), 1, p).real())).epsilon(1e-9));
    }
  }
}

TEST_CASE("rows and prime tables agree with single evaluations") {
  for (u64 q : {1, 2, 12, 30, 97, 210}) {
    for (i64 a : {1, 5, -7}) {
      const auto row = kloosterman_row(a, q);
      REQUIRE(row.size() == q);
      for (u64 b = 0; b < q; ++b) {
        const auto single = complete_kloosterman(a, static_cast<i64>(b), q);
        CHECK(deviation(row[b], single).distance <= deviation(row[b], single).tolerance);
      }
    }
  }
  for (u64 p : {2, 3, 101, 4093, 4099}) {
    const auto table = prime_kloosterman_table(p);
    REQUIRE(table->size() == p);
    std::mt19937_64 rng(p);
    for (int k = 0; k < 10; ++k) {
      const u64 c = rng() % p;
      const auto direct = complete_kloosterman(static_cast<i64>(c), 1, p, KloostermanMethod::kDirect);
      CHECK(deviation((*table)[c], direct).distance <= deviation((*table)[c], direct).tolerance);
    }
  }
  CHECK(code_of([] { prime_kloosterman_table(15); }) == ErrorCode::kDomain);
}

TEST_CASE("summation primitives") {
  SumAccumulator acc;
  for (u64 r = 0; r < 1000; ++r) acc.add_root(unit_root(r, 1000));
  const auto total = acc.result();
  CHECK(total.abs() <= total.err);
  CHECK(total.err > 0);
  CHECK(total.err < 1e-9);
  const auto i = intersect({0, 10}, {5, 10});
  CHECK(i.offset == 5);
  CHECK(i.length == 5);
  CHECK(intersect({0, 3}, {7, 2}).empty());
  const UnitRoots roots(12);
  CHECK(roots(3).real() == doctest::Approx(0).epsilon(1e-15));
  CHECK(roots(3).imag() == doctest::Approx(1));
}
