#include "doctest.h"

#include <random>

#include "arith.hpp"
#include "divisor_ap.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace kloostlab;
using testing::code_of;

namespace {

Rational oracle_main(u64 x, u64 q) {
  const auto [num, den] = oracle::divisor_main_term(x, q);
  return Rational(static_cast<i128>(num), static_cast<i128>(den));
}

}  // namespace

TEST_CASE("hand values") {
  CHECK(divisor_sum_ap({10, 3, 1}) == 10);
  CHECK(divisor_sum_ap({10, 3, 1}, DivisorMethod::kSieve) == 10);
  CHECK(divisor_sum_ap({1, 1, 0}) == 1);
  CHECK(divisor_sum_ap({100, 1, 0}) == 482);
  CHECK(divisor_main_term(10, 3).exact == Rational(9));
  CHECK(error_term({10, 3, 1}).exact == Rational(1));
  CHECK(code_of([] { error_term({10, 3, 3}); }) == ErrorCode::kNotCoprime);
  CHECK(code_of([] { divisor_sum_ap({0, 3, 1}); }) == ErrorCode::kDomain);
  CHECK(code_of([] { divisor_sum_ap({kMaxSieveX + 1, 3, 1}, DivisorMethod::kSieve); }) == ErrorCode::kDomain);
}

TEST_CASE("both methods agree with the naive count") {
  for (u64 x : {1, 2, 17, 100, 999, 2024}) {
    for (u64 q = 1; q <= 40; ++q) {
      for (i64 a = -3; a < static_cast<i64>(q) + 2; ++a) {
        const u64 want = oracle::divisor_sum_ap(x, q, a);
        const u64 h = divisor_sum_ap({x, q, a});
        const u64 s = divisor_sum_ap({x, q, a}, DivisorMethod::kSieve);
        if (h != want || s != want) FAIL("D(" << x << ", " << q << ", " << a << ")");
      }
    }
  }
}

TEST_CASE("hyperbola and sieve agree at larger x") {
  const DivisorTable table(2'000'000);
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const u64 x = 1 + rng() % 2'000'000;
    const u64 q = 1 + rng() % 5000;
    const i64 a = static_cast<i64>(rng() % q);
    CHECK(divisor_sum_ap({x, q, a}) == divisor_sum_ap({x, q, a}, table));
  }
}

TEST_CASE("DivisorTable against direct divisor counts") {
  const DivisorTable table(5000);
  CHECK(table.limit() == 5000);
  for (u64 n = 1; n <= 5000; ++n) CHECK(table.tau(n) == oracle::tau(n));
  CHECK(code_of([] { DivisorTable(0); }) == ErrorCode::kDomain);
  CHECK(code_of([&] { table.progression_sum(5001, 3, 1); }) == ErrorCode::kDomain);
  for (u64 q = 1; q <= 30; ++q) CHECK(table.coprime_sum(4000, q) == oracle::divisor_main_term(4000, q).first);
}

TEST_CASE("main term against the naive coprime sum") {
  for (u64 x : {1, 10, 500, 3001}) {
    for (u64 q = 1; q <= 60; ++q) CHECK(divisor_main_term(x, q).exact == oracle_main(x, q));
  }
  const auto m = divisor_main_term(1000, 7);
  CHECK(m.value == doctest::Approx(m.exact.to_double()));
}

TEST_CASE("progression sums over all residues recover the full sum") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    const u64 x = 1 + rng() % 50'000;
    const u64 q = 1 + rng() % 60;
    u64 total = 0;
    for (u64 a = 0; a < q; ++a) total += divisor_sum_ap({x, q, static_cast<i64>(a)});
    CHECK(total == divisor_sum_ap({x, 1, 0}));
  }
}

TEST_CASE("error terms sum to zero over reduced residues") {
  for (u64 x : {1000, 10'000, 77'777}) {
    for (u64 q : {1, 2, 3, 10, 30, 97, 100}) {
      Rational total;
      for (u64 a = 0; a < q; ++a) {
        if (gcd(a, q) != 1) continue;
        const auto e = error_term({x, q, static_cast<i64>(a)});
        CHECK(e.value == doctest::Approx(e.exact.to_double()));
        total = total + e.exact;
      }
      CHECK(total == Rational(0));
    }
  }
}

TEST_CASE("error_term from precomputed parts") {
  const auto main = divisor_main_term(5000, 9);
  const u64 d = divisor_sum_ap({5000, 9, 4});
  CHECK(error_term(d, main).exact == error_term({5000, 9, 4}).exact);
  CHECK(error_term({5000, 9, 4}).exact == Rational(static_cast<i128>(d)) - oracle_main(5000, 9));
}

TEST_CASE("coprime_divisor_sum at large x matches the table") {
  const DivisorTable table(3'000'000);
  for (u64 q : {1, 6, 35, 2310, 9973}) {
    CHECK(coprime_divisor_sum(3'000'000, factorize(q)) == table.coprime_sum(3'000'000, q));
  }
}
